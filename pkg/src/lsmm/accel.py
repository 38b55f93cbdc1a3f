"""Sequence extrapolation for slowly convergent tails.

Two workhorses:

* :func:`levin_u` -- the Levin u-transformation on consecutive partial
  sums.  Very effective for alternating and unit-circle oscillating
  series.
* :func:`collocation_limit` -- fits sampled partial sums against the
  known asymptotic tail model ``S(n) ~ L + sum c_{p,r} log(n)**p / n**r``
  and solves for the limit ``L``.  This is Richardson extrapolation
  generalised to logarithmic corrections and non-integer powers, which is
  exactly the tail shape of harmonic-weighted coefficient sums.

Both return an error estimate obtained by comparing two transformation
orders (resp. two basis depths); callers treat disagreement beyond the
requested tolerance as a precision failure.
"""

from __future__ import annotations

from typing import Sequence

from mpmath import mp

__all__ = ["levin_u", "collocation_limit", "geometric_indices"]


def levin_u(partial_sums: Sequence, order_gap: int = 3):
    """Levin u-transformation of a run of consecutive partial sums.

    Returns ``(limit, err_est)`` where ``err_est`` compares the final
    transformation order with one ``order_gap`` lower.  The remainder
    estimate is the u-variant ``(j+1) * a_j``.
    """
    S = list(partial_sums)
    n = len(S)
    if n < 4:
        raise ValueError("need at least 4 partial sums")
    terms = [S[0]] + [S[i] - S[i - 1] for i in range(1, n)]
    num = []
    den = []
    for j in range(n):
        w = (j + 1) * terms[j]
        if w == 0:
            # stalled term: perturb with a harmless tiny weight
            w = mp.mpf(10) ** (-mp.dps * 2)
        num.append(S[j] / w)
        den.append(1 / w)
    results = []
    for k in range(1, n):
        for j in range(n - k):
            c = mp.mpf(j + k) / (j + k + 1)
            f = c ** (k - 1)
            num[j] = num[j + 1] - f * num[j]
            den[j] = den[j + 1] - f * den[j]
        if den[0] != 0:
            results.append(num[0] / den[0])
    if not results:
        raise ValueError("transformation degenerated")
    limit = results[-1]
    prev = results[-1 - order_gap] if len(results) > order_gap else results[0]
    return limit, abs(limit - prev)


def levin_best(partial_sums: Sequence, windows: Sequence[int] = (60, 90, 120, 150)):
    """Run :func:`levin_u` over several trailing windows, keep the best.

    High transformation orders eventually amplify rounding error, so the
    optimal window is moderate and series-dependent; scanning a few sizes
    and trusting the smallest two-order disagreement is robust.
    """
    best = None
    for w in windows:
        if len(partial_sums) < w + 1:
            continue
        try:
            limit, est = levin_u(partial_sums[-w:])
        except (ValueError, ZeroDivisionError):
            continue
        if best is None or est < best[1]:
            best = (limit, est)
    if best is None:
        return levin_u(partial_sums)
    return best


def collocation_limit(samples: Sequence[tuple], exponents: Sequence,
                      log_powers: int = 0):
    """Extrapolate sampled partial sums against a log-power tail basis.

    Parameters
    ----------
    samples:
        Pairs ``(n, S_n)``; the last ``len(basis)+1`` pairs are used.
    exponents:
        Inverse powers ``r`` to include; each contributes basis functions
        ``log(n)**p / n**r`` for ``p = 0 .. log_powers``.
    log_powers:
        Highest power of ``log n`` in the model.

    Returns ``(limit, err_est)`` with the estimate taken from re-solving
    at one basis level less.
    """
    full = _solve_colloc(samples, exponents, log_powers)
    reduced_exps = list(exponents)[:-1] if len(exponents) > 1 else list(exponents)
    reduced = _solve_colloc(samples, reduced_exps, log_powers)
    return full, abs(full - reduced)


def _solve_colloc(samples, exponents, log_powers):
    basis = [(p, r) for p in range(log_powers + 1) for r in exponents]
    m = len(basis) + 1
    if len(samples) < m:
        raise ValueError(f"need {m} samples, have {len(samples)}")
    pts = list(samples)[-m:]
    A = mp.matrix(m, m)
    is_complex = any(isinstance(s, mp.mpc) for _, s in pts)
    rhs_re = mp.matrix(m, 1)
    rhs_im = mp.matrix(m, 1)
    for i, (n, s) in enumerate(pts):
        A[i, 0] = mp.mpf(1)
        ln = mp.log(n)
        for j, (p, r) in enumerate(basis):
            A[i, j + 1] = ln ** p * mp.mpf(n) ** (-mp.mpf(r))
        if is_complex:
            s = mp.mpc(s)
            rhs_re[i] = s.real
            rhs_im[i] = s.imag
        else:
            rhs_re[i] = s
    sol_re = mp.lu_solve(A, rhs_re)
    if not is_complex:
        return sol_re[0]
    sol_im = mp.lu_solve(A, rhs_im)
    return mp.mpc(sol_re[0], sol_im[0])


def geometric_indices(start: int, stop: int, ratio: float = 1.13) -> list[int]:
    """Strictly increasing integer checkpoints growing geometrically."""
    out = []
    x = float(start)
    while x <= stop:
        n = int(round(x))
        if not out or n > out[-1]:
            out.append(n)
        x = max(x * ratio, x + 1)
    return out
