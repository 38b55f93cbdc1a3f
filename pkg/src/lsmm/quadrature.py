"""Certified-precision numerical integration oracles.

One-dimensional integration is tanh-sinh (double exponential) with level
doubling: the trapezoidal step is halved until two successive estimates
agree within the requested tolerance, and the last level-to-level change is
reported as a conservative error bound.  The variable change concentrates
nodes doubly-exponentially at the endpoints, so integrands with endpoint
logarithmic (or worse integrable power) singularities converge cleanly;
interior kinks must be passed as split points.

Multi-dimensional integrals nest the 1-D rule (the default through
dimension 3) or fall back to scrambled-Sobol quasi-Monte Carlo with
randomized replications for an empirical error bar (the default in
dimension 4).

Node tables are cached per (level, precision); the dominant cost is always
integrand evaluation.  Non-finite integrand values at isolated nodes (for
example an exact log-zero hit at the lowest level) are treated as zero;
the level-doubling error estimate catches any genuine problem.
"""

from __future__ import annotations

import math
from typing import Callable, Sequence

import numpy as np
from mpmath import mp

from .mpcore import PrecisionContext, PrecisionError

__all__ = ["integrate_1d", "integrate_nd", "qmc_integrate", "QuadratureError"]


class QuadratureError(PrecisionError):
    """Level doubling exhausted without meeting the tolerance."""


# ---------------------------------------------------------------------------
# tanh-sinh nodes:  x = tanh(pi/2 * sinh(t)),  stored as (delta, weight)
# with delta = 1 - x computed stably; nodes are the NEW points of each level.
# ---------------------------------------------------------------------------

_NODE_CACHE: dict = {}


def _ts_new_nodes(level: int, dps: int):
    """New (delta, weight) pairs introduced at ``level`` for precision dps."""
    key = (level, dps)
    hit = _NODE_CACHE.get(key)
    if hit is not None:
        return hit
    with mp.workdps(int(dps * 1.3) + 15):
        h = mp.mpf(1) / 2 ** level
        delta_cut = mp.mpf(10) ** (-dps - 6)
        pi2 = mp.pi / 2
        nodes = []
        k = 0 if level == 0 else 1
        step = 1 if level == 0 else 2
        while True:
            t = k * h
            s = mp.sinh(t)
            ch = mp.cosh(t)
            u = pi2 * s
            chu = mp.cosh(u)
            # delta = 1 - tanh(u) = 2 / (exp(2u) + 1), stable near the endpoint
            delta = 2 / (mp.exp(2 * u) + 1)
            w = pi2 * ch / chu ** 2
            if delta < delta_cut or w < delta_cut:
                break
            nodes.append((+delta, +w))
            k += step
    _NODE_CACHE[key] = (nodes, h)
    return _NODE_CACHE[key]


def _eval_node(f, x):
    v = f(x)
    try:
        ok = mp.isfinite(v)
    except (TypeError, ValueError):
        ok = True
    return v if ok else mp.mpf(0)


def _ts_interval(f, a, b, ctx: PrecisionContext, tol):
    """tanh-sinh on a finite interval [a, b] with level doubling."""
    dps = mp.dps
    half = (b - a) / 2
    mid = (a + b) / 2
    total = mp.mpf(0)
    prev = None
    err_prev = None
    for level in range(0, ctx.quadrature_levels + 1):
        nodes, h = _ts_new_nodes(level, dps)
        new_sum = mp.mpf(0)
        for i, (delta, w) in enumerate(nodes):
            off = half * delta
            if level == 0 and i == 0:
                new_sum += w * _eval_node(f, mid)
                continue
            new_sum += w * (_eval_node(f, a + off) + _eval_node(f, b - off))
        if level == 0:
            total = new_sum * h
        else:
            total = total / 2 + new_sum * h
        est = total * half
        if prev is not None:
            err = abs(est - prev)
            if level >= 2 and err <= tol:
                return est, max(err, (abs(est) + 1) * mp.mpf(10) ** (-dps + 2))
            err_prev = err
        prev = est
    raise QuadratureError(
        f"tanh-sinh failed to reach tol={mp.nstr(tol, 3)} "
        f"in {ctx.quadrature_levels} levels (last change {mp.nstr(err_prev, 3) if err_prev is not None else '?'})")


def integrate_1d(f: Callable, a, b, ctx: PrecisionContext,
                 points: Sequence | None = None, tol=None):
    """Integrate f over [a, b] by tanh-sinh with level doubling.

    ``points`` lists interior split locations (kinks, zeros of a log
    factor); ``b`` may be ``mp.inf``.  Returns ``(value, error_bound)``
    and raises :class:`QuadratureError` when the levels are exhausted.
    """
    with ctx.working():
        tol = mp.mpf(tol) if tol is not None else ctx.eps() / 2
        a = mp.mpf(a)
        segments = []
        inner = sorted(mp.mpf(p) for p in (points or ()))
        if b == mp.inf:
            segs = [a] + [p for p in inner if p > a] + [mp.inf]
        else:
            bb = mp.mpf(b)
            segs = [a] + [p for p in inner if a < p < bb] + [bb]
        total = mp.mpf(0)
        err = mp.mpf(0)
        per_tol = tol / max(1, len(segs) - 1)
        for lo, hi in zip(segs[:-1], segs[1:]):
            if hi == mp.inf:
                # map [lo, inf) -> [0, 1) via x = lo + t/(1-t)
                def g(t, lo=lo):
                    om = 1 - t
                    return f(lo + t / om) / om ** 2
                v, e = _ts_interval(g, mp.mpf(0), mp.mpf(1), ctx, per_tol)
            else:
                v, e = _ts_interval(f, lo, hi, ctx, per_tol)
            total += v
            err += e
        return +total, +err


def integrate_nd(f: Callable, bounds: Sequence, ctx: PrecisionContext,
                 method: str = "nested_tanh_sinh",
                 splits: Sequence | None = None, tol=None,
                 qmc_options: dict | None = None):
    """Integrate a scalar function of 2..4 variables over a box.

    ``bounds`` is a sequence of (low, high) pairs.  For the nested rule,
    ``splits[i]`` may be a list of interior points for dimension ``i`` or
    a callable receiving the already-fixed outer coordinates and returning
    such a list.  The qmc method evaluates ``f`` in float precision on a
    scrambled Sobol set with randomized replications.

    Returns ``(value, error_estimate)``.
    """
    dim = len(bounds)
    if not 2 <= dim <= 4:
        raise ValueError("dimension must be between 2 and 4")
    if method == "qmc":
        opts = qmc_options or {}
        return qmc_integrate(f, bounds, ctx, **opts)
    if method != "nested_tanh_sinh":
        raise ValueError(f"unknown method {method!r}")
    with ctx.working():
        tol = mp.mpf(tol) if tol is not None else ctx.eps() / 2
        return _nested(f, bounds, ctx, splits, tol, ())


def _nested(f, bounds, ctx, splits, tol, fixed):
    (lo, hi), rest = bounds[0], bounds[1:]
    spl = None
    if splits:
        spl = splits[0]
        if callable(spl):
            spl = spl(*fixed)
    if not rest:
        def g(x):
            return f(*fixed, x)
        v, e = integrate_1d(g, lo, hi, ctx, points=spl, tol=tol)
        return v, e
    inner_tol = tol / 8
    err_inner_max = mp.mpf(0)

    def g(x):
        nonlocal err_inner_max
        v, e = _nested(f, rest, ctx, splits[1:] if splits else None,
                       inner_tol, fixed + (x,))
        if e > err_inner_max:
            err_inner_max = e
        return v

    v, e = integrate_1d(g, lo, hi, ctx, points=spl, tol=tol)
    width = mp.mpf(hi) - mp.mpf(lo)
    return v, e + err_inner_max * width


def qmc_integrate(f: Callable, bounds: Sequence, ctx: PrecisionContext,
                  replicas: int = 8, pow2: int = 14, seed: int = 20110317,
                  vectorized: Callable | None = None):
    """Scrambled-Sobol integration with replication error bars.

    ``vectorized``, if given, maps an (N, dim) float array to N values and
    is used instead of pointwise calls to ``f``.  The error estimate is
    three standard errors of the replica mean: heuristic, not certified.
    """
    from scipy.stats import qmc as sq
    dim = len(bounds)
    lows = np.array([float(lo) for lo, _ in bounds])
    spans = np.array([float(hi) - float(lo) for lo, hi in bounds])
    volume = float(np.prod(spans))
    means = []
    for r in range(max(replicas, 8)):
        eng = sq.Sobol(d=dim, scramble=True, seed=seed + 7 * r)
        pts = eng.random_base2(m=pow2) * spans + lows
        if vectorized is not None:
            vals = np.asarray(vectorized(pts), dtype=float)
        else:
            vals = np.fromiter((float(f(*row)) for row in pts), dtype=float,
                               count=len(pts))
        vals = np.where(np.isfinite(vals), vals, 0.0)
        means.append(vals.mean())
    means = np.array(means)
    value = means.mean() * volume
    stderr = means.std(ddof=1) / math.sqrt(len(means)) * abs(volume)
    with ctx.working():
        return mp.mpf(value), mp.mpf(max(stderr * 3, 1e-15))
