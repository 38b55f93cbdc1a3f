"""High-precision special functions: zeta values, nested polylogarithms on
the closed unit disk, Clausen/Glaisher functions, inverse tangent integrals,
Kummer-type lambda constants, the eta product, and generalized
hypergeometric series.

Depth-1 polylogarithms and integer zeta values delegate to mpmath, whose
integer-zeta implementation is the standard binomial-accelerated alternating
series.  Everything of depth >= 2 is summed here as an explicit nested sum
with a certified truncation bound:

* ``z = 1``           crude bound  N**(1-a1)/(a1-1) * (1+log N)**(depth-1)
* ``z = -1``          first-omitted-term bound (terms eventually decrease)
* ``|z| = 1, z != 1`` Abel-summation bound  2*c_{N+1}/|sin(theta/2)|
* ``|z| < 1``         geometric domination

When the certified bound would require an infeasible number of terms (heads
with a1 = 2 are the usual culprits), the sum switches to sequence
extrapolation -- Levin's u-transformation for oscillating series and
log-power collocation for monotone ones -- and certifies instead by
agreement between two transformation orders.

Angles may be passed as ``Fraction`` instances, meaning that multiple of
pi; rational angles use exact root-of-unity cycles so the nested sums run
in real arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

from mpmath import mp

from .accel import collocation_limit, geometric_indices, levin_best, levin_u
from .mpcore import PrecisionContext, PrecisionError

__all__ = [
    "Composition", "mzv", "multiple_polylog", "clausen_glaisher",
    "inverse_tangent_integral", "kummer_lambda", "eta_q",
    "hypergeometric_pfq", "cl2_series", "basis_value", "ETA_CROSSOVER_T",
]


@dataclass(frozen=True)
class Composition:
    """Exponent tuple (a1, ..., ak) of a nested polylogarithm."""

    parts: tuple

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts)
        if not parts or any(p < 1 for p in parts):
            raise ValueError("parts must be positive integers")
        object.__setattr__(self, "parts", parts)

    @property
    def weight(self) -> int:
        return sum(self.parts)

    @property
    def depth(self) -> int:
        return len(self.parts)

    @property
    def admissible(self) -> bool:
        """Convergent on the unit circle (and at 1)."""
        return self.parts[0] >= 2


def _comp(a) -> Composition:
    if isinstance(a, Composition):
        return a
    if isinstance(a, int):
        return Composition((a,))
    return Composition(tuple(a))


# ---------------------------------------------------------------------------
# memo table: concurrent reads are safe, writes are idempotent
# ---------------------------------------------------------------------------

_MEMO: dict = {}


def _memo_get(key):
    return _MEMO.get(key)


def _memo_put(key, value):
    _MEMO[key] = value
    return value


# ---------------------------------------------------------------------------
# angles
# ---------------------------------------------------------------------------

def angle_value(theta):
    """Numeric angle; Fraction input means that multiple of pi."""
    if isinstance(theta, Fraction):
        return mp.pi * theta.numerator / theta.denominator
    return mp.mpf(theta)


def angle_fraction(theta) -> Fraction | None:
    if isinstance(theta, Fraction):
        return theta
    if isinstance(theta, int):
        return Fraction(theta)
    return None


def _unit_cycle(frac: Fraction):
    """Values of exp(i*pi*frac)^n over one full period."""
    p, q = frac.numerator, frac.denominator
    period = 2 * q // gcd(p, 2 * q) if p else 1
    cyc = [mp.expjpi(mp.mpf(p * r) / q) for r in range(period)]
    return period, cyc


# ---------------------------------------------------------------------------
# nested polylogarithm cores
# ---------------------------------------------------------------------------

def _nested_sum_real(parts: tuple, N: int, period: int,
                     weight_fn=None, snapshots: Sequence[int] = ()):
    """Sum sum_{n<=N} I2(n)/n**a1 into per-residue buckets.

    ``I2`` is the depth-(d-1) inner nested sum.  Returns (buckets, snaps,
    last_coeffs) where snaps maps snapshot index -> bucket copies and
    last_coeffs is a window of the final coefficient magnitudes
    c_n = |I2(n)|/n**a1 used for tail bounds.
    """
    a1 = parts[0]
    rest = parts[1:]
    d = len(rest)
    inner = [mp.mpf(0)] * d          # inner[j] = I_{j+2}(n) for current n
    buckets = [mp.mpf(0)] * period
    snapset = set(snapshots)
    snaps = {}
    coeff_window: list = []
    keep = 8
    for n in range(1, N + 1):
        if n > 1 and d:
            # absorb the new element m = n-1, outermost level first so each
            # level consumes the deeper level's value before m is included
            m = n - 1
            for j in range(d):
                upper = inner[j + 1] if j + 1 < d else mp.mpf(1)
                inner[j] += upper / mp.mpf(m) ** rest[j]
        c = (inner[0] if d else mp.mpf(1)) / mp.mpf(n) ** a1
        buckets[n % period] += c
        if n > N - keep:
            coeff_window.append(abs(c))
        if n in snapset:
            snaps[n] = list(buckets)
    return buckets, snaps, coeff_window


def _nested_sum_complex(parts: tuple, z, N: int):
    """Complex partial sums of the nested polylog series (consecutive)."""
    a1 = parts[0]
    rest = parts[1:]
    d = len(rest)
    inner = [mp.mpf(0)] * d
    zp = mp.mpc(1)
    S = mp.mpc(0)
    psums = []
    for n in range(1, N + 1):
        if n > 1 and d:
            m = n - 1
            for j in range(d):
                upper = inner[j + 1] if j + 1 < d else mp.mpf(1)
                inner[j] += upper / mp.mpf(m) ** rest[j]
        zp *= z
        S += zp * (inner[0] if d else mp.mpf(1)) / mp.mpf(n) ** a1
        psums.append(S)
    return psums


def _crude_bound_N(a1: int, depth: int, tol) -> int:
    """Smallest power-of-two-ish N with the crude z=1 tail bound below tol."""
    from math import e, log
    N = 64
    while N < 10 ** 9:
        bound = (1 + log(N)) ** (depth - 1) / ((a1 - 1) * N ** (a1 - 1))
        bound *= e ** ((depth - 1) / max(a1 - 1, 1))   # integral remainder safety
        if bound < tol:
            return N
        N *= 2
    return N


def _combine_buckets(buckets, cycle):
    total = mp.mpc(0)
    for r, s in enumerate(buckets):
        total += cycle[r % len(cycle)] * s
    return total


def multiple_polylog(a, z, ctx: PrecisionContext):
    """Nested polylogarithm Li_{a1,...,ak}(z) on the closed unit disk.

    ``z`` may be complex with |z| <= 1, or a Fraction t meaning
    z = exp(i*pi*t).  On the unit circle the head exponent a1 must be
    at least 2 unless the depth is 1 and |z| < 1.
    """
    a = _comp(a)
    frac = angle_fraction(z) if isinstance(z, (Fraction, int)) else None
    with ctx.working():
        if frac is not None:
            zval = mp.expjpi(mp.mpf(frac.numerator) / frac.denominator)
            on_circle = True
        else:
            zval = mp.mpc(z)
            on_circle = mp.almosteq(abs(zval), 1, rel_eps=0, abs_eps=mp.mpf(10) ** (-mp.dps + 2))
            if abs(zval) > 1 and not on_circle:
                raise ValueError("|z| must be <= 1")
        if on_circle and not a.admissible:
            raise ValueError("head exponent must be >= 2 on the unit circle")

        key = ("mpl", a.parts, str(frac) if frac is not None else mp.nstr(zval, mp.dps), mp.dps)
        hit = _memo_get(key)
        if hit is not None:
            return hit

        if a.depth == 1:
            val = mp.polylog(a.parts[0], zval)
            return _memo_put(key, val)

        tol = ctx.eps()
        if not on_circle:
            val = _mpl_inside_disk(a, zval, ctx, tol)
        elif frac is not None and frac.denominator <= 64:
            val = _mpl_rational_angle(a, frac, ctx, tol)
        else:
            val = _mpl_circle_generic(a, zval, ctx, tol)
        return _memo_put(key, val)


def _mpl_inside_disk(a, zval, ctx, tol):
    r = abs(zval)
    parts = a.parts
    rest = parts[1:]
    d = len(rest)
    inner = [mp.mpf(0)] * d
    zp = mp.mpc(1)
    S = mp.mpc(0)
    geo = r / (1 - r)
    for n in range(1, ctx.max_terms):
        if n > 1 and d:
            m = n - 1
            for j in range(d):
                upper = inner[j + 1] if j + 1 < d else mp.mpf(1)
                inner[j] += upper / mp.mpf(m) ** rest[j]
        zp *= zval
        t = zp * (inner[0] if d else mp.mpf(1)) / mp.mpf(n) ** parts[0]
        S += t
        # inner sums grow at most logarithmically: factor 2 covers the drift
        if n > 8 and 2 * abs(t) * geo < tol:
            return S
    raise PrecisionError("series for Li inside the disk did not converge")


def _mpl_rational_angle(a, frac: Fraction, ctx, tol):
    parts = a.parts
    period, cycle = _unit_cycle(frac)
    z_is_one = (period == 1)
    theta = angle_value(frac)
    if z_is_one:
        N = _crude_bound_N(parts[0], a.depth, tol)
        if N <= min(ctx.max_terms, 500_000):
            buckets, _, _ = _nested_sum_real(parts, N, 1)
            return mp.mpc(buckets[0])
        return _mpl_accelerated_monotone(parts, ctx, tol)
    # z != 1: Abel bound 2*c_{N+1}/|sin(theta/2)|
    sin_half = abs(mp.sin(theta / 2))
    if sin_half == 0:
        sin_half = abs(mp.sin(mp.pi * mp.mpf(frac.numerator % (2 * frac.denominator)) /
                              frac.denominator / 2))
    from math import log
    target = float(tol * sin_half / 2)
    N = 64
    while N < 10 ** 9:
        c = (1 + log(N)) ** (a.depth - 1) / N ** parts[0]
        if c < target:
            break
        N *= 2
    if N <= min(ctx.max_terms, 600_000):
        buckets, _, window = _nested_sum_real(parts, N, period)
        bound = 2 * max(window) / sin_half
        if bound > tol * 4:
            raise PrecisionError("Abel tail bound not met")
        return _combine_buckets(buckets, cycle)
    # slow head (a1 == 2 and tight tolerance): Levin acceleration
    zval = mp.expjpi(mp.mpf(frac.numerator) / frac.denominator)
    return _mpl_levin(parts, zval, ctx, tol)


def _mpl_circle_generic(a, zval, ctx, tol):
    parts = a.parts
    theta = mp.arg(zval)
    sin_half = abs(mp.sin(theta / 2))
    from math import log
    target = float(tol * sin_half / 2) if sin_half > 0 else 0.0
    N = 64
    while N < 10 ** 9 and target > 0:
        if (1 + log(N)) ** (a.depth - 1) / N ** parts[0] < target:
            break
        N *= 2
    if target > 0 and N <= min(ctx.max_terms, 600_000):
        psums = _nested_sum_complex(parts, zval, N)
        return psums[-1]
    return _mpl_levin(parts, zval, ctx, tol)


def _mpl_levin(parts, zval, ctx, tol):
    N = 420
    for _ in range(4):
        psums = _nested_sum_complex(parts, zval, N)
        limit, est = levin_best(psums)
        if est < tol:
            return limit
        N *= 2
    raise PrecisionError("Levin acceleration did not reach tolerance")


def _mpl_accelerated_monotone(parts, ctx, tol):
    depth = len(parts)
    N = 6000
    limit, est = None, mp.inf
    while N <= 200_000:
        idx = geometric_indices(max(60, parts[0] * 12), N, 1.10)
        _, snaps, _ = _nested_sum_real(parts, N, 1, snapshots=idx)
        samples = [(n, snaps[n][0]) for n in idx if n in snaps]
        exps = [parts[0] - 1 + j for j in range(7)]
        try:
            limit, est = collocation_limit(samples, exps, log_powers=depth - 1)
        except ValueError:
            limit, est = None, mp.inf
        if limit is not None and est < tol:
            return mp.mpc(limit)
        N *= 4
    raise PrecisionError("collocation acceleration did not reach tolerance")


def mzv(a, ctx: PrecisionContext):
    """Multiple zeta value zeta(a1, ..., ak)."""
    a = _comp(a)
    if not a.admissible:
        raise ValueError("MZV requires a1 >= 2")
    with ctx.working():
        if a.depth == 1:
            return +mp.zeta(a.parts[0])
        return multiple_polylog(a, Fraction(0), ctx).real


def clausen_glaisher(kind: str, a, theta, ctx: PrecisionContext):
    """Clausen (Cl) or Glaisher (Gl) function of a composition at theta.

    The value is the imaginary or real part of the nested polylogarithm at
    exp(i*theta), with the role of Im/Re swapping with the parity of the
    weight: even weight pairs Cl with Im, odd weight pairs Cl with Re.
    """
    kind = kind.lower()
    if kind not in ("cl", "gl"):
        raise ValueError("kind must be 'Cl' or 'Gl'")
    a = _comp(a)
    if not a.admissible:
        raise ValueError("need a1 >= 2 for convergence on the circle")
    frac = angle_fraction(theta)
    with ctx.working():
        z = frac if frac is not None else mp.expjpi(mp.mpf(theta) / mp.pi)
        li = multiple_polylog(a, z, ctx)
        even = (a.weight % 2 == 0)
        if kind == "cl":
            return li.imag if even else li.real
        return li.real if even else li.imag


def inverse_tangent_integral(k: int, x, ctx: PrecisionContext):
    """Ti_k(x) = sum (-1)^n x^(2n+1)/(2n+1)^k for |x| <= 1."""
    if k < 2:
        raise ValueError("order must be >= 2")
    with ctx.working():
        x = mp.mpf(x)
        if abs(x) > 1:
            raise ValueError("|x| must be <= 1")
        tol = ctx.eps()
        S = mp.mpf(0)
        xp = x
        x2 = x * x
        for n in range(ctx.max_terms):
            t = xp / mp.mpf(2 * n + 1) ** k
            S += t if n % 2 == 0 else -t
            xp *= x2
            # alternating with decreasing magnitude: first omitted term bound
            if abs(xp) / mp.mpf(2 * n + 3) ** k < tol:
                return +S
        raise PrecisionError("Ti series did not converge")


def kummer_lambda(n: int, x, ctx: PrecisionContext):
    """Kummer-type combination of Li_{n-k}(x) with powers of log|x|."""
    if n < 1:
        raise ValueError("n must be >= 1")
    with ctx.working():
        x = mp.mpf(x)
        if not 0 < abs(x) <= 1:
            raise ValueError("need 0 < |x| <= 1")
        L = mp.log(abs(x))
        total = mp.mpf(0)
        if n >= 2:
            s = mp.mpf(0)
            for k in range(n - 1):
                s += (-1) ** k / mp.factorial(k) * mp.polylog(n - k, x) * L ** k
            total += mp.factorial(n - 2) * s
        total += mp.mpf((-1) ** n) / n * L ** n
        return +total


# ---------------------------------------------------------------------------
# eta function at nome q = exp(-t)
# ---------------------------------------------------------------------------

ETA_CROSSOVER_T = "pi*sqrt(2)"


def eta_q(t, ctx: PrecisionContext):
    """Lacunary eta product at nome q = exp(-t), t > 0.

    Below the crossover t = pi*sqrt(2) the modular inversion
    eta(-1/tau) = sqrt(-i*tau)*eta(tau) is applied first, so the theta
    series always operates at a small nome.
    """
    with ctx.working():
        t = mp.mpf(t)
        if t <= 0:
            raise ValueError("t must be positive")
        crossover = mp.pi * mp.sqrt(2)
        if t < crossover:
            return mp.sqrt(2 * mp.pi / t) * _eta_theta_series(4 * mp.pi ** 2 / t)
        return _eta_theta_series(t)


def _eta_theta_series(t):
    q = mp.e ** (-t)
    s = mp.mpf(1)
    n = 1
    cutoff = mp.dps * mp.log(10) + 10
    while True:
        e_hi = n * (3 * n + 1) // 2
        e_lo = n * (3 * n - 1) // 2
        term = q ** e_hi + q ** e_lo
        s += term if n % 2 == 0 else -term
        if e_lo * t > cutoff:
            break
        n += 1
    return q ** (mp.mpf(1) / 24) * s


def eta_product_form(t, ctx: PrecisionContext, factors: int | None = None):
    """Direct q^(1/24) * prod(1 - q^n); slow near t = 0, used as an oracle."""
    with ctx.working():
        t = mp.mpf(t)
        q = mp.e ** (-t)
        if factors is None:
            factors = int(float((mp.dps * mp.log(10) + 10) / t)) + 2
        prod = mp.mpf(1)
        qn = mp.mpf(1)
        for _ in range(factors):
            qn *= q
            prod *= (1 - qn)
        return q ** (mp.mpf(1) / 24) * prod


# ---------------------------------------------------------------------------
# generalized hypergeometric series
# ---------------------------------------------------------------------------

def hypergeometric_pfq(upper: Sequence, lower: Sequence, z, ctx: PrecisionContext):
    """Direct summation of pFq with certified truncation.

    Requires |z| < 1, or |z| = 1 with positive parameter excess
    sum(lower) - sum(upper).  Lower parameters must avoid the nonpositive
    integers.
    """
    with ctx.working():
        ups = [mp.mpf(u) if not isinstance(u, Fraction) else mp.mpf(u.numerator) / u.denominator
               for u in upper]
        los = [mp.mpf(l) if not isinstance(l, Fraction) else mp.mpf(l.numerator) / l.denominator
               for l in lower]
        z = mp.mpf(z)
        for l in los:
            if l <= 0 and l == mp.floor(l):
                raise ValueError("lower parameter at a nonpositive integer pole")
        if abs(z) > 1:
            raise ValueError("|z| > 1 diverges")
        excess = mp.fsum(los) - mp.fsum(ups) + 1  # +1 from the k! in the denominator
        if abs(z) == 1 and excess <= 0:
            raise ValueError("divergent at |z| = 1 (nonpositive parameter excess)")
        tol = ctx.eps()
        if abs(z) < 1:
            return _pfq_direct_geometric(ups, los, z, tol, ctx)
        if z == -1:
            return _pfq_direct_alternating(ups, los, tol, ctx)
        return _pfq_unit_collocation(ups, los, excess, tol, ctx)


def _pfq_direct_geometric(ups, los, z, tol, ctx):
    S = mp.mpf(0)
    t = mp.mpf(1)
    r = abs(z)
    for k in range(ctx.max_terms):
        S += t
        num = mp.mpf(1)
        for u in ups:
            num *= (u + k)
        den = mp.mpf(k + 1)
        for l in los:
            den *= (l + k)
        t = t * num / den * z
        if k > 4 and abs(t) * r / (1 - r) * 2 < tol:
            return S + t
    raise PrecisionError("pFq did not converge")


def _pfq_direct_alternating(ups, los, tol, ctx):
    S = mp.mpf(0)
    t = mp.mpf(1)
    for k in range(ctx.max_terms):
        S += t
        num = mp.mpf(1)
        for u in ups:
            num *= (u + k)
        den = mp.mpf(k + 1)
        for l in los:
            den *= (l + k)
        t = -t * num / den
        if k > 8 and abs(t) < tol:
            return S
    raise PrecisionError("alternating pFq did not converge")


def _pfq_unit_collocation(ups, los, excess, tol, ctx):
    # partial-sum tails decay like N**(1-excess); include neighbouring
    # integer shifts in case of parameter degeneracies
    base = excess - 1
    exps = sorted({base + j for j in range(6)} |
                  {mp.floor(base) + 1 + j for j in range(3)})
    N = 3000
    limit, est = None, mp.inf
    for _ in range(5):
        idx = geometric_indices(64, N, 1.10)
        idxset = set(idx)
        S = mp.mpf(0)
        t = mp.mpf(1)
        samples = []
        for k in range(N + 1):
            S += t
            num = mp.mpf(1)
            for u in ups:
                num *= (u + k)
            den = mp.mpf(k + 1)
            for l in los:
                den *= (l + k)
            t = t * num / den
            if (k + 1) in idxset:
                samples.append((k + 1, S))
        try:
            limit, est = collocation_limit(samples, exps, log_powers=0)
        except ValueError:
            limit, est = None, mp.inf
        if limit is not None and est < tol:
            return limit
        N *= 2
    raise PrecisionError("pFq collocation did not reach tolerance")


# ---------------------------------------------------------------------------
# fast Clausen function of order 2 (power series on [0, pi])
# ---------------------------------------------------------------------------

def _cl2_coeffs(dps: int):
    key = ("cl2", dps)
    hit = _memo_get(key)
    if hit is not None:
        return hit
    with mp.workdps(dps + 8):
        coeffs = []
        fourpi2 = 4 * mp.pi ** 2
        m = 1
        while True:
            c = mp.zeta(2 * m) / (m * (2 * m + 1) * fourpi2 ** m)
            coeffs.append(c)
            if c * mp.pi ** (2 * m + 1) < mp.mpf(10) ** (-dps - 6):
                break
            m += 1
    return _memo_put(key, coeffs)


def cl2_series(theta):
    """Clausen function Cl_2 on [0, pi] via its log-extracted power series.

    Much cheaper than a polylogarithm call; intended for use inside
    quadrature integrands.  Uses the current mpmath precision.
    """
    theta = mp.mpf(theta)
    if theta <= 0:
        return mp.mpf(0)
    coeffs = _cl2_coeffs(mp.dps)
    th2 = theta * theta
    p = theta
    s = mp.mpf(0)
    for c in coeffs:
        p *= th2
        s += c * p
    return theta - theta * mp.log(theta) + s


# ---------------------------------------------------------------------------
# numeric realisation of the symbolic basis constants
# ---------------------------------------------------------------------------

def basis_value(bc, ctx: PrecisionContext):
    """Evaluate one basis constant of the exact ring (memoised per dps)."""
    key = ("basis", bc.tag, bc.arg, ctx.working_dps)
    hit = _memo_get(key)
    if hit is not None:
        return hit
    with ctx.working():
        tag = bc.tag
        if tag == "Pi":
            v = +mp.pi
        elif tag == "Log2":
            v = mp.log(2)
        elif tag == "Zeta":
            v = +mp.zeta(bc.arg[0])
        elif tag == "LiHalf":
            v = mp.polylog(bc.arg[0], mp.mpf(1) / 2)
        elif tag == "LiNegOne":
            v = multiple_polylog(Composition(bc.arg), Fraction(1), ctx).real
        elif tag == "ClPi3":
            v = clausen_glaisher("cl", Composition(bc.arg), Fraction(1, 3), ctx)
        elif tag == "GlPi3":
            v = clausen_glaisher("gl", Composition(bc.arg), Fraction(1, 3), ctx)
        elif tag == "Lambda":
            v = kummer_lambda(bc.arg[0], mp.mpf(1) / 2, ctx)
        elif tag == "SPlus":
            from .logsine import central_binomial_sum
            v = central_binomial_sum("+", bc.arg[0], ctx)
        else:
            raise ValueError(f"no evaluator for {bc!r}")
    return _memo_put(key, v)
