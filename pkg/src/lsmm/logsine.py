"""Log-sine integrals: quadrature definitions, closed forms at pi, series
and closed forms at pi/3, central binomial sums, and extraction of the
generalized moments at pi from their bivariate binomial generating function.

Closed-form tables are data, not code: each entry is the canonical text
rendering of a constant expression, parsed on demand, so the same strings
feed the documentation, the identity registry, and the tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp

from .accel import collocation_limit, geometric_indices, levin_best
from .mpcore import (PrecisionContext, PrecisionError, TruncatedSeries,
                     binom_lambda_series)
from .quadrature import integrate_1d
from .specfun import Composition, clausen_glaisher, cl2_series
from .symconst import ConstExpr

__all__ = [
    "LogSineSpec", "ls_numeric", "ls_pi_recursive", "ls_pi_egf",
    "ls_pi3_series", "ls_pi3_table", "LS_PI3_TABLE_TEXT",
    "central_binomial_sum", "ls_moment1_pi3_via_binomial",
    "gen_ls_pi_extract", "gen_ls_pi_extract_report", "ExtractReport",
    "gen_ls_pi_table", "GEN_LS_PI_TABLE_TEXT", "ls_weight4_tau",
    "decay_bound_pair", "real_gf_integral", "real_gf_series",
    "moment1_gf_series", "moment1_gf_integral",
]


# ---------------------------------------------------------------------------
# definitions by quadrature
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LogSineSpec:
    """Order n, moment power k and upper limit sigma = sigma_over_pi * pi."""

    n: int
    k: int = 0
    sigma_over_pi: Fraction = Fraction(1)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("order n must be >= 1")
        if not 0 <= self.k <= self.n - 1:
            raise ValueError("moment power k must satisfy 0 <= k <= n-1")
        s = Fraction(self.sigma_over_pi)
        if not 0 < s <= 2:
            raise ValueError("sigma must lie in (0, 2*pi]")
        object.__setattr__(self, "sigma_over_pi", s)


def ls_numeric(spec: LogSineSpec, ctx: PrecisionContext):
    """-integral_0^sigma theta^k log^(n-1-k)|2 sin(theta/2)| dtheta.

    The integration is split at the interior zeros of the logarithm
    (theta = pi/3 and 5*pi/3), where higher powers of the log are not
    smooth.
    """
    n, k, s = spec.n, spec.k, spec.sigma_over_pi
    p = n - 1 - k
    with ctx.working():
        sigma = mp.pi * s.numerator / s.denominator
        splits = [mp.pi / 3 * m for m in (1, 5) if Fraction(m, 3) < s]

        if p == 0:
            def f(t, k=k):
                return t ** k
        elif k == 0:
            def f(t, p=p):
                return mp.log(2 * mp.sin(t / 2)) ** p
        else:
            def f(t, k=k, p=p):
                return t ** k * mp.log(2 * mp.sin(t / 2)) ** p

        val, err = integrate_1d(f, 0, sigma, ctx, points=splits)
        if err > ctx.eps() * 4:
            raise PrecisionError("log-sine quadrature error above tolerance")
        return -val


# ---------------------------------------------------------------------------
# closed forms at pi: recursion and exponential generating function
# ---------------------------------------------------------------------------

def _alpha(m: int) -> ConstExpr:
    """(1 - 2**(1-m)) * zeta(m); zero at m = 1."""
    if m == 1:
        return ConstExpr.rational(0)
    return ConstExpr.zeta(m) * (1 - Fraction(1, 2 ** (m - 1)))


_LS_PI_CACHE: dict[int, ConstExpr] = {}


def ls_pi_recursive(n: int) -> ConstExpr:
    """Exact closed form of the order-n log-sine value at pi.

    Built from the classical recursion driven by the alternating zeta
    values; the result is a rational polynomial in pi and odd zeta values.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if n in _LS_PI_CACHE:
        return _LS_PI_CACHE[n]
    if n == 1:
        val = ConstExpr.pi_power(1, -1)
    else:
        m = n - 2  # recursion index
        acc = ConstExpr.pi_power(1) * _alpha(m + 1)
        for k in range(1, m - 1):
            acc = acc + (_alpha(m - k) * ls_pi_recursive(k + 2)).scale(
                Fraction((-1) ** k, _factorial(k + 1)))
        val = acc.scale(Fraction((-1) ** m * _factorial(m)))
    _LS_PI_CACHE[n] = val
    return val


def _factorial(k: int) -> int:
    out = 1
    for i in range(2, k + 1):
        out *= i
    return out


def ls_pi_egf(max_n: int) -> list[ConstExpr]:
    """Closed forms of the log-sine values at pi from the EGF.

    The generating function equals pi * exp(sum_{k>=2} (-1)^k a(k) x^k / k)
    with a(k) the alternating zeta values, so the order-(m+1) value is
    -pi * m! times the x^m coefficient of that exponential.  Entry m of the
    returned list holds the order-(m+1) closed form.
    """
    if max_n < 1:
        raise ValueError("max_n must be >= 1")
    order = max_n - 1
    coeffs = {}
    for k in range(2, order + 1):
        coeffs[(k,)] = _alpha(k).scale(Fraction((-1) ** k, k))
    arg = TruncatedSeries(("x",), order, coeffs)
    e = arg.exp()
    out = []
    pi1 = ConstExpr.pi_power(1)
    for m in range(0, max_n):
        c = e.coefficient((m,))
        if isinstance(c, int):
            c = ConstExpr.rational(c)
        out.append((pi1 * c).scale(Fraction(-_factorial(m))))
    return out


# ---------------------------------------------------------------------------
# values at pi/3
# ---------------------------------------------------------------------------

def ls_pi3_series(n: int, ctx: PrecisionContext):
    """Order-(n+1) log-sine value at pi/3 from its central binomial series.

    The series sum_k 2^(-4k) C(2k,k) / (2k+1)^(n+1) converges at rate 1/4
    per term; the returned value is (-1)^(n+1) n! times the sum.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    with ctx.working():
        tol = ctx.eps()
        S = mp.mpf(0)
        t = mp.mpf(1)  # C(2k,k)/16^k at k=0
        k = 0
        while True:
            S += t / mp.mpf(2 * k + 1) ** (n + 1)
            # ratio of successive C(2k,k)/16^k factors: (2k+1)/(8(k+1)) < 1/4
            t *= mp.mpf(2 * (2 * k + 1)) / (16 * (k + 1))
            k += 1
            if t / mp.mpf(2 * k + 1) ** (n + 1) * 2 < tol and k > 4:
                break
            if k > ctx.max_terms:
                raise PrecisionError("central binomial series stalled")
        return (-1) ** (n + 1) * mp.factorial(n) * S


LS_PI3_TABLE_TEXT: dict[int, str] = {
    2: "ClPi3(2)",
    3: "-7/108*Pi^3",
    4: "1/2*Pi*Zeta(3) + 9/2*ClPi3(4)",
    5: "-1543/19440*Pi^5 + 6*GlPi3(4,1)",
    6: "15/2*Pi*Zeta(5) + 35/36*Pi^3*Zeta(3) + 135/2*ClPi3(6)",
    7: "-74369/326592*Pi^7 - 15/2*Pi*Zeta(3)^2 + 135*GlPi3(6,1)",
    8: ("13181/2592*Pi^5*Zeta(3) + 1225/24*Pi^3*Zeta(5) + 319445/864*Pi*Zeta(7)"
        " + 35/2*Pi^2*ClPi3(6) + 945/4*ClPi3(8) + 315*ClPi3(6,1,1)"),
}


def ls_pi3_table(n: int) -> ConstExpr:
    """Stored closed form of the order-n log-sine value at pi/3 (2 <= n <= 8)."""
    if n not in LS_PI3_TABLE_TEXT:
        raise ValueError(f"no stored closed form for order {n}")
    return ConstExpr.parse(LS_PI3_TABLE_TEXT[n])


# ---------------------------------------------------------------------------
# central binomial sums
# ---------------------------------------------------------------------------

def central_binomial_sum(sign: str, n: int, ctx: PrecisionContext):
    """S_(+/-)(n) = sum_{k>=1} (+/-1)^(k+1) / (C(2k,k) k^n)."""
    if sign not in ("+", "-"):
        raise ValueError("sign must be '+' or '-'")
    if n < 2:
        raise ValueError("n must be >= 2")
    alt = sign == "-"
    with ctx.working():
        tol = ctx.eps()
        S = mp.mpf(0)
        inv = mp.mpf(1) / 2  # 1/C(2k,k) at k=1
        k = 1
        while True:
            t = inv / mp.mpf(k) ** n
            S += -t if (alt and k % 2 == 0) else t
            # 1/C ratio: (k+1)/(2(2k+1)) <= 1/3
            inv *= mp.mpf(k + 1) / (2 * (2 * k + 1))
            k += 1
            if inv / mp.mpf(k) ** n < tol / 2 and k > 4:
                break
            if k > ctx.max_terms:
                raise PrecisionError("central binomial sum stalled")
        return +S


def ls_moment1_pi3_via_binomial(m: int, ctx: PrecisionContext):
    """First moment of order m at pi/3 through the binomial sum relation.

    The relation reads: minus the (k=1) moment of order m equals
    (m-2)! (-1/2)^(m-2) S_+(m) for m >= 2.
    """
    if m < 2:
        raise ValueError("m must be >= 2")
    with ctx.working():
        s = central_binomial_sum("+", m, ctx)
        return -mp.factorial(m - 2) * mp.mpf(Fraction(-1, 2) ** (m - 2)) * s


# ---------------------------------------------------------------------------
# generalized moments at pi via the binomial generating function
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExtractReport:
    """Result of one generating-function extraction."""

    n: int
    k: int
    value: object          # mpf
    imag_residual: object  # mpf, realness diagnostic
    err_est: object        # mpf, agreement of two acceleration orders
    terms: int


_GF_SWEEP_CACHE: dict = {}
_GF_ORDER_CAP = 9


def _gf_sweep(order: int, N: int, dps: int):
    """Accumulate the two branch expansions of the generating function.

    The right-hand side is  i * sum_n (-1)^n C(lam,n)
    [exp(i pi lam/2) - (-1)^n exp(i pi mu)] / (mu - lam/2 + n).

    Per monomial lam^a mu^b the n=0 summand is handled by exact division
    (the singularity at the origin is removable), and the n >= 1 summands
    are accumulated into a smooth branch (geometric-checkpoint snapshots,
    log-power tails) and an alternating branch (consecutive history).
    """
    key = (order, N, dps)
    hit = _GF_SWEEP_CACHE.get(key)
    if hit is not None:
        return hit
    with mp.workdps(dps):
        keys = [(a, b) for a in range(order + 1) for b in range(order + 1 - a)]

        def poly_mul(p, q):
            r = {}
            for (a1, b1), c1 in p.items():
                for (a2, b2), c2 in q.items():
                    a, b = a1 + a2, b1 + b2
                    if a + b <= order:
                        kk = (a, b)
                        if kk in r:
                            r[kk] += c1 * c2
                        else:
                            r[kk] = c1 * c2
            return r

        ipi = mp.mpc(0, 1) * mp.pi
        e_lam = {(c, 0): (ipi / 2) ** c / mp.factorial(c) for c in range(order + 1)}
        e_mu = {(0, c): ipi ** c / mp.factorial(c) for c in range(order + 1)}
        lin = {(0, 1): mp.mpc(1), (1, 0): mp.mpc(-0.5)}
        D = [{(0, 0): mp.mpc(1)}]
        for _ in range(order):
            D.append(poly_mul(D[-1], lin))

        # n = 0: i * (e_lam - e_mu) / (mu - lam/2), divided exactly
        num = {kk: e_lam.get(kk, mp.mpc(0)) - e_mu.get(kk, mp.mpc(0))
               for kk in set(e_lam) | set(e_mu)}
        quot: dict = {}
        for d in range(0, order + 1):
            for a in range(0, d + 1):
                b = d - a
                t = num.get((a, b + 1), mp.mpc(0))
                quot[(a, b)] = t + quot.get((a - 1, b + 1), mp.mpc(0)) / 2
        term0 = {kk: c * mp.mpc(0, 1) for kk, c in quot.items()}

        checkpoints = geometric_indices(order * 16 + 24, N, 1.095)
        ckset = set(checkpoints)
        hist_window = min(300, N // 4)
        esym = [mp.mpf(1)] + [mp.mpf(0)] * order
        acc1 = {kk: mp.mpc(0) for kk in keys}
        acc2 = {kk: mp.mpc(0) for kk in keys}
        snap1 = {kk: [] for kk in keys}
        hist2 = {kk: [] for kk in keys}
        for n in range(1, N + 1):
            if n > 1:
                invm = mp.mpf(1) / (n - 1)
                for al in range(min(n - 1, order), 0, -1):
                    esym[al] += esym[al - 1] * invm
            sgn = 1 if n % 2 == 0 else -1
            Bn = {}
            for al in range(1, order + 1):
                s = esym[al - 1] / n
                Bn[(al, 0)] = mp.mpc(s if (al % 2 == 0) else -s)
            # Bn now holds (-1)^n C(lam, n) without its n-dependent sign,
            # i.e. coefficients (-1)^al e_(al-1)/n; restore signs per branch.
            Gn = {}
            ninv = mp.mpf(1) / n
            fpow = ninv
            for j in range(order + 1):
                sj = fpow if j % 2 == 0 else -fpow
                for kk, c in D[j].items():
                    if kk in Gn:
                        Gn[kk] += c * sj
                    else:
                        Gn[kk] = c * sj
                fpow *= ninv
            BG = poly_mul(Bn, Gn)
            br1 = poly_mul(BG, e_lam)
            br2 = poly_mul(BG, e_mu)
            # branch 1 carries i * (-1)^n * (-1)^n = i on the smooth combination
            # branch 2 carries -i and alternates through (-1)^n C(lam, n)
            i_unit = mp.mpc(0, 1)
            for kk in keys:
                v1 = br1.get(kk)
                if v1 is not None:
                    acc1[kk] += i_unit * v1
                v2 = br2.get(kk)
                if v2 is not None:
                    acc2[kk] += (-i_unit if sgn > 0 else i_unit) * v2
            if n > N - hist_window:
                for kk in keys:
                    hist2[kk].append(acc2[kk])
            if n in ckset:
                for kk in keys:
                    snap1[kk].append((n, acc1[kk]))
    result = {"term0": term0, "snap1": snap1, "hist2": hist2, "N": N,
              "order": order}
    _GF_SWEEP_CACHE[key] = result
    return result


def gen_ls_pi_extract_report(n: int, k: int, ctx: PrecisionContext,
                             order: int | None = None,
                             terms: int | None = None) -> ExtractReport:
    """Extract the (n, k) generalized log-sine value at pi from the
    generating function, with acceleration diagnostics."""
    if not 0 <= k <= n - 1:
        raise ValueError("need 0 <= k <= n-1")
    npow = n - k - 1
    # the exact division of the removable-singularity term is only valid
    # strictly below the truncation order, so keep one degree of headroom
    if order is None:
        order = max(7, n)
    if order > _GF_ORDER_CAP:
        raise ValueError(f"series order {order} exceeds cap {_GF_ORDER_CAP}")
    if n > order:
        raise ValueError("requested coefficient above series order")
    dps = max(mp.dps, ctx.working_dps, 40) + 10
    N = terms if terms is not None else max(3200, 70 * ctx.target_digits)
    sweep = _gf_sweep(order, N, dps)
    key = (npow, k)
    with mp.workdps(dps):
        smooth, est1 = collocation_limit(sweep["snap1"][key],
                                         exponents=[1, 2, 3, 4, 5],
                                         log_powers=npow + 1)
        alt, est2 = levin_best(sweep["hist2"][key])
        total = smooth + alt + sweep["term0"].get(key, mp.mpc(0))
        ls = -total * mp.factorial(npow) * mp.factorial(k) / mp.mpc(0, 1) ** k
        return ExtractReport(n=n, k=k, value=+ls.real,
                             imag_residual=abs(ls.imag),
                             err_est=+(est1 + est2), terms=N)


def gen_ls_pi_extract(n: int, k: int, ctx: PrecisionContext):
    """Generalized log-sine value at pi, as a real number."""
    return gen_ls_pi_extract_report(n, k, ctx).value


GEN_LS_PI_TABLE_TEXT: dict[tuple, str] = {
    (4, 1): "-2*Lambda(4) + 19/720*Pi^4",
    (4, 2): "-3/2*Pi*Zeta(3)",
    (5, 1): "-2*Lambda(5) + 3/4*Pi^2*Zeta(3) + 93/32*Zeta(5)",
    (5, 2): "-4*Pi*Lambda(4) + 3/40*Pi^5",
    (5, 3): "-9/4*Pi^2*Zeta(3) + 93/8*Zeta(5)",
    (6, 1): "-2*Lambda(6) + 6*LiNegOne(5,1) + 3*Zeta(3)^2 + 451/10080*Pi^6",
    (6, 2): "-4*Pi*Lambda(5) + Pi^3*Zeta(3) + 189/16*Pi*Zeta(5)",
    (6, 3): "-6*Pi^2*Lambda(4) + 12*LiNegOne(5,1) + 6*Zeta(3)^2 + 187/1680*Pi^6",
    (6, 4): "45/2*Pi*Zeta(5) - 3*Pi^3*Zeta(3)",
    (7, 3): ("-6*Pi^2*Lambda(5) - 36*LiNegOne(5,1,1) + Pi^4*Zeta(3)"
             " + 759/32*Pi^2*Zeta(5) + 45/32*Zeta(7)"),
}


def gen_ls_pi_table(n: int, k: int) -> ConstExpr:
    """Stored closed form of the (n, k) generalized log-sine value at pi."""
    if (n, k) not in GEN_LS_PI_TABLE_TEXT:
        raise ValueError(f"no stored closed form for (n, k) = ({n}, {k})")
    return ConstExpr.parse(GEN_LS_PI_TABLE_TEXT[(n, k)])


# ---------------------------------------------------------------------------
# weight <= 4 reductions at a general angle tau
# ---------------------------------------------------------------------------

def ls_weight4_tau(which: str, tau, ctx: PrecisionContext):
    """Weight <= 4 reduction formulas at a general angle.

    ``which`` is one of Ls3, Ls3k1, Ls4, Ls4k1, Ls4k2; ``tau`` may be a
    Fraction (multiple of pi) or a number in (0, 2*pi).  The values are
    assembled from Clausen/Glaisher functions at tau.
    """
    from .specfun import angle_value
    with ctx.working():
        t = angle_value(tau)
        if not 0 < t < 2 * mp.pi:
            raise ValueError("tau must lie in (0, 2*pi)")
        pi = mp.pi
        z3 = mp.zeta(3)
        cl = lambda comp: clausen_glaisher("cl", comp, tau, ctx)
        gl = lambda comp: clausen_glaisher("gl", comp, tau, ctx)
        if which == "Ls3":
            return -(2 * gl((2, 1)) + t * (3 * pi ** 2 - 3 * pi * t + t ** 2) / 12)
        if which == "Ls3k1":
            return cl((3,)) + t * cl((2,)) - z3
        if which == "Ls4":
            return -(-6 * cl((2, 1, 1)) + mp.mpf(3) / 2 * cl((4,))
                     + mp.mpf(3) / 2 * (pi - t) * cl((3,))
                     - mp.mpf(3) / 4 * (pi - t) ** 2 * cl((2,))
                     - mp.mpf(3) / 2 * pi * z3)
        if which == "Ls4k1":
            return (pi ** 4 / 180 - t ** 4 / 16 + pi * t ** 3 / 6
                    - pi ** 2 * t ** 2 / 8 - 2 * gl((3, 1)) - 2 * t * gl((2, 1)))
        if which == "Ls4k2":
            return -2 * cl((4,)) + 2 * t * cl((3,)) + t ** 2 * cl((2,))
        raise ValueError(f"unknown reduction {which!r}")


# ---------------------------------------------------------------------------
# properties: decay bound and the real generating function
# ---------------------------------------------------------------------------

def decay_bound_pair(k: int, ctx: PrecisionContext):
    """(|Ls_{k+1}(pi/3) - Ls_{k+1}(pi)|, (2*pi/3) * log(2)**k)."""
    v1 = ls_pi3_series(k, ctx)
    v2 = ls_pi_recursive(k + 1).eval(ctx)
    with ctx.working():
        return abs(v1 - v2), 2 * mp.pi / 3 * mp.log(2) ** k


def real_gf_integral(x, y, ctx: PrecisionContext):
    """integral_0^pi (2 sin(theta/2))^x exp(theta*y) dtheta by quadrature."""
    with ctx.working():
        x = mp.mpf(x)
        y = mp.mpf(y)
        f = lambda th: (2 * mp.sin(th / 2)) ** x * mp.e ** (th * y)
        v, err = integrate_1d(f, 0, mp.pi, ctx, points=[mp.pi / 3])
        return v


def real_gf_series(x, y, ctx: PrecisionContext, terms: int = 1600):
    """Series side of the real generating function, accelerated.

    The binomial-weighted terms split into an alternating part (Levin) and
    a smooth part with tail powers n^(-r) and n^(-r-x) (collocation).
    """
    with ctx.working():
        x = mp.mpf(x)
        y = mp.mpf(y)
        cosx = mp.cos(mp.pi * x / 2)
        sinx = mp.sin(mp.pi * x / 2)
        epy = mp.e ** (mp.pi * y)
        checkpoints = geometric_indices(60, terms, 1.13)
        ckset = set(checkpoints)
        b = mp.mpf(1)
        S_alt = mp.mpf(0)
        S_smooth = mp.mpf(0)
        alt_hist = []
        smooth_samples = []
        window = 90
        for n in range(0, terms + 1):
            if n > 0:
                b *= (x - (n - 1)) / n
            sgn = 1 if n % 2 == 0 else -1
            D = (n - x / 2) ** 2 + y ** 2
            S_alt += b * y * epy / D
            S_smooth += -sgn * b * (y * cosx + (n - x / 2) * sinx) / D
            if n > terms - window:
                alt_hist.append(S_alt)
            if n in ckset:
                smooth_samples.append((n, S_smooth))
        alt, e1 = levin_best(alt_hist)
        exps = sorted([1 + x, 2 + x, 3 + x, 4 + x, 5 + x, 2, 3, 4])
        smooth, e2 = collocation_limit(smooth_samples, exps, log_powers=0)
        if e1 + e2 > ctx.eps() * 100:
            raise PrecisionError("real generating function series: acceleration stalled")
        return alt + smooth


def moment1_gf_integral(lam, ctx: PrecisionContext):
    """sum_n (k=1 moments at pi) lam^n/n!  ==  -int_0^pi theta (2 sin(theta/2))^lam."""
    with ctx.working():
        lam = mp.mpf(lam)
        f = lambda th: th * (2 * mp.sin(th / 2)) ** lam
        v, _ = integrate_1d(f, 0, mp.pi, ctx, points=[mp.pi / 3])
        return -v


def moment1_gf_series(lam, ctx: PrecisionContext, terms: int = 1600):
    """One-variable specialization of the real generating function."""
    with ctx.working():
        lam = mp.mpf(lam)
        coslam = mp.cos(mp.pi * lam / 2)
        checkpoints = geometric_indices(60, terms, 1.13)
        ckset = set(checkpoints)
        b = mp.mpf(1)
        S_alt = mp.mpf(0)
        S_smooth = mp.mpf(0)
        alt_hist = []
        smooth_samples = []
        window = 90
        for n in range(0, terms + 1):
            if n > 0:
                b *= (lam - (n - 1)) / n
            sgn = 1 if n % 2 == 0 else -1
            D = (n - lam / 2) ** 2
            # b alternates in sign asymptotically, so sgn*b is the smooth weight
            S_smooth += sgn * b * coslam / D
            S_alt += -b / D
            if n > terms - window:
                alt_hist.append(S_alt)
            if n in ckset:
                smooth_samples.append((n, S_smooth))
        alt, e1 = levin_best(alt_hist)
        exps = sorted([1 + lam, 2 + lam, 3 + lam, 2, 3, 4])
        smooth, e2 = collocation_limit(smooth_samples, exps, log_powers=0)
        if e1 + e2 > ctx.eps() * 100:
            raise PrecisionError("moment generating series: acceleration stalled")
        return alt + smooth
