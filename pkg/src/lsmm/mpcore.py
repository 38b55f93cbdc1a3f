"""Precision management and truncated multivariate power series.

Every numeric routine in this package receives a :class:`PrecisionContext`
that fixes the working precision, the absolute tolerance its result must
meet, and caps on series/quadrature effort.  Routines either meet the
tolerance or raise :class:`PrecisionError`; silent precision loss is a bug.

:class:`TruncatedSeries` is a sparse multivariate power series truncated at
a total degree.  Coefficients may live in any commutative ring that supports
``+``, ``*``, unary ``-`` and multiplication by :class:`fractions.Fraction`
(exact rationals, mpmath floats/complexes, or the constant expressions from
:mod:`lsmm.symconst`).  The same engine therefore drives both the symbolic
exponential-generating-function extraction and the numeric bivariate
generating-function expansion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from mpmath import mp

__all__ = [
    "PrecisionError",
    "PrecisionContext",
    "make_context",
    "TruncatedSeries",
    "series_elementary",
    "binom_lambda_series",
    "HARD_DIGIT_CAP",
]

HARD_DIGIT_CAP = 1000


class PrecisionError(ArithmeticError):
    """A routine could not certify its result to the requested tolerance."""


@dataclass(frozen=True)
class PrecisionContext:
    """Precision policy shared by all numeric routines.

    Attributes
    ----------
    target_digits:
        Decimal digits the caller wants to trust in the final answer.
    guard_digits:
        Extra digits of working precision (at least 10).
    max_terms:
        Cap on the number of series terms any single summation may use.
    tail_tolerance:
        Absolute bound each routine must certify for its truncation tail.
    quadrature_levels:
        Maximum number of tanh-sinh level doublings.
    """

    target_digits: int
    guard_digits: int
    max_terms: int
    tail_tolerance: object
    quadrature_levels: int

    @property
    def working_dps(self) -> int:
        return self.target_digits + self.guard_digits

    def working(self):
        """Context manager setting mpmath's precision to the working level."""
        return mp.workdps(self.working_dps)

    def eps(self):
        """tail_tolerance as an mpf at working precision."""
        with self.working():
            return mp.mpf(self.tail_tolerance)

    def with_digits(self, target_digits: int) -> "PrecisionContext":
        return make_context(target_digits)


def make_context(target_digits: int) -> PrecisionContext:
    """Build a context for ``target_digits`` trusted decimal digits.

    Guard digits, series caps and quadrature depth are sized so that
    tanh-sinh quadrature and the series evaluators can reach the implied
    tolerance ``10**-target_digits``.
    """
    if not isinstance(target_digits, int) or target_digits < 1:
        raise ValueError("target_digits must be a positive integer")
    if target_digits > HARD_DIGIT_CAP:
        raise ValueError(f"target_digits capped at {HARD_DIGIT_CAP}")
    guard = 12 + target_digits // 8
    levels = max(8, int(math.log2(target_digits + guard)) + 5)
    return PrecisionContext(
        target_digits=target_digits,
        guard_digits=guard,
        max_terms=2_000_000,
        tail_tolerance=f"1e-{target_digits}",
        quadrature_levels=levels,
    )


# ---------------------------------------------------------------------------
# Truncated multivariate power series
# ---------------------------------------------------------------------------

def _zero_like(coeff):
    return coeff * 0


class TruncatedSeries:
    """Sparse multivariate power series, exact modulo a total-degree cutoff.

    Exponent tuples index the ``variables``; only monomials of total degree
    <= ``total_order`` are stored.  Instances are immutable; all arithmetic
    returns new series.
    """

    __slots__ = ("variables", "total_order", "coeffs")

    def __init__(self, variables: Iterable[str], total_order: int,
                 coeffs: Mapping[tuple, object] | None = None):
        variables = tuple(variables)
        if total_order < 0:
            raise ValueError("total_order must be >= 0")
        clean = {}
        if coeffs:
            for expo, c in coeffs.items():
                expo = tuple(int(e) for e in expo)
                if len(expo) != len(variables) or any(e < 0 for e in expo):
                    raise ValueError(f"bad exponent tuple {expo}")
                if sum(expo) <= total_order and not _is_exact_zero(c):
                    clean[expo] = c
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "total_order", total_order)
        object.__setattr__(self, "coeffs", clean)

    def __setattr__(self, *a):  # immutability
        raise AttributeError("TruncatedSeries is immutable")

    # -- helpers ------------------------------------------------------------

    @classmethod
    def constant(cls, value, variables: Iterable[str], total_order: int):
        variables = tuple(variables)
        zero = (0,) * len(variables)
        return cls(variables, total_order, {zero: value})

    @classmethod
    def variable(cls, name: str, variables: Iterable[str], total_order: int,
                 one=Fraction(1)):
        variables = tuple(variables)
        expo = tuple(1 if v == name else 0 for v in variables)
        if sum(expo) != 1:
            raise ValueError(f"{name!r} not among {variables}")
        return cls(variables, total_order, {expo: one})

    def coefficient(self, expo: tuple):
        return self.coeffs.get(tuple(expo), 0)

    def constant_term(self):
        return self.coeffs.get((0,) * len(self.variables), 0)

    def _check_compat(self, other: "TruncatedSeries"):
        if self.variables != other.variables or self.total_order != other.total_order:
            raise ValueError("operands must share variables and total_order")

    # -- ring operations ----------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        self._check_compat(other)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out[e] + c if e in out else c
        return TruncatedSeries(self.variables, self.total_order, out)

    def __neg__(self):
        return TruncatedSeries(self.variables, self.total_order,
                               {e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            return self.scale(other)
        self._check_compat(other)
        order = self.total_order
        out: dict = {}
        for e1, c1 in self.coeffs.items():
            d1 = sum(e1)
            for e2, c2 in other.coeffs.items():
                if d1 + sum(e2) > order:
                    continue
                e = tuple(a + b for a, b in zip(e1, e2))
                prod = c1 * c2
                out[e] = out[e] + prod if e in out else prod
        return TruncatedSeries(self.variables, order, out)

    def scale(self, scalar):
        return TruncatedSeries(self.variables, self.total_order,
                               {e: c * scalar for e, c in self.coeffs.items()})

    def __rmul__(self, scalar):
        return self.scale(scalar)

    # -- transcendental operations (exact modulo the cutoff) -----------------

    def exp(self):
        """exp of a series with zero constant term."""
        if not _is_exact_zero(self.constant_term()):
            raise ValueError("exp requires zero constant term")
        one = _one_like(self)
        result = TruncatedSeries.constant(one, self.variables, self.total_order)
        power = result
        fact = 1
        for k in range(1, self.total_order + 1):
            power = power * self
            fact *= k
            result = result + power.scale(Fraction(1, fact))
        return result

    def log(self):
        """log of a series with constant term 1."""
        one = _one_like(self)
        x = self - TruncatedSeries.constant(one, self.variables, self.total_order)
        if not _is_exact_zero(x.constant_term()):
            raise ValueError("log requires constant term 1")
        result = TruncatedSeries(self.variables, self.total_order, {})
        power = TruncatedSeries.constant(one, self.variables, self.total_order)
        for k in range(1, self.total_order + 1):
            power = power * x
            result = result + power.scale(Fraction((-1) ** (k + 1), k))
        return result

    def reciprocal(self):
        """1/series for a series with constant term 1."""
        one = _one_like(self)
        x = self - TruncatedSeries.constant(one, self.variables, self.total_order)
        if not _is_exact_zero(x.constant_term()):
            raise ValueError("reciprocal requires constant term 1")
        result = TruncatedSeries.constant(one, self.variables, self.total_order)
        power = result
        for k in range(1, self.total_order + 1):
            power = power * x
            result = result + power.scale(Fraction((-1) ** k))
        return result

    # -- misc ---------------------------------------------------------------

    def evaluate(self, values: Mapping[str, object]):
        """Evaluate by substituting a value for every variable."""
        total = None
        for e, c in self.coeffs.items():
            term = c
            for v, p in zip(self.variables, e):
                for _ in range(p):
                    term = term * values[v]
            total = term if total is None else total + term
        return 0 if total is None else total

    def __eq__(self, other):
        return (isinstance(other, TruncatedSeries)
                and self.variables == other.variables
                and self.total_order == other.total_order
                and self.coeffs == other.coeffs)

    def __repr__(self):
        inner = ", ".join(f"{e}: {c}" for e, c in sorted(self.coeffs.items()))
        return f"TruncatedSeries({self.variables}, <= {self.total_order}, {{{inner}}})"


def _is_exact_zero(c) -> bool:
    try:
        return c == 0
    except TypeError:
        return False


def _one_like(series: TruncatedSeries):
    # sample * 0 + 1 yields the multiplicative identity of the coefficient
    # ring (Fraction, mpf/mpc, ConstExpr) without naming the ring.
    for c in series.coeffs.values():
        return c * 0 + 1
    return Fraction(1)


def series_elementary(op: str, a: TruncatedSeries,
                      b: TruncatedSeries | None = None) -> TruncatedSeries:
    """Dispatch for the elementary series operations.

    ``op`` is one of ``add``, ``mul``, ``exp``, ``log``, ``reciprocal``.
    Binary operations require operands with identical variables and order.
    """
    if op == "add":
        if b is None:
            raise ValueError("add needs two operands")
        return a + b
    if op == "mul":
        if b is None:
            raise ValueError("mul needs two operands")
        return a * b
    if b is not None:
        raise ValueError(f"{op} takes a single operand")
    if op == "exp":
        return a.exp()
    if op == "log":
        return a.log()
    if op == "reciprocal":
        return a.reciprocal()
    raise ValueError(f"unknown operation {op!r}")


def binom_lambda_series(n: int, order: int) -> TruncatedSeries:
    """Polynomial in ``lam`` equal to the binomial coefficient C(lam, n).

    The coefficient of ``lam**a`` (for n >= 1, a >= 1) is
    ``(-1)**(n+a)/n`` times the elementary symmetric polynomial of degree
    ``a - 1`` in the reciprocals 1/1, 1/2, ..., 1/(n-1); boundary cases are
    the empty product C(lam, 0) = 1.
    """
    if n < 0 or order < 0:
        raise ValueError("n and order must be >= 0")
    vars_ = ("lam",)
    result = TruncatedSeries.constant(Fraction(1), vars_, order)
    for i in range(n):
        factor = TruncatedSeries(vars_, order, {
            (0,): Fraction(-i, i + 1),
            (1,): Fraction(1, i + 1),
        })
        result = result * factor
    return result
