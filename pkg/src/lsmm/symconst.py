"""Exact constant expressions with weight grading.

A :class:`ConstExpr` is a rational linear combination of monomials in a
small set of basis constants: pi, log 2, odd zeta values, polylogarithms at
1/2 and at -1, Clausen/Glaisher values at pi/3, the Kummer-type lambda
constants, and the positive central binomial sums.  Even zeta arguments are
normalised to rational multiples of powers of pi at construction time, so
closed forms compare syntactically.

Monomial keys are canonically sorted; equality is syntactic and exact.  The
only basis constant allowed a negative exponent is pi, so that measures like
``7/2*Zeta(3)*Pi^-2`` stay inside the ring with a meaningful weight grading
(an inverse power of pi counts with weight -1).

There is deliberately no rewriting between basis constants; identities
between them are verified numerically by the registry, not assumed here.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from mpmath import mp

from .mpcore import PrecisionContext

__all__ = ["BasisConstant", "ConstExpr", "cexpr_arith", "cexpr_eval",
           "cexpr_weight", "zeta_even_coeff"]


_SIMPLE_TAGS = {"Pi": 1, "Log2": 1}
_INT_ARG_TAGS = {"Zeta", "LiHalf", "Lambda", "SPlus"}
_COMP_ARG_TAGS = {"LiNegOne", "ClPi3", "GlPi3"}


@dataclass(frozen=True, order=True)
class BasisConstant:
    """One generator of the constant ring, e.g. Zeta(3) or GlPi3(4,1)."""

    tag: str
    arg: tuple = ()

    def __post_init__(self):
        if self.tag in _SIMPLE_TAGS:
            if self.arg:
                raise ValueError(f"{self.tag} takes no argument")
        elif self.tag in _INT_ARG_TAGS:
            if len(self.arg) != 1 or self.arg[0] < 1:
                raise ValueError(f"{self.tag} needs one positive integer argument")
            if self.tag == "Zeta":
                if self.arg[0] < 2:
                    raise ValueError("Zeta argument must be >= 2")
                if self.arg[0] % 2 == 0:
                    raise ValueError("even Zeta values are stored as powers of Pi")
        elif self.tag in _COMP_ARG_TAGS:
            if not self.arg or any(a < 1 for a in self.arg):
                raise ValueError(f"{self.tag} needs a composition of positive integers")
        else:
            raise ValueError(f"unknown basis constant tag {self.tag!r}")

    @property
    def weight(self) -> int:
        if self.tag in _SIMPLE_TAGS:
            return 1
        return sum(self.arg)

    def render(self) -> str:
        if self.tag in _SIMPLE_TAGS:
            return self.tag
        return f"{self.tag}({','.join(str(a) for a in self.arg)})"

    def __repr__(self):
        return self.render()


PI = BasisConstant("Pi")


@lru_cache(maxsize=None)
def _bernoulli(m: int) -> Fraction:
    if m == 0:
        return Fraction(1)
    from math import comb
    s = Fraction(0)
    for j in range(m):
        s += Fraction(comb(m + 1, j)) * _bernoulli(j)
    return -s / (m + 1)


@lru_cache(maxsize=None)
def zeta_even_coeff(k: int) -> Fraction:
    """Rational c with zeta(k) = c * pi**k, for even k >= 2."""
    if k < 2 or k % 2:
        raise ValueError("k must be even and >= 2")
    n = k // 2
    from math import factorial
    c = Fraction((-1) ** (n + 1)) * _bernoulli(k) * Fraction(2 ** k) / Fraction(2 * factorial(k))
    return c


# Monomial: tuple of (BasisConstant, exponent), sorted by constant; the
# exponent of Pi may be any nonzero integer, all others are positive.
Monomial = tuple


def _mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    acc: dict[BasisConstant, int] = {}
    for bc, e in list(m1) + list(m2):
        acc[bc] = acc.get(bc, 0) + e
    return tuple(sorted((bc, e) for bc, e in acc.items() if e != 0))


def _mono_weight(m: Monomial) -> int:
    return sum(bc.weight * e for bc, e in m)


class ConstExpr:
    """Exact rational combination of basis-constant monomials."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        clean = {}
        if terms:
            for mono, q in terms.items():
                q = Fraction(q)
                if q:
                    clean[mono] = q
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, *a):
        raise AttributeError("ConstExpr is immutable")

    # -- constructors ---------------------------------------------------

    @classmethod
    def rational(cls, q) -> "ConstExpr":
        q = Fraction(q)
        return cls({(): q}) if q else cls({})

    @classmethod
    def const(cls, bc: BasisConstant, power: int = 1, coeff=1) -> "ConstExpr":
        if power == 0:
            return cls.rational(coeff)
        if power < 0 and bc.tag != "Pi":
            raise ValueError("only Pi may carry negative exponents")
        return cls({((bc, power),): Fraction(coeff)})

    @classmethod
    def pi_power(cls, power: int, coeff=1) -> "ConstExpr":
        return cls.const(PI, power, coeff)

    @classmethod
    def zeta(cls, k: int, coeff=1) -> "ConstExpr":
        """zeta(k) as a ring element; even k becomes a rational times pi**k."""
        if k < 2:
            raise ValueError("zeta argument must be >= 2")
        if k % 2 == 0:
            return cls.pi_power(k, Fraction(coeff) * zeta_even_coeff(k))
        return cls.const(BasisConstant("Zeta", (k,)), 1, coeff)

    # -- ring operations --------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self.terms)
        for m, q in other.terms.items():
            out[m] = out.get(m, Fraction(0)) + q
        return ConstExpr(out)

    __radd__ = __add__

    def __neg__(self):
        return ConstExpr({m: -q for m, q in self.terms.items()})

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return _coerce(other) + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, ConstExpr):
            return NotImplemented
        out: dict = {}
        for m1, q1 in self.terms.items():
            for m2, q2 in other.terms.items():
                m = _mono_mul(m1, m2)
                q = q1 * q2
                out[m] = out.get(m, Fraction(0)) + q
        return ConstExpr(out)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def scale(self, q) -> "ConstExpr":
        q = Fraction(q)
        return ConstExpr({m: c * q for m, c in self.terms.items()})

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("powers must be nonnegative integers")
        out = ConstExpr.rational(1)
        for _ in range(n):
            out = out * self
        return out

    def divide_by_pi(self, power: int = 1) -> "ConstExpr":
        return self * ConstExpr.pi_power(-power)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # -- grading -----------------------------------------------------------

    def weight(self):
        """Total weight if homogeneous, else the string 'inhomogeneous'."""
        ws = {_mono_weight(m) for m in self.terms}
        if not ws:
            return 0
        if len(ws) == 1:
            return ws.pop()
        return "inhomogeneous"

    # -- rendering ----------------------------------------------------------

    def render(self) -> str:
        if not self.terms:
            return "0"
        keys = sorted(self.terms, key=_mono_sort_key)
        parts = []
        for m in keys:
            q = self.terms[m]
            factors = []
            for bc, e in m:
                factors.append(bc.render() if e == 1 else f"{bc.render()}^{e}")
            body = "*".join(factors)
            if body and q == 1:
                chunk = body
            elif body and q == -1:
                chunk = f"-{body}"
            elif body:
                chunk = f"{q}*{body}"
            else:
                chunk = str(q)
            if parts and not chunk.startswith("-"):
                parts.append("+ " + chunk)
            elif parts:
                parts.append("- " + chunk[1:])
            else:
                parts.append(chunk)
        return " ".join(parts)

    __str__ = render

    def __repr__(self):
        return f"ConstExpr({self.render()})"

    @staticmethod
    def parse(text: str) -> "ConstExpr":
        return _parse_cexpr(text)

    # -- numeric realisation --------------------------------------------------

    def eval(self, ctx: PrecisionContext):
        """High-precision numeric value via the special-function evaluators."""
        from . import specfun
        with ctx.working():
            total = mp.mpf(0)
            for m, q in self.terms.items():
                v = mp.mpf(q.numerator) / q.denominator
                for bc, e in m:
                    v *= specfun.basis_value(bc, ctx) ** e
                total += v
            return +total


def _coerce(x):
    if isinstance(x, ConstExpr):
        return x
    if isinstance(x, (int, Fraction)):
        return ConstExpr.rational(x)
    return NotImplemented


def _mono_sort_key(m: Monomial):
    return (_mono_weight(m), tuple((bc.tag, bc.arg, e) for bc, e in m))


def cexpr_arith(op: str, a: ConstExpr, b) -> ConstExpr:
    """Named dispatch: op in {add, mul, scale}."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "scale":
        return a.scale(b)
    raise ValueError(f"unknown op {op!r}")


def cexpr_eval(e: ConstExpr, ctx: PrecisionContext):
    return e.eval(ctx)


def cexpr_weight(e: ConstExpr):
    return e.weight()


# ---------------------------------------------------------------------------
# Parsing of the canonical text form
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"""
    (?P<sign>[+-])
  | (?P<rat>\d+(?:/\d+)?)
  | (?P<name>[A-Za-z][A-Za-z0-9]*)
  | (?P<lpar>\()
  | (?P<rpar>\))
  | (?P<comma>,)
  | (?P<star>\*)
  | (?P<caret>\^)
  | (?P<ws>\s+)
""", re.VERBOSE)


def _tokenize(text: str):
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ValueError(f"cannot parse constant expression at {text[pos:]!r}")
        pos = m.end()
        kind = m.lastgroup
        if kind != "ws":
            yield kind, m.group()
    yield "end", ""


def _parse_cexpr(text: str) -> ConstExpr:
    toks = list(_tokenize(text))
    i = 0

    def peek():
        return toks[i]

    def take(kind):
        nonlocal i
        k, v = toks[i]
        if k != kind:
            raise ValueError(f"expected {kind}, found {v!r}")
        i += 1
        return v

    def parse_factor():
        nonlocal i
        k, v = peek()
        if k == "rat":
            take("rat")
            return ConstExpr.rational(Fraction(v))
        if k == "name":
            take("name")
            arg: tuple = ()
            if peek()[0] == "lpar":
                take("lpar")
                nums = [int(take("rat"))]
                while peek()[0] == "comma":
                    take("comma")
                    nums.append(int(take("rat")))
                take("rpar")
                arg = tuple(nums)
            power = 1
            if peek()[0] == "caret":
                take("caret")
                sign = 1
                if peek()[0] == "sign":
                    sign = -1 if take("sign") == "-" else 1
                power = sign * int(take("rat"))
            if v == "Zeta" and arg and arg[0] % 2 == 0:
                base = ConstExpr.zeta(arg[0])
            else:
                base = ConstExpr.const(BasisConstant(v, arg), 1)
            if power == 1:
                return base
            if power >= 0:
                return base ** power
            if v != "Pi":
                raise ValueError("negative powers only allowed for Pi")
            return ConstExpr.pi_power(power)
        raise ValueError(f"unexpected token {v!r}")

    def parse_term():
        f = parse_factor()
        while peek()[0] == "star":
            take("star")
            f = f * parse_factor()
        return f

    total = ConstExpr.rational(0)
    sign = 1
    if peek()[0] == "sign":
        sign = -1 if take("sign") == "-" else 1
    while True:
        term = parse_term()
        total = total + term.scale(sign)
        k, _ = peek()
        if k == "end":
            break
        sign = -1 if take("sign") == "-" else 1
    return total
