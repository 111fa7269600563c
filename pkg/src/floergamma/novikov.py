"""Exact arithmetic for the finite-support Novikov field.

Elements are finite formal sums sum_i a_i * l^(r_i) with rational
coefficients a_i and rational exponents r_i, where l is the Novikov
variable.  This is the coefficient field underlying all chain-level
computations in this package.  The valuation mdeg (minimal exponent)
drives every invariant computed downstream, so exponents are exact
rationals throughout; floating point never enters.

The module also provides an embedding into the rational function field
Q(mu) with mu = l^(1/scale), used to run exact linear algebra over the
Novikov coefficients after clearing exponent denominators.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Iterator, Union

#: Extended value used for mdeg of the zero element.  Comparisons and
#: subtraction against exact Fractions behave as expected (inf - q = inf).
INF = math.inf

Rat = Fraction
ExtRat = Union[Fraction, float]

Scalar = Union[Fraction, int]


def parse_rat(text: str) -> Fraction:
    """Parse the canonical text form of a rational: "p/q" or "p"."""
    text = text.strip()
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational: {text!r}") from exc
    return value


def format_rat(value: Fraction) -> str:
    """Render a rational in the canonical "p/q" (or "p") form."""
    return str(value)


def format_extrat(value: ExtRat) -> str:
    """Render a rational or the infinite mdeg value."""
    if value == INF:
        return "inf"
    return format_rat(value)


class NovikovElement:
    """A finite sum of terms coeff * l^(exp), exponents strictly increasing.

    Instances are immutable; all operations return new elements.  Zero is
    represented by an empty term map.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Iterable[tuple[Fraction, Fraction]] = ()):
        acc: dict[Fraction, Fraction] = {}
        for coeff, exp in terms:
            coeff = Fraction(coeff)
            exp = Fraction(exp)
            acc[exp] = acc.get(exp, Fraction(0)) + coeff
        self._terms = tuple(
            (acc[e], e) for e in sorted(acc) if acc[e] != 0
        )

    @classmethod
    def zero(cls) -> "NovikovElement":
        return cls()

    @classmethod
    def term(cls, coeff, exp=0) -> "NovikovElement":
        return cls([(Fraction(coeff), Fraction(exp))])

    @classmethod
    def one(cls) -> "NovikovElement":
        return cls.term(1, 0)

    def items(self) -> tuple[tuple[Fraction, Fraction], ...]:
        """Terms as (coeff, exp) pairs in increasing exponent order."""
        return self._terms

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, NovikovElement):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(self._terms)

    def __add__(self, other: "NovikovElement") -> "NovikovElement":
        if not isinstance(other, NovikovElement):
            return NotImplemented
        return NovikovElement(self._terms + other._terms)

    def __neg__(self) -> "NovikovElement":
        return NovikovElement([(-c, e) for c, e in self._terms])

    def __sub__(self, other: "NovikovElement") -> "NovikovElement":
        if not isinstance(other, NovikovElement):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other) -> "NovikovElement":
        if isinstance(other, NovikovElement):
            prods = [
                (c1 * c2, e1 + e2)
                for c1, e1 in self._terms
                for c2, e2 in other._terms
            ]
            return NovikovElement(prods)
        if isinstance(other, (int, Fraction)):
            return NovikovElement([(c * other, e) for c, e in self._terms])
        return NotImplemented

    __rmul__ = __mul__

    def shift(self, exp) -> "NovikovElement":
        """Multiply by l^exp."""
        exp = Fraction(exp)
        return NovikovElement([(c, e + exp) for c, e in self._terms])

    def mdeg(self) -> ExtRat:
        """Minimal exponent; +inf for the zero element."""
        if not self._terms:
            return INF
        return self._terms[0][1]

    def coefficient(self, exp) -> Fraction:
        exp = Fraction(exp)
        for c, e in self._terms:
            if e == exp:
                return c
        return Fraction(0)

    def evaluate_at_one(self) -> Fraction:
        """Sum of the coefficients (the ring map sending l to 1)."""
        return sum((c for c, _ in self._terms), Fraction(0))

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        return "+".join(f"{c}*l^({e})" for c, e in self._terms)

    def __repr__(self) -> str:
        return f"NovikovElement({self})"


def mdeg_tuple(elements: Iterable[NovikovElement]) -> ExtRat:
    """Minimum of the component mdegs; +inf for empty or all-zero input."""
    best: ExtRat = INF
    for el in elements:
        m = el.mdeg()
        if m < best:
            best = m
    return best


# ---------------------------------------------------------------------------
# Dense polynomials over Q, and the rational function field Q(mu).
# ---------------------------------------------------------------------------

QPoly = tuple  # coefficient tuple, index = degree, no trailing zeros

POLY_ZERO: QPoly = ()
POLY_ONE: QPoly = (Fraction(1),)


def poly_from_coeffs(coeffs: Iterable) -> QPoly:
    cs = [Fraction(c) for c in coeffs]
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


def poly_add(p: QPoly, q: QPoly) -> QPoly:
    n = max(len(p), len(q))
    out = [Fraction(0)] * n
    for i, c in enumerate(p):
        out[i] += c
    for i, c in enumerate(q):
        out[i] += c
    return poly_from_coeffs(out)


def poly_neg(p: QPoly) -> QPoly:
    return tuple(-c for c in p)

def poly_sub(p: QPoly, q: QPoly) -> QPoly:
    return poly_add(p, poly_neg(q))


def poly_mul(p: QPoly, q: QPoly) -> QPoly:
    if not p or not q:
        return POLY_ZERO
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return poly_from_coeffs(out)


def poly_divmod(p: QPoly, q: QPoly) -> tuple[QPoly, QPoly]:
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(p)
    quot = [Fraction(0)] * max(0, len(p) - len(q) + 1)
    lead = q[-1]
    for i in range(len(rem) - len(q), -1, -1):
        c = rem[i + len(q) - 1] / lead
        if c == 0:
            continue
        quot[i] = c
        for j, b in enumerate(q):
            rem[i + j] -= c * b
    return poly_from_coeffs(quot), poly_from_coeffs(rem)


def poly_divexact(p: QPoly, q: QPoly) -> QPoly:
    quot, rem = poly_divmod(p, q)
    if rem:
        raise ArithmeticError("inexact polynomial division")
    return quot


def poly_gcd(p: QPoly, q: QPoly) -> QPoly:
    while q:
        p, q = q, poly_divmod(p, q)[1]
    if p:
        lead = p[-1]
        p = tuple(c / lead for c in p)
    return p


class RationalFunction:
    """Element of Q(mu) where mu = l^(1/scale).

    Kept in reduced form with a monic denominator.  This is the exact
    field into which finite-support Novikov elements embed for linear
    algebra (ranks, kernels, invertibility) after clearing exponent
    denominators.
    """

    __slots__ = ("num", "den", "scale")

    def __init__(self, num, den=POLY_ONE, scale: int = 1):
        num = poly_from_coeffs(num)
        den = poly_from_coeffs(den)
        if not den:
            raise ZeroDivisionError("rational function with zero denominator")
        if scale < 1:
            raise ValueError("scale must be a positive integer")
        g = poly_gcd(num, den)
        if g and g != POLY_ONE:
            num = poly_divexact(num, g)
            den = poly_divexact(den, g)
        lead = den[-1]
        if lead != 1:
            num = tuple(c / lead for c in num)
            den = tuple(c / lead for c in den)
        self.num = num
        self.den = den
        self.scale = scale

    def _check(self, other: "RationalFunction"):
        if self.scale != other.scale:
            raise ValueError("mismatched scales")

    def is_zero(self) -> bool:
        return not self.num

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return (self.num, self.den, self.scale) == (other.num, other.den, other.scale)

    def __hash__(self) -> int:
        return hash((self.num, self.den, self.scale))

    def __add__(self, other: "RationalFunction") -> "RationalFunction":
        self._check(other)
        num = poly_add(poly_mul(self.num, other.den), poly_mul(other.num, self.den))
        return RationalFunction(num, poly_mul(self.den, other.den), self.scale)

    def __neg__(self) -> "RationalFunction":
        return RationalFunction(poly_neg(self.num), self.den, self.scale)

    def __sub__(self, other: "RationalFunction") -> "RationalFunction":
        return self + (-other)

    def __mul__(self, other: "RationalFunction") -> "RationalFunction":
        self._check(other)
        return RationalFunction(
            poly_mul(self.num, other.num), poly_mul(self.den, other.den), self.scale
        )

    def __repr__(self) -> str:
        return f"RationalFunction(num={self.num}, den={self.den}, scale={self.scale})"


def to_rational_function(a: NovikovElement, scale: int) -> RationalFunction:
    """Embed a Novikov element as a polynomial in mu = l^(1/scale).

    Every exponent must be a non-negative multiple of 1/scale; callers
    shift exponents by a recorded global offset beforehand when needed.
    """
    if scale < 1:
        raise ValueError("scale must be a positive integer")
    coeffs: dict[int, Fraction] = {}
    for c, e in a.items():
        k = e * scale
        if k.denominator != 1:
            raise ValueError(f"scale {scale} does not clear exponent {e}")
        if k < 0:
            raise ValueError(f"exponent {e} is negative; shift before embedding")
        coeffs[int(k)] = c
    if not coeffs:
        return RationalFunction(POLY_ZERO, POLY_ONE, scale)
    top = max(coeffs)
    return RationalFunction(
        [coeffs.get(i, Fraction(0)) for i in range(top + 1)], POLY_ONE, scale
    )


def from_rational_function(rf: RationalFunction) -> NovikovElement:
    """Inverse of to_rational_function on polynomials (denominator 1)."""
    if len(rf.den) != 1:
        raise ValueError("only polynomial rational functions convert back")
    den = rf.den[0]
    return NovikovElement(
        [(c / den, Fraction(i, rf.scale)) for i, c in enumerate(rf.num) if c != 0]
    )


def common_scale(elements: Iterable[NovikovElement]) -> int:
    """Least positive integer clearing every exponent denominator."""
    scale = 1
    for el in elements:
        for _, e in el.items():
            scale = scale * e.denominator // math.gcd(scale, e.denominator)
    return scale
