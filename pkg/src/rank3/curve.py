"""Exact group law on short Weierstrass curves y^2 = x^3 + Ax + B over Q.

Coordinates are ``gmpy2.mpq`` values, which are kept in lowest terms with a
positive denominator after every operation.  Plain ints, ``fractions.Fraction``
and strings like ``"-3/7"`` are accepted wherever a rational is expected.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

import gmpy2
from gmpy2 import mpq, mpz

from .errors import PointNotOnCurve, SingularCurve, TwoTorsionX

RationalLike = Union[int, str, Fraction, "mpq"]

__all__ = [
    "Curve",
    "Point",
    "INFINITY",
    "make_curve",
    "contains",
    "add",
    "negate",
    "double",
    "scalar_mul",
    "x_of_double",
    "to_rational",
    "format_rational",
]


def to_rational(value: RationalLike) -> mpq:
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    if isinstance(value, float):
        raise TypeError("floats are not accepted as exact coordinates")
    return mpq(value)


def format_rational(value: RationalLike) -> str:
    """Render as ``p/q`` in lowest terms, the sign on the numerator only."""
    r = to_rational(value)
    return f"{r.numerator}/{r.denominator}"


@dataclass(frozen=True)
class Curve:
    A: int
    B: int
    discriminant: int = field(init=False, compare=False)

    def __post_init__(self):
        A, B = int(self.A), int(self.B)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "discriminant", -16 * (4 * A**3 + 27 * B**2))
        if self.discriminant == 0:
            raise SingularCurve(f"y^2 = x^3 + ({A})x + ({B}) is singular")

    def rhs(self, x: mpq) -> mpq:
        return x * x * x + self.A * x + self.B

    def point(self, x: RationalLike, y: RationalLike) -> "Point":
        """Build an affine point, checking that it lies on this curve."""
        P = Point(to_rational(x), to_rational(y))
        if not contains(self, P):
            raise PointNotOnCurve(f"({P.x}, {P.y}) is not on {self}")
        return P

    def lift_x(self, x: RationalLike) -> Optional["Point"]:
        """A point with abscissa ``x`` (nonnegative y), or None if y is irrational."""
        x = to_rational(x)
        r = self.rhs(x)
        if r < 0:
            return None
        num, den = r.numerator, r.denominator
        if not (gmpy2.is_square(num) and gmpy2.is_square(den)):
            return None
        return Point(x, mpq(gmpy2.isqrt(num), gmpy2.isqrt(den)))

    def __str__(self) -> str:
        return f"y^2 = x^3 + ({self.A})x + ({self.B})"


@dataclass(frozen=True)
class Point:
    """Affine point (x, y), or the point at infinity when both are None."""

    x: Optional[mpq] = None
    y: Optional[mpq] = None

    @property
    def is_identity(self) -> bool:
        return self.x is None

    def __str__(self) -> str:
        if self.is_identity:
            return "infinity"
        return f"({format_rational(self.x)}, {format_rational(self.y)})"


INFINITY = Point()


def make_curve(A: int, B: int) -> Curve:
    return Curve(A, B)


def contains(c: Curve, P: Point) -> bool:
    if P.is_identity:
        return True
    if P.y is None:
        return False
    return P.y * P.y == c.rhs(P.x)


def _check(c: Curve, *points: Point) -> None:
    for P in points:
        if not contains(c, P):
            raise PointNotOnCurve(f"{P} is not on {c}")


def negate(c: Curve, P: Point) -> Point:
    _check(c, P)
    if P.is_identity:
        return P
    return Point(P.x, -P.y)


def _add(c: Curve, P: Point, Q: Point) -> Point:
    # Unchecked chord-tangent law.
    if P.is_identity:
        return Q
    if Q.is_identity:
        return P
    if P.x == Q.x:
        if P.y == -Q.y:
            return INFINITY
        lam = (3 * P.x * P.x + c.A) / (2 * P.y)
    else:
        lam = (Q.y - P.y) / (Q.x - P.x)
    x3 = lam * lam - P.x - Q.x
    y3 = lam * (P.x - x3) - P.y
    return Point(x3, y3)


def add(c: Curve, P: Point, Q: Point) -> Point:
    _check(c, P, Q)
    return _add(c, P, Q)


def double(c: Curve, P: Point) -> Point:
    _check(c, P)
    if P.is_identity or P.y == 0:
        return INFINITY
    return _add(c, P, P)


def scalar_mul(c: Curve, n: int, P: Point) -> Point:
    """n*P by left-to-right double-and-add."""
    _check(c, P)
    n = int(n)
    if n < 0:
        P = Point(P.x, -P.y) if not P.is_identity else P
        n = -n
    R = INFINITY
    for bit in bin(n)[2:]:
        R = _add(c, R, R)
        if bit == "1":
            R = _add(c, R, P)
    return R


def x_of_double(c: Curve, x: RationalLike) -> mpq:
    """x(2P) from x(P) alone: (x^4 - 2Ax^2 - 8Bx + A^2) / (4(x^3 + Ax + B))."""
    x = to_rational(x)
    p, q = mpz(x.numerator), mpz(x.denominator)
    A, B = c.A, c.B
    p2, q2 = p * p, q * q
    den = 4 * q * (p2 * p + A * p * q2 + B * q2 * q)
    if den == 0:
        raise TwoTorsionX(f"x = {x} is a root of x^3 + Ax + B on {c}")
    num = p2 * p2 - 2 * A * p2 * q2 - 8 * B * p * q2 * q + A * A * q2 * q2
    return mpq(num, den)
