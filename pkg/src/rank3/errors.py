"""Exception types shared across the package."""

from __future__ import annotations


class SingularCurve(ValueError):
    """4A^3 + 27B^2 vanishes, so the Weierstrass model is not an elliptic curve."""


class PointNotOnCurve(ValueError):
    pass


class NotOnCurve(PointNotOnCurve):
    """A family's designated point fails to lie on the constructed curve."""


class TwoTorsionX(ZeroDivisionError):
    """The abscissa is a root of x^3 + Ax + B, so x(2P) is the point at infinity."""


class BadReduction(ValueError):
    pass


class EvenPrime(ValueError):
    pass


class DidNotConverge(ArithmeticError):
    """The doubling cap was reached before the height error fell below tolerance.

    The last estimate is kept on ``estimate`` so callers can still inspect it.
    """

    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate
