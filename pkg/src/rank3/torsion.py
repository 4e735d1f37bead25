"""Torsion subgroups of E(Q) for integral short Weierstrass models.

The order of E(Q)_tors divides #E(F_p) for every odd prime p of good
reduction.  When the gcd of a few such counts is 1 the group is trivial;
when it is a power of two times 1 and no rational 2-torsion exists it is
trivial as well.  Otherwise the Lutz-Nagell candidates (integral x, and
y = 0 or y^2 | 4A^3 + 27B^2) are enumerated and tested for finite order.
Mazur's bound (order <= 12) caps the order test.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from math import gcd, isqrt
from typing import Iterable, Sequence

import gmpy2

from .curve import INFINITY, Curve, Point, _add
from .errors import BadReduction, EvenPrime

__all__ = [
    "TorsionResult",
    "two_torsion",
    "count_points_mod_p",
    "good_primes",
    "torsion_order_bound",
    "torsion_subgroup",
    "theorem1_hypotheses",
    "integer_roots_depressed_cubic",
    "factorize",
]

MAZUR_MAX_ORDER = 12
DEFAULT_PRIME_WINDOW = 5
PRIME_LIMIT = 200


@dataclass(frozen=True)
class TorsionResult:
    order: int
    points: tuple[Point, ...]
    method: str  # "gcd-bound" | "combined" | "lutz-nagell"
    primes: tuple[int, ...] = field(default=())
    bound: int = 0

    def __post_init__(self):
        assert self.order == len(self.points)
        assert self.order <= MAZUR_MAX_ORDER and self.order != 11

    @property
    def trivial(self) -> bool:
        return self.order == 1


def integer_roots_depressed_cubic(A: int, C: int) -> list[int]:
    """Integer roots of x^3 + A*x + C, found exactly by monotone bisection."""

    def f(x):
        return x * x * x + A * x + C

    R = 1 + max(abs(A), abs(C))
    if A >= 0:
        pieces = [(-R, R, 1)]
    else:
        # critical points at +-sqrt(-A/3); s = floor(sqrt(-A/3))
        s = isqrt(-A // 3)
        pieces = [(-R, -s - 1, 1), (-s, s, -1), (s + 1, R, 1)]
    roots = []
    for lo, hi, sign in pieces:
        if lo > hi:
            continue
        # f is monotone on [lo, hi] in direction `sign`
        while lo < hi:
            mid = (lo + hi) // 2
            if sign * f(mid) < 0:
                lo = mid + 1
            else:
                hi = mid
        if f(lo) == 0:
            roots.append(lo)
    return sorted(set(roots))


def two_torsion(c: Curve) -> list[Point]:
    return [Point(gmpy2.mpq(r), gmpy2.mpq(0)) for r in integer_roots_depressed_cubic(c.A, c.B)]


def _is_odd_prime(p: int) -> bool:
    return p > 2 and gmpy2.is_prime(p)


def count_points_mod_p(c: Curve, p: int) -> int:
    """#E(F_p) = 1 + sum over x of (1 + legendre(x^3 + Ax + B, p))."""
    if p == 2:
        raise EvenPrime("p = 2 is not supported")
    if not _is_odd_prime(p):
        raise ValueError(f"{p} is not an odd prime")
    if c.discriminant % p == 0:
        raise BadReduction(f"{p} divides the discriminant of {c}")
    A, B = c.A % p, c.B % p
    half = (p - 1) // 2
    total = 1
    for x in range(p):
        v = (x * x * x + A * x + B) % p
        if v == 0:
            total += 1
        elif pow(v, half, p) == 1:
            total += 2
    return total


def good_primes(c: Curve, count: int = DEFAULT_PRIME_WINDOW, limit: int = PRIME_LIMIT) -> list[int]:
    """The first ``count`` odd primes below ``limit`` not dividing the discriminant."""
    out = []
    for p in range(3, limit, 2):
        if len(out) == count:
            break
        if gmpy2.is_prime(p) and c.discriminant % p:
            out.append(p)
    return out


def torsion_order_bound(c: Curve, primes: Iterable[int]) -> int:
    g = 0
    for p in primes:
        g = gcd(g, count_points_mod_p(c, p))
    if g == 0:
        raise ValueError("need at least one prime")
    return g


def _pollard_brent(n: int, rng: random.Random) -> int:
    if n % 2 == 0:
        return 2
    while True:
        y, cc, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g, r, q = 1, 1, 1
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + cc) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + cc) % n
                    q = q * abs(x - y) % n
                g = gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + cc) % n
                g = gcd(abs(x - ys), n)
        if g != n:
            return g


def factorize(n: int, trial_limit: int = 10**6) -> Counter:
    """Prime factorisation of |n| by trial division, then Pollard-Brent rho."""
    n = abs(int(n))
    if n == 0:
        raise ValueError("cannot factor 0")
    out: Counter = Counter()
    for p in (2, 3, 5):
        while n % p == 0:
            out[p] += 1
            n //= p
    d, steps = 7, (4, 2, 4, 2, 4, 6, 2, 6)
    i = 0
    while d <= trial_limit and d * d <= n:
        while n % d == 0:
            out[d] += 1
            n //= d
        d += steps[i]
        i = (i + 1) % 8
    rng = random.Random(0)
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if gmpy2.is_prime(m):
            out[m] += 1
            continue
        r = gmpy2.isqrt(m)
        if r * r == m:
            stack += [int(r), int(r)]
            continue
        f = _pollard_brent(m, rng)
        stack += [f, m // f]
    return out


def _square_divisor_roots(n: int) -> list[int]:
    """All y >= 1 with y^2 | n."""
    ys = [1]
    for p, e in factorize(n).items():
        ys = [y * p**k for y in ys for k in range(e // 2 + 1)]
    return sorted(ys)


def _finite_order(c: Curve, P: Point, limit: int) -> int:
    """Order of P if it is at most ``limit``, else 0."""
    Q = P
    for n in range(1, limit + 1):
        if Q.is_identity:
            return n
        if Q.x.denominator != 1 or Q.y.denominator != 1:
            return 0  # torsion multiples stay integral
        Q = _add(c, Q, P)
    return 0


def torsion_subgroup(
    c: Curve,
    prime_window: int = DEFAULT_PRIME_WINDOW,
    primes: Sequence[int] | None = None,
) -> TorsionResult:
    if primes is None:
        primes = good_primes(c, prime_window)
    primes = tuple(primes)
    bound = torsion_order_bound(c, primes) if primes else 0
    trivial = (INFINITY,)
    if bound == 1:
        return TorsionResult(1, trivial, "gcd-bound", primes, bound)
    twos = two_torsion(c)
    if bound and not twos:
        odd = bound
        while odd % 2 == 0:
            odd //= 2
        if odd == 1:
            return TorsionResult(1, trivial, "combined", primes, bound)

    limit = MAZUR_MAX_ORDER if not bound else min(bound, MAZUR_MAX_ORDER)
    D = 4 * c.A**3 + 27 * c.B**2
    found = list(twos)
    for y in _square_divisor_roots(D):
        for x in integer_roots_depressed_cubic(c.A, c.B - y * y):
            for s in (y, -y):
                P = Point(gmpy2.mpq(x), gmpy2.mpq(s))
                if _finite_order(c, P, limit):
                    found.append(P)
    found.sort(key=lambda P: (P.x, P.y))
    return TorsionResult(len(found) + 1, trivial + tuple(found), "lutz-nagell", primes, bound)


def theorem1_hypotheses(a: int, b: int) -> bool:
    """gcd(a, b) = 1, b odd, 3 | b and 4 does not divide a."""
    if a < 1 or b < 1:
        raise ValueError("a and b must be positive")
    return gcd(a, b) == 1 and b % 2 == 1 and b % 3 == 0 and a % 4 != 0
