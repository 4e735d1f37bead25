"""Naive and canonical heights, height pairings and Gram determinants.

The canonical height is approximated by the doubling limit

    h_N(P) = H(2^N P) / (2 * 4^N),    H(x = p/q) = log max(|p|, |q|),

iterated on x-coordinates only.  Write c_k = H(2^{k+1} P) - 4 H(2^k P).  The
c_k are bounded by a curve constant C, so the tail after N doublings is at
most C / (6 * 4^N).  C is estimated by the largest |c_k| seen along the
orbit, and the reported bound multiplies that tail by a safety factor of 4.

A single orbit can under-sample C badly: the c_k behave like a bounded
quasi-random sequence with runs near zero, and an orbit starting close to the
identity has c_k growing like 16^k before they saturate.  Because C belongs to
the duplication map rather than to the point, the estimate is floored by the
largest |c_k| seen on a few fixed probe x-values (not necessarily on the
curve), and no stop is accepted before MIN_DOUBLINGS samples.  This is an
empirical bound, not a rigorous one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations
from numbers import Real
from typing import Sequence, Union

import gmpy2
from gmpy2 import mpq

from .curve import Curve, Point, _add, contains, to_rational, x_of_double
from .errors import DidNotConverge, PointNotOnCurve, TwoTorsionX

__all__ = [
    "HeightEstimate",
    "GramMatrix",
    "IndependenceVerdict",
    "naive_height",
    "canonical_height",
    "pairing",
    "gram_matrix",
    "independence_certificate",
    "DEFAULT_TOL",
    "DEFAULT_MAX_DOUBLINGS",
]

DEFAULT_TOL = 1e-3
DEFAULT_MAX_DOUBLINGS = 10
SAFETY = 4
MIN_DOUBLINGS = 6  # c_k samples required before the envelope is trusted
PROBE_XS = (0, 1, -1, 2, -2, mpq(1, 2), mpq(-1, 2), 3)
PROBE_STEPS = 4
LOG_PRECISION = 96  # bits

_log_ctx = gmpy2.context(precision=LOG_PRECISION)


@dataclass(frozen=True)
class HeightEstimate:
    value: float
    error_bound: float
    doublings_used: int
    torsion: bool = False

    def __post_init__(self):
        assert self.error_bound >= 0
        assert self.doublings_used >= 1


@dataclass(frozen=True)
class GramMatrix:
    entries: tuple[tuple[Real, ...], ...]
    entry_errors: tuple[tuple[Real, ...], ...]
    points: tuple[Point, ...] = ()
    log_base: float = 1.0

    @property
    def size(self) -> int:
        return len(self.entries)

    @classmethod
    def exact(cls, entries, log_base=1.0) -> "GramMatrix":
        """Wrap a given matrix with zero entry errors."""
        rows = tuple(tuple(row) for row in entries)
        zeros = tuple(tuple(0 for _ in row) for row in rows)
        return cls(rows, zeros, (), log_base)


@dataclass(frozen=True)
class IndependenceVerdict:
    independent: bool
    determinant: Real
    margin: Real
    rank_lower_bound: int
    perturbation_bound: Real = 0


def _log_mpz(n) -> "gmpy2.mpfr":
    return _log_ctx.log(gmpy2.mpz(n))


def _naive(x: mpq) -> "gmpy2.mpfr":
    return _log_mpz(max(abs(x.numerator), x.denominator))


def naive_height(x) -> float:
    """log max(|p|, |q|) for x = p/q in lowest terms, natural-log units."""
    return float(_naive(to_rational(x)))


def _defect(H_new, H_old) -> float:
    return abs(float(_log_ctx.sub(H_new, _log_ctx.mul(4, H_old))))


@lru_cache(maxsize=256)
def _probe_constant(A: int, B: int) -> float:
    """Largest |c_k| over short duplication orbits of the probe x-values."""
    c = Curve(A, B)
    worst = 0.0
    for x in PROBE_XS:
        x = mpq(x)
        H_prev = _naive(x)
        for _ in range(PROBE_STEPS):
            try:
                x = x_of_double(c, x)
            except TwoTorsionX:
                break
            H = _naive(x)
            worst = max(worst, _defect(H, H_prev))
            H_prev = H
    return worst


@lru_cache(maxsize=4096)
def _height_from_x(A: int, B: int, x: mpq, tol: float, n_max: int) -> HeightEstimate:
    c = Curve(A, B)
    H_prev = _naive(x)
    worst = _probe_constant(A, B)  # max |c_k| so far
    for N in range(1, n_max + 1):
        try:
            x = x_of_double(c, x)
        except TwoTorsionX:
            return HeightEstimate(0.0, 0.0, N, torsion=True)
        H = _naive(x)
        worst = max(worst, _defect(H, H_prev))
        H_prev = H
        value = float(_log_ctx.div(H, 2 * 4**N))
        error = SAFETY * worst / (6 * 4**N)
        if N >= min(MIN_DOUBLINGS, n_max) and error <= tol:
            return HeightEstimate(value, error, N)
    est = HeightEstimate(value, error, n_max)
    raise DidNotConverge(
        f"height error {error:.3g} above tol {tol:g} after {n_max} doublings", est
    )


def canonical_height(
    c: Curve, P: Point, tol: float = DEFAULT_TOL, n_max: int = DEFAULT_MAX_DOUBLINGS
) -> HeightEstimate:
    if tol <= 0:
        raise ValueError("tol must be positive")
    if n_max < 2:
        raise ValueError("n_max must be at least 2")
    if not contains(c, P):
        raise PointNotOnCurve(f"{P} is not on {c}")
    if P.is_identity:
        return HeightEstimate(0.0, 0.0, 1, torsion=True)
    if P.y == 0:
        return HeightEstimate(0.0, 0.0, 1, torsion=True)
    return _height_from_x(c.A, c.B, P.x, float(tol), int(n_max))


def pairing(
    c: Curve, P: Point, Q: Point, tol: float = DEFAULT_TOL, n_max: int = DEFAULT_MAX_DOUBLINGS
) -> tuple[float, float]:
    """<P, Q> = h(P + Q) - h(P) - h(Q), with the three error bounds summed."""
    if not (contains(c, P) and contains(c, Q)):
        raise PointNotOnCurve("both points must lie on the curve")
    hs = [canonical_height(c, R, tol, n_max) for R in (_add(c, P, Q), P, Q)]
    return hs[0].value - hs[1].value - hs[2].value, sum(h.error_bound for h in hs)


def _log_scale(log_base) -> float:
    if log_base in (None, "natural", 1, 1.0):
        return 1.0
    base = float(log_base)
    if base <= 1:
        raise ValueError("log_base must exceed 1 (or be 'natural')")
    return math.log(base)


def gram_matrix(
    c: Curve,
    points: Sequence[Point],
    tol: float = DEFAULT_TOL,
    log_base: Union[str, float, int, None] = "natural",
    n_max: int = DEFAULT_MAX_DOUBLINGS,
) -> GramMatrix:
    """Height-pairing matrix of ``points``; diagonal entries are 2 h(P_i)."""
    scale = _log_scale(log_base)
    k = len(points)
    heights = [canonical_height(c, P, tol, n_max) for P in points]
    G = [[0.0] * k for _ in range(k)]
    E = [[0.0] * k for _ in range(k)]
    for i in range(k):
        G[i][i] = 2 * heights[i].value / scale
        E[i][i] = 2 * heights[i].error_bound / scale
        for j in range(i + 1, k):
            s = canonical_height(c, _add(c, points[i], points[j]), tol, n_max)
            v = s.value - heights[i].value - heights[j].value
            e = s.error_bound + heights[i].error_bound + heights[j].error_bound
            G[i][j] = G[j][i] = v / scale
            E[i][j] = E[j][i] = e / scale
    base = 1.0 if scale == 1.0 else float(log_base)
    return GramMatrix(
        tuple(map(tuple, G)), tuple(map(tuple, E)), tuple(points), base
    )


def _sign(perm) -> int:
    s, seen = 1, list(perm)
    for i in range(len(seen)):
        while seen[i] != i:
            j = seen[i]
            seen[i], seen[j] = seen[j], seen[i]
            s = -s
    return s


def independence_certificate(G: GramMatrix) -> IndependenceVerdict:
    """Decide non-singularity of G with its entry errors propagated.

    The perturbation bound sums, over every Leibniz term, the largest change
    the entry errors can cause in that product.  Its first-order part is at
    least sum |cofactor_ij| * err_ij, and it also covers higher-order terms.
    Exact entries with zero errors give an exact determinant.
    """
    k = G.size
    M, Err = G.entries, G.entry_errors
    det = 0
    bound = 0
    for perm in permutations(range(k)):
        term = 1
        hi = 1
        lo = 1
        for i, j in enumerate(perm):
            term = term * M[i][j]
            hi = hi * (abs(M[i][j]) + Err[i][j])
            lo = lo * abs(M[i][j])
        det = det + _sign(perm) * term
        bound = bound + (hi - lo)
    margin = abs(det) - bound
    independent = margin > 0
    return IndependenceVerdict(independent, det, margin, k if independent else 0, bound)
