"""The two curve families and their rank certification pipeline.

``square``:  y^2 = x^3 - a^2 x + b^2, points (0, b), (a, b), (-1, 2b),
             the last one needing a^2 = 3b^2 + 1.
``sixth``:   y^2 = x^3 - a^2 x + b^6, points (0, b^3), (a, b^3), (-b^2, ab),
             all on the curve for every a, b.
"""

from __future__ import annotations

import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Iterable, Iterator, Optional, Union

from .curve import Curve, Point, make_curve
from .errors import DidNotConverge, NotOnCurve
from .heights import (
    DEFAULT_MAX_DOUBLINGS,
    DEFAULT_TOL,
    GramMatrix,
    IndependenceVerdict,
    gram_matrix,
    independence_certificate,
)
from .pell import admissible_stream
from .torsion import DEFAULT_PRIME_WINDOW, TorsionResult, theorem1_hypotheses, torsion_subgroup

__all__ = [
    "FAMILIES",
    "HypothesisFlags",
    "FamilyInstance",
    "CertifyOptions",
    "RankCertificate",
    "HypothesisWarning",
    "build_square",
    "build_sixth",
    "build",
    "certify",
    "iter_scan",
    "scan",
]

FAMILIES = ("square", "sixth")


class HypothesisWarning(UserWarning):
    pass


@dataclass(frozen=True)
class HypothesisFlags:
    pell_relation_holds: bool
    theorem1_hypotheses: bool
    a_less_than_b: bool


@dataclass(frozen=True)
class FamilyInstance:
    family: str
    a: int
    b: int
    curve: Curve
    points: tuple[Point, ...]
    hypothesis_flags: HypothesisFlags

    @property
    def family_log_base(self) -> int:
        """a for the square family, b for the sixth."""
        return self.a if self.family == "square" else self.b


def _flags(a: int, b: int) -> HypothesisFlags:
    return HypothesisFlags(
        pell_relation_holds=a * a == 3 * b * b + 1,
        theorem1_hypotheses=theorem1_hypotheses(a, b),
        a_less_than_b=a < b,
    )


def _check_args(a, b):
    if isinstance(a, bool) or isinstance(b, bool) or int(a) != a or int(b) != b:
        raise ValueError("a and b must be integers")
    if a < 1 or b < 1:
        raise ValueError("a and b must be positive")
    return int(a), int(b)


def build_square(a: int, b: int) -> FamilyInstance:
    a, b = _check_args(a, b)
    c = make_curve(-a * a, b * b)
    P1, P2 = c.point(0, b), c.point(a, b)
    if a * a != 3 * b * b + 1:
        raise NotOnCurve(
            f"(-1, {2 * b}) is not on y^2 = x^3 - {a}^2 x + {b}^2: "
            f"Pell relation a^2 = 3b^2 + 1 fails ({a * a} != {3 * b * b + 1})"
        )
    return FamilyInstance("square", a, b, c, (P1, P2, c.point(-1, 2 * b)), _flags(a, b))


def build_sixth(a: int, b: int) -> FamilyInstance:
    a, b = _check_args(a, b)
    c = make_curve(-a * a, b**6)
    pts = (c.point(0, b**3), c.point(a, b**3), c.point(-b * b, a * b))
    flags = _flags(a, b)
    if not flags.a_less_than_b:
        warnings.warn(
            f"sixth family with a={a}, b={b}: the hypothesis 0 < a < b does not hold",
            HypothesisWarning,
            stacklevel=2,
        )
    return FamilyInstance("sixth", a, b, c, pts, flags)


def build(family: str, a: int, b: int) -> FamilyInstance:
    if family == "square":
        return build_square(a, b)
    if family == "sixth":
        return build_sixth(a, b)
    raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")


@dataclass(frozen=True)
class CertifyOptions:
    tol: float = DEFAULT_TOL
    n_max: int = DEFAULT_MAX_DOUBLINGS
    prime_window: int = DEFAULT_PRIME_WINDOW
    log_base: str = "natural"  # "natural" or "family"
    torsion: Optional[bool] = None  # None: on for square, off for sixth


@dataclass(frozen=True)
class RankCertificate:
    family: str
    a: int
    b: int
    instance: Optional[FamilyInstance]
    torsion: Optional[TorsionResult]
    gram: Optional[GramMatrix]
    verdict: IndependenceVerdict
    options: CertifyOptions
    primes: tuple[int, ...] = ()
    runtime_ms: float = field(default=0.0, compare=False)
    timestamp: str = field(default="", compare=False)
    diagnostic: Optional[str] = None

    @property
    def rank_lower_bound(self) -> int:
        return self.verdict.rank_lower_bound

    @property
    def certified(self) -> bool:
        return self.verdict.independent


_NO_CLAIM = IndependenceVerdict(False, float("nan"), float("nan"), 0)


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def certify(inst: FamilyInstance, opts: CertifyOptions = CertifyOptions()) -> RankCertificate:
    t0 = time.perf_counter()
    want_torsion = opts.torsion if opts.torsion is not None else inst.family == "square"
    torsion = None
    primes: tuple[int, ...] = ()
    if want_torsion:
        torsion = torsion_subgroup(inst.curve, prime_window=opts.prime_window)
        primes = torsion.primes
    base = "natural" if opts.log_base == "natural" else inst.family_log_base
    if base == 1:
        base = "natural"  # log base 1 is undefined; b = 1 falls back
    diagnostic = None
    try:
        gram = gram_matrix(inst.curve, inst.points, opts.tol, base, opts.n_max)
        verdict = independence_certificate(gram)
        if not verdict.independent:
            diagnostic = "Gram determinant not separated from zero by its error bound"
    except DidNotConverge as exc:
        gram, verdict, diagnostic = None, _NO_CLAIM, f"did not converge: {exc}"
    return RankCertificate(
        inst.family,
        inst.a,
        inst.b,
        inst,
        torsion,
        gram,
        verdict,
        opts,
        primes,
        (time.perf_counter() - t0) * 1000.0,
        _now(),
        diagnostic,
    )


def _failed(family: str, a, b, opts: CertifyOptions, exc: Exception) -> RankCertificate:
    return RankCertificate(
        family, a, b, None, None, None, _NO_CLAIM, opts, timestamp=_now(),
        diagnostic=f"{type(exc).__name__}: {exc}",
    )


def _certify_item(args) -> RankCertificate:
    family, a, b, opts = args
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", HypothesisWarning)
            inst = build(family, a, b)
        return certify(inst, opts)
    except Exception as exc:  # per-item isolation
        return _failed(family, a, b, opts, exc)


def iter_scan(
    family: str,
    source: Union[int, Iterable[tuple[int, int]]],
    opts: CertifyOptions = CertifyOptions(),
    workers: int = 1,
) -> Iterator[RankCertificate]:
    """Yield one certificate per instance, in input order.

    ``source`` is either a count of admissible Pell pairs (square family only)
    or an iterable of (a, b) pairs.  A failing item yields a certificate with
    no rank claim and a diagnostic instead of stopping the scan.
    """
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}")
    if isinstance(source, int):
        if family != "square":
            raise ValueError("a Pell count only makes sense for the square family")
        items = [(p.a, p.b) for p in admissible_stream(source)] if source > 0 else []
    else:
        items = [(a, b) for a, b in source]
    jobs = [(family, a, b, opts) for a, b in items]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            yield from pool.map(_certify_item, jobs)
    else:
        for job in jobs:
            yield _certify_item(job)


def scan(
    family: str,
    source: Union[int, Iterable[tuple[int, int]]],
    opts: CertifyOptions = CertifyOptions(),
    workers: int = 1,
) -> list[RankCertificate]:
    return list(iter_scan(family, source, opts, workers))
