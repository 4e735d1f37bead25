"""Exact rank-at-least-3 certificates for two families of elliptic curves over Q.

    y^2 = x^3 - a^2 x + b^2   with a^2 = 3b^2 + 1   ("square")
    y^2 = x^3 - a^2 x + b^6                         ("sixth")
"""

from .curve import (
    INFINITY,
    Curve,
    Point,
    add,
    contains,
    double,
    format_rational,
    make_curve,
    negate,
    scalar_mul,
    to_rational,
    x_of_double,
)
from .errors import (
    BadReduction,
    DidNotConverge,
    EvenPrime,
    NotOnCurve,
    PointNotOnCurve,
    SingularCurve,
    TwoTorsionX,
)
from .families import (
    CertifyOptions,
    FamilyInstance,
    RankCertificate,
    build_sixth,
    build_square,
    certify,
    scan,
)
from .heights import (
    GramMatrix,
    HeightEstimate,
    IndependenceVerdict,
    canonical_height,
    gram_matrix,
    independence_certificate,
    naive_height,
    pairing,
)
from .pell import PellPair, admissible, admissible_stream, first_pair, next_pair, nth_pair
from .torsion import (
    TorsionResult,
    count_points_mod_p,
    theorem1_hypotheses,
    torsion_order_bound,
    torsion_subgroup,
    two_torsion,
)

__version__ = "0.1.0"
