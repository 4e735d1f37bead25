from fractions import Fraction
from math import gcd

import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import combo
from oracles import discriminant_family, frac_add, x4_sixth_closed_form
from rank3.curve import (
    INFINITY,
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
from rank3.errors import PointNotOnCurve, SingularCurve, TwoTorsionX
from rank3.families import build_sixth, build_square


def reduced(r):
    return r.denominator > 0 and gcd(int(r.numerator), int(r.denominator)) == 1


class TestMakeCurve:
    def test_congruent_number_curve(self):
        assert make_curve(-1, 0).discriminant == 64

    def test_family_discriminant(self):
        c = make_curve(-676, 225)
        assert c.discriminant == discriminant_family(26, 15**2)

    def test_singular(self):
        with pytest.raises(SingularCurve):
            make_curve(-3, 2)


class TestContains:
    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
    def test_third_point_square_family(self, n):
        from rank3.pell import nth_pair

        p = nth_pair(n)
        c = make_curve(-p.a**2, p.b**2)
        assert contains(c, Point(mpq(-1), mpq(2 * p.b)))

    @pytest.mark.parametrize("a,b", [(1, 2), (3, 7), (10, 3)])
    def test_third_point_sixth_family(self, a, b):
        c = make_curve(-a * a, b**6)
        assert contains(c, Point(mpq(-b * b), mpq(a * b)))

    def test_not_on_curve(self):
        assert not contains(make_curve(-676, 225), Point(mpq(1), mpq(1)))

    def test_identity(self):
        assert contains(make_curve(-1, 0), INFINITY)

    def test_point_factory_rejects(self):
        with pytest.raises(PointNotOnCurve):
            make_curve(-676, 225).point(1, 1)


class TestAddNegate:
    def test_identity_neutral(self, e26):
        P = e26.points[0]
        assert add(e26.curve, P, INFINITY) == P
        assert add(e26.curve, INFINITY, P) == P

    def test_inverse(self, e26):
        for P in e26.points:
            assert add(e26.curve, P, negate(e26.curve, P)) == INFINITY

    def test_hand_computed_chord(self, e26):
        # slope 0 between (0,15) and (26,15): x3 = -26, y3 = -15
        P1, P2, _ = e26.points
        assert add(e26.curve, P1, P2) == Point(mpq(-26), mpq(-15))

    def test_matches_fraction_oracle(self, e26):
        c = e26.curve
        P, Q = e26.points[0], e26.points[2]
        R = add(c, P, Q)
        ox, oy = frac_add(c.A, (Fraction(0), Fraction(15)), (Fraction(-1), Fraction(30)))
        assert (R.x, R.y) == (to_rational(ox), to_rational(oy))

    def test_negate(self, e12):
        c = e12.curve
        assert negate(c, INFINITY) == INFINITY
        assert negate(c, e12.points[2]) == Point(mpq(-4), mpq(-2))
        e = build_square(26, 15)
        assert negate(e.curve, e.points[0]) == Point(mpq(0), mpq(-15))

    def test_off_curve_rejected(self, e26):
        with pytest.raises(PointNotOnCurve):
            add(e26.curve, e26.points[0], Point(mpq(1), mpq(1)))


class TestDouble:
    def test_two_torsion(self):
        c = make_curve(-1, 0)
        for n in (0, 1, -1):
            assert double(c, Point(mpq(n), mpq(0))) == INFINITY

    @pytest.mark.parametrize("a,b", [(1, 2), (2, 3), (5, 7)])
    def test_sixth_p1(self, a, b):
        inst = build_sixth(a, b)
        assert double(inst.curve, inst.points[0]).x == mpq(a**4, 4 * b**6)

    @pytest.mark.parametrize("a,b", [(2, 1), (26, 15), (362, 209)])
    def test_square_p1(self, a, b):
        inst = build_square(a, b)
        assert double(inst.curve, inst.points[0]).x == mpq((3 * b * b + 1) ** 2, 4 * b * b)


class TestScalarMul:
    def test_zero(self, e26):
        assert scalar_mul(e26.curve, 0, e26.points[1]) == INFINITY

    def test_two_is_double(self, e26):
        for P in e26.points:
            assert scalar_mul(e26.curve, 2, P) == double(e26.curve, P)

    def test_negative(self, e26):
        P = e26.points[2]
        assert scalar_mul(e26.curve, -5, P) == negate(e26.curve, scalar_mul(e26.curve, 5, P))

    def test_four_p1_closed_form(self, e12):
        R = scalar_mul(e12.curve, 4, e12.points[0])
        assert R.x == to_rational(x4_sixth_closed_form(1, 2))
        assert format_rational(R.x) == "-4294836223/1099444519936"
        assert R == double(e12.curve, double(e12.curve, e12.points[0]))


class TestXOfDouble:
    def test_sixth_closed_forms(self, e12):
        c = e12.curve
        assert x_of_double(c, 0) == mpq(1, 256)
        assert x_of_double(c, mpq(1, 256)) == to_rational(x4_sixth_closed_form(1, 2))

    def test_two_torsion_abscissa(self):
        with pytest.raises(TwoTorsionX):
            x_of_double(make_curve(-1, 0), 1)
        with pytest.raises(TwoTorsionX):
            x_of_double(make_curve(0, 1), -1)


def test_format_rational():
    assert format_rational(mpq(-3, 6)) == "-1/2"
    assert format_rational(5) == "5/1"
    assert format_rational(Fraction(2, -4)) == "-1/2"


coeff = st.tuples(*[st.integers(-2, 2)] * 3)


@settings(max_examples=60, deadline=None)
@given(coeff, coeff)
def test_closure_commutativity_reduced(u, v):
    inst = build_square(26, 15)
    c = inst.curve
    P, Q = combo(inst, u), combo(inst, v)
    R = add(c, P, Q)
    assert contains(c, R)
    assert R == add(c, Q, P)
    if not R.is_identity:
        assert reduced(R.x) and reduced(R.y)


@settings(max_examples=30, deadline=None)
@given(coeff, coeff, coeff)
def test_associativity(u, v, w):
    inst = build_sixth(1, 2)
    c = inst.curve
    P, Q, R = combo(inst, u), combo(inst, v), combo(inst, w)
    assert add(c, add(c, P, Q), R) == add(c, P, add(c, Q, R))


@settings(max_examples=40, deadline=None)
@given(coeff)
def test_duplication_consistency(u):
    inst = build_sixth(1, 2)
    c = inst.curve
    P = combo(inst, u)
    if P.is_identity or P.y == 0:
        return
    assert x_of_double(c, P.x) == double(c, P).x


@settings(max_examples=40, deadline=None)
@given(st.integers(-8, 8), st.integers(-8, 8), st.sampled_from([0, 1, 2]))
def test_scalar_consistency(m, n, i):
    inst = build_square(26, 15)
    c, P = inst.curve, inst.points[i]
    assert scalar_mul(c, m + n, P) == add(c, scalar_mul(c, m, P), scalar_mul(c, n, P))
