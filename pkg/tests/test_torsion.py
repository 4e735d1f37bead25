from math import isqrt

import pytest
from gmpy2 import mpq

from oracles import brute_count
from rank3.curve import INFINITY, Point, make_curve, scalar_mul
from rank3.errors import BadReduction, EvenPrime
from rank3.families import build_square
from rank3.pell import admissible_stream
from rank3.torsion import (
    count_points_mod_p,
    factorize,
    good_primes,
    integer_roots_depressed_cubic,
    theorem1_hypotheses,
    torsion_order_bound,
    torsion_subgroup,
    two_torsion,
)

E26 = make_curve(-676, 225)


class TestTwoTorsion:
    def test_full(self):
        pts = two_torsion(make_curve(-1, 0))
        assert sorted(P.x for P in pts) == [-1, 0, 1]

    def test_none_on_family(self):
        assert two_torsion(E26) == []

    def test_single(self):
        assert two_torsion(make_curve(0, 1)) == [Point(mpq(-1), mpq(0))]


@pytest.mark.parametrize(
    "A,C", [(-1, 0), (0, 1), (-7, 6), (-676, 225), (-12, 16), (5, -6), (-10**12, 0), (3, 0)]
)
def test_integer_roots_against_scan(A, C):
    R = 1 + max(abs(A), abs(C))
    if R < 10**5:
        expected = [x for x in range(-R, R + 1) if x**3 + A * x + C == 0]
    else:
        expected = [0] + [s * isqrt(-A) for s in (-1, 1) if isqrt(-A) ** 2 == -A]
    assert integer_roots_depressed_cubic(A, C) == sorted(expected)


class TestPointCount:
    def test_against_brute_force(self):
        for A, B in [(-1, 0), (-676, 225), (-1, 64), (2, 3)]:
            c = make_curve(A, B)
            for p in good_primes(c, 8):
                assert count_points_mod_p(c, p) == brute_count(A, B, p)

    def test_y2_x3_minus_x_mod_5(self):
        assert count_points_mod_p(make_curve(-1, 0), 5) == 8 == brute_count(-1, 0, 5)

    def test_family_mod_3(self):
        assert E26.discriminant % 3 != 0
        assert count_points_mod_p(E26, 3) == 4

    def test_errors(self):
        with pytest.raises(EvenPrime):
            count_points_mod_p(E26, 2)
        with pytest.raises(ValueError):
            count_points_mod_p(E26, 9)

    def test_hasse(self):
        for A, B in [(-676, 225), (-1, 64), (-1, 0)]:
            c = make_curve(A, B)
            for p in good_primes(c, 10):
                n = count_points_mod_p(c, p)
                assert (n - p - 1) ** 2 <= 4 * p


def test_bad_reduction():
    c5 = make_curve(0, 5)  # discriminant -16 * 27 * 25
    with pytest.raises(BadReduction):
        count_points_mod_p(c5, 5)
    with pytest.raises(BadReduction):
        torsion_order_bound(c5, [5, 7])


class TestBound:
    def test_gcd(self):
        assert torsion_order_bound(E26, good_primes(E26)) == 1

    def test_single_prime(self):
        assert torsion_order_bound(E26, [3]) == 4


class TestSubgroup:
    def test_trivial_family_seed(self):
        T = torsion_subgroup(E26)
        assert T.order == 1 and T.points == (INFINITY,)

    def test_full_two_torsion(self):
        T = torsion_subgroup(make_curve(-1, 0))
        assert T.order == 4
        assert set(T.points) == {INFINITY} | {Point(mpq(n), mpq(0)) for n in (0, 1, -1)}
        assert T.method == "lutz-nagell"

    @pytest.mark.parametrize(
        "A,B,order",
        [
            (0, 1, 6),  # y^2 = x^3 + 1
            (-2, 1, 4),  # 2*(0, 1) = (1, 0)
            (0, -432, 3),  # y^2 = x^3 - 432, points (12, +-36)
            (-43, 166, 7),  # order 7, generated by (3, 8)
            (0, 2, 1),
        ],
    )
    def test_known_groups(self, A, B, order):
        c = make_curve(A, B)
        T = torsion_subgroup(c)
        assert T.order == order
        for P in T.points:
            assert scalar_mul(c, T.order, P) == INFINITY
        assert torsion_order_bound(c, good_primes(c)) % T.order == 0

    def test_pell_pairs(self):
        for p in admissible_stream(10):
            inst = build_square(p.a, p.b)
            assert theorem1_hypotheses(p.a, p.b)
            assert count_points_mod_p(inst.curve, 3) == 4
            assert torsion_subgroup(inst.curve).order == 1

    def test_combined_branch(self):
        # only p = 3 in the window: bound 4, no 2-torsion, so trivial
        T = torsion_subgroup(E26, primes=[3])
        assert T.order == 1 and T.method == "combined"


@pytest.mark.parametrize("a,b,expected", [(26, 15, True), (4, 3, False), (2, 9, True), (2, 1, False), (3, 9, False)])
def test_theorem1_hypotheses(a, b, expected):
    assert theorem1_hypotheses(a, b) is expected


def test_factorize():
    n = 2**5 * 3 * 1000003 * 1000033 * 998244353
    f = factorize(n)
    assert dict(f) == {2: 5, 3: 1, 1000003: 1, 1000033: 1, 998244353: 1}
    assert factorize(1) == {}
