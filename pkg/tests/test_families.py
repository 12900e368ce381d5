import random
from fractions import Fraction

import pytest

from ecdescent import curves, families, polys
from ecdescent.curves import ShortWeierstrass
from ecdescent.errors import DomainError, SingularCurve
from ecdescent.families import E2Param


def test_e2_param_validation():
    with pytest.raises(SingularCurve):
        E2Param(0, 0)
    with pytest.raises(SingularCurve):
        E2Param(2, 1)  # a^2 - 4b = 0
    assert E2Param(0, -1).disc_quadratic == 4


def test_e2_curve_examples():
    model, dual = families.e2_curve(E2Param(0, -1))
    assert model == ShortWeierstrass(-1, 0)  # y^2 = x^3 - x
    assert (dual.a, dual.b) == (0, 4)

    model, dual = families.e2_curve(E2Param(3, 3))
    assert model == ShortWeierstrass(0, -1)  # shift of y^2 = x^3 - 1
    assert (dual.a, dual.b) == (-6, -3)

    _, dual = families.e2_curve(E2Param(0, 4))
    assert (dual.a, dual.b) == (0, -16)


def test_e2_curve_dual_of_dual_is_isomorphic():
    # duality squares to multiplication by 2: E'' is E scaled by u = 2
    p = E2Param(3, -5)
    model, dual = families.e2_curve(p)
    model2, _ = families.e2_curve(families.e2_curve(dual)[1])
    assert model2 == model


def test_e2_height():
    assert families.e2_height_leq(E2Param(2, 4), 2)
    assert not families.e2_height_leq(E2Param(3, 1), 2)
    assert families.e2_height_leq(E2Param(0, 9), 3)


def test_e2_from_torsion():
    assert families.e2_from_torsion(1, 1) == ShortWeierstrass(1, 2)
    assert families.e2_from_torsion(0, 1) == ShortWeierstrass(0, 1)
    assert families.e2_from_torsion(-1, 0) == ShortWeierstrass(-1, 0)
    # x = -b is always a rational 2-torsion root
    rng = random.Random(1)
    for _ in range(100):
        a, b = rng.randrange(-15, 16), rng.randrange(-15, 16)
        try:
            E = families.e2_from_torsion(a, b)
        except SingularCurve:
            continue
        assert (-b) ** 3 + E.A * (-b) + E.B == 0
        assert curves.torsion_order_present(E, 2)


def test_e3_from_torsion():
    assert families.e3_from_torsion(0, 3) == ShortWeierstrass(0, 9)
    assert families.e3_from_torsion(1, 1) == ShortWeierstrass(33, -26)
    assert families.e3_from_torsion(1, 2) == ShortWeierstrass(39, -23)
    rng = random.Random(2)
    for _ in range(60):
        a, b = rng.randrange(-6, 7), rng.randrange(-12, 13)
        try:
            E = families.e3_from_torsion(a, b)
        except SingularCurve:
            continue
        assert curves.torsion_order_present(E, 3)


def test_type1():
    E, dual, member = families.type1(1)
    assert member == {"e2", "e3"}
    assert dual == ShortWeierstrass(0, -27)
    _, _, member = families.type1(4)
    assert member == {"e3"}
    E, dual, member = families.type1(8)
    assert member == {"e2"}
    assert dual == ShortWeierstrass(0, -216)
    _, _, member = families.type1(-8)
    assert member == {"e2"}  # -8 = (-2)^3
    _, _, member = families.type1(5)
    assert member == set()
    with pytest.raises(DomainError):
        families.type1(0)


def test_tate_normal():
    assert curves.invariants(families.tate_normal(1, 1)).delta == -11
    assert curves.invariants(families.tate_normal(2, 2)).delta == -608
    with pytest.raises(SingularCurve):
        families.tate_normal(0, 5)


def test_e5_e7_singular_parameters():
    with pytest.raises(SingularCurve):
        families.e5_curve(0)
    with pytest.raises(SingularCurve):
        families.e7_curve(1)
    with pytest.raises(SingularCurve):
        families.e7_curve(0)


def test_e7_discriminant_examples():
    assert curves.invariants(families.e7_curve(2)).delta == -1664
    assert curves.invariants(families.e7_curve(3)).delta == -8118144


def test_delta_identities_over_integers():
    d5 = families.delta5_poly()
    d7 = families.delta7_poly()
    for t in range(-25, 26):
        if t != 0:
            assert curves.invariants(families.e5_curve(t)).delta == polys.evaluate(d5, t)
        if t not in (0, 1):
            assert curves.invariants(families.e7_curve(t)).delta == polys.evaluate(d7, t)


def test_torsion_presence_on_tate_fibers():
    rng = random.Random(3)
    for _ in range(25):
        num = rng.randrange(-9, 10)
        den = rng.randrange(1, 7)
        t = Fraction(num, den)
        try:
            E5 = curves.short_model(families.e5_curve(t))
            assert curves.torsion_order_present(E5, 5)
        except SingularCurve:
            pass
        try:
            E7 = curves.short_model(families.e7_curve(t))
            assert curves.torsion_order_present(E7, 7)
        except SingularCurve:
            pass


def test_e3_polynomials_exact():
    f3, g3, d3 = families.e3_polynomials()
    assert f3 == [-27, 162]
    assert g3 == [54, 486, 729]
    assert polys.evaluate(f3, 0) == -27
    assert polys.evaluate(g3, 0) == 54
    # ascending coefficients for degrees 0..4
    assert d3 == [-157464, 0, -17006112, -2125764, -14348907]


def test_twist_e0():
    E, cls = families.twist_e0(5)
    assert E == ShortWeierstrass(0, -125)
    assert cls == families.COND_I
    assert families.twist_e0(55)[1] == families.COND_II
    assert families.twist_e0(2)[1] == families.UNCLASSIFIED
    assert families.twist_e0(1)[1] == families.COND_I  # vacuous
    assert families.twist_e0(11)[1] == families.COND_II  # single 3 mod 4 prime
    assert families.twist_e0(11, single_prime_cond2=False)[1] == families.UNCLASSIFIED
    with pytest.raises(DomainError):
        families.twist_e0(12)
    with pytest.raises(DomainError):
        families.twist_e0(0)


def test_twist_e0_large_omega():
    primes_1mod12 = [13, 37, 61, 73, 97, 109, 157, 181, 193, 229, 241]
    D = 1
    for p in primes_1mod12:
        D *= p
    assert families.twist_e0(D)[1] == families.LARGE_OMEGA
    assert families.twist_e0(D, nu2_manin=1)[1] == families.UNCLASSIFIED


def test_twist_two_torsion_shape():
    for D in (2, 3, 5, 7, 11, 13, -2, -5, 15, 21):
        E, _ = families.twist_e0(D)
        assert curves.two_torsion_shape(E) == curves.Z2


def test_param_box():
    assert families.param_box(3) == families.ParamBox(3, Fraction(3, 2), Fraction(1, 2))
    assert families.param_box(5) == families.ParamBox(5, Fraction(1, 2), Fraction(1, 2))
    assert families.param_box(7) == families.ParamBox(7, Fraction(1, 4), Fraction(1, 4))
    assert families.param_box(5).m + families.param_box(5).n == 1
    assert families.param_box(7).m + families.param_box(7).n == Fraction(1, 2)
    with pytest.raises(DomainError):
        families.param_box(11)
