import random
from fractions import Fraction

import pytest

from ecdescent import polys
from ecdescent.errors import DomainError


def test_mul_add_roundtrip():
    f = [1, 2, 3]
    g = [4, 0, -1]
    assert polys.mul(f, g) == [4, 8, 11, -2, -3]
    assert polys.add(polys.sub(f, g), g) == f


def test_evaluate_matches_homogeneous():
    f = [-1, -11, 1]
    assert polys.evaluate(f, 3) == 9 - 33 - 1
    assert polys.homogeneous_value(f, 3, 2) == 4 * (Fraction(9, 4) - Fraction(33, 2) - 1)
    assert polys.homogeneous_value(f, 3, 1) == polys.evaluate(f, 3)


def test_rational_roots_constructed():
    from math import gcd

    rng = random.Random(99)
    for _ in range(40):
        roots = set()
        f = [rng.choice((1, 2, 3, 5))]
        for _ in range(rng.randrange(1, 4)):
            num = rng.randrange(-12, 13)
            den = rng.choice((1, 2, 3))
            g = gcd(abs(num), den)
            num, den = num // g, den // g
            f = polys.mul(f, [-num, den])
            roots.add(Fraction(num, den))
        if rng.random() < 0.5:
            f = polys.mul(f, [1, 0, 1])  # irrational quadratic factor
        assert set(polys.rational_roots(f)) == roots


def test_rational_roots_exact_sets():
    assert polys.rational_roots([0, -1, 0, 1]) == [-1, 0, 1]
    assert polys.rational_roots([1, -5, 6]) == [Fraction(1, 3), Fraction(1, 2)]
    assert polys.rational_roots([1, 0, 1]) == []
    # repeated factors
    f = polys.mul(polys.mul([-3, 1], [-3, 1]), [5, 2])
    assert polys.rational_roots(f) == [Fraction(-5, 2), 3]


def test_rational_roots_huge_coefficients():
    big = 10**30
    f = polys.mul([-big, 1], [1, 7])
    assert polys.rational_roots(f) == [Fraction(-1, 7), big]


def test_roots_mod_p():
    assert polys.roots_mod_p([-1, 0, 1], 7) == [1, 6]
    assert polys.roots_mod_p([1, 0, 1], 7) == []


def test_resultant_known_values():
    f = [-1, -11, 1]
    assert polys.resultant(f, polys.derivative(f)) == -125
    g = [1, 5, -8, 1]
    assert polys.resultant(g, polys.derivative(g)) == -2401
    # Res(x - a, x - b) = b - a... via definition lc^.. (a - b): check sign convention
    assert abs(polys.resultant([-2, 1], [-5, 1])) == 3
    # common factor gives 0
    assert polys.resultant([0, 1], [0, 0, 1]) == 0


def test_resultant_multiplicative_in_first_argument():
    rng = random.Random(5)
    for _ in range(20):
        f = [rng.randrange(-5, 6) for _ in range(3)] + [rng.choice((1, 2))]
        g = [rng.randrange(-5, 6) for _ in range(2)] + [rng.choice((1, 3))]
        h = [rng.randrange(-5, 6), rng.choice((1, 2))]
        lhs = polys.resultant(polys.mul(f, h), g)
        rhs = polys.resultant(f, g) * polys.resultant(h, g)
        assert lhs == rhs


def test_zero_polynomial_rejected():
    with pytest.raises(DomainError):
        polys.rational_roots([0, 0])
