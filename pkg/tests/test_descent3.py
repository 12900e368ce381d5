import pytest

from ecdescent import descent3
from ecdescent.arith import is_squarefree
from ecdescent.errors import DomainError


def test_s_set():
    assert descent3.s_set(196).primes == (2, 3, 7)  # 196 = 2^2 7^2, (-3/7) = 1
    assert descent3.s_set(1).primes == (2, 3)
    assert descent3.s_set(-1).primes == (2, 3)
    # nu_p = 2 but (-3/p) = -1 keeps p out: p = 5
    assert descent3.s_set(25).primes == (2, 3)
    # nu_p = 6 keeps p out even with (-3/p) = 1
    assert descent3.s_set(7**6).primes == (2, 3)
    with pytest.raises(DomainError):
        descent3.s_set(0)


def test_s_set_isogeny_invariance():
    for a in range(1, 51):
        for s in (a, -a):
            assert len(descent3.s_set(s).primes) == len(descent3.s_set(-27 * s).primes)


def test_reduced_forms_and_class_numbers():
    # classical class numbers for small discriminants
    known = {-3: 1, -4: 1, -7: 1, -8: 1, -11: 1, -15: 2, -20: 2, -23: 3,
             -24: 2, -31: 3, -47: 5, -71: 7, -84: 4, -95: 8}
    for D, h in known.items():
        assert descent3.class_number(D) == h, D


def test_r3_imaginary():
    assert descent3.r3_imaginary(-4) == 0
    assert descent3.r3_imaginary(-3) == 0
    assert descent3.r3_imaginary(-23) == 1
    assert descent3.r3_imaginary(-31) == 1
    assert descent3.r3_imaginary(-47) == 0  # h = 5
    # first discriminant of 3-rank 2
    assert descent3.r3_imaginary(-3299) == 2
    with pytest.raises(DomainError):
        descent3.r3_imaginary(-5)  # not a discriminant
    with pytest.raises(DomainError):
        descent3.r3_imaginary(4)


def test_three_torsion_divides_class_number():
    for D in (-23, -31, -84, -120, -231, -255, -452, -999):
        if D % 4 not in (0, 1):
            continue
        h = descent3.class_number(D)
        assert h % 3 ** descent3.r3_imaginary(D) == 0


def test_composition_group_axioms():
    for D in (-23, -84, -104, -231):
        forms = descent3.reduced_forms(D)
        ident = descent3.identity_form(D)
        assert ident in forms
        for f in forms:
            assert descent3.compose(ident, f, D) == f
            # inverse: (a, -b, c) reduced
            inv = descent3.reduce_form(f[0], -f[1], f[2])
            assert descent3.compose(f, inv, D) == ident
            sq = descent3.compose(f, f, D)
            cube = descent3.compose(sq, f, D)
            assert cube == descent3.compose(f, sq, D)  # associativity smoke test


def test_class_bound():
    assert descent3.class_bound(1) == descent3.ClassGroup3(1, 0, "rational-trivial")
    assert descent3.class_bound(4) == descent3.ClassGroup3(1, 0, "rational-trivial")
    assert descent3.class_bound(-3) == descent3.ClassGroup3(-3, 0, "exact-imaginary")
    cb = descent3.class_bound(79)
    assert cb.method == "scholz-bound"
    assert cb.field_kernel == 79
    # the partner is Q(sqrt(-237)): an exact upper bound for r3(Q(sqrt(79)))
    assert cb.r3 == descent3.r3_imaginary(descent3.fundamental_discriminant(-237))
    with pytest.raises(DomainError):
        descent3.class_bound(0)


def test_unit_3dim():
    assert descent3.unit_3dim(-1) == 0
    assert descent3.unit_3dim(-3) == 1
    assert descent3.unit_3dim(5) == 1
    assert descent3.unit_3dim(1) == 0
    assert descent3.unit_3dim(8) == 1  # kernel 2, real
    assert descent3.unit_3dim(-12) == 1  # kernel -3


def test_fundamental_discriminant():
    assert descent3.fundamental_discriminant(-3) == -3
    assert descent3.fundamental_discriminant(-1) == -4
    assert descent3.fundamental_discriminant(5) == 5
    assert descent3.fundamental_discriminant(2) == 8
    assert descent3.fundamental_discriminant(-6) == -24


def test_rank_upper_type1_a1():
    bound, comp = descent3.rank_upper_type1(1)
    assert bound == 5
    assert comp.class_a.field_kernel == -3 and comp.class_a.r3 == 0
    assert comp.unit_a == 1
    assert comp.class_m27a.field_kernel == 1 and comp.unit_m27a == 0
    assert comp.s_a == 2 and comp.s_m27a == 2
    with pytest.raises(DomainError):
        descent3.rank_upper_type1(0)


def test_rank_upper_type1_components_are_bounds():
    for a in (2, -2, 5, 12, 100, -45):
        bound, comp = descent3.rank_upper_type1(a)
        assert bound == (comp.class_a.r3 + comp.unit_a + comp.class_m27a.r3
                         + comp.unit_m27a + comp.s_a + comp.s_m27a)
        assert bound >= 0


def test_square_family_class_unit_constancy():
    values = set()
    for n in range(1, 80):
        if not is_squarefree(n) or n % 3 == 0:
            continue
        _, comp = descent3.rank_upper_type1(n * n)
        values.add(comp.class_unit_total)
    assert values == {1}


def test_fixed_k_square_family_takes_few_values():
    # for a = k n^2 the two quadratic fields depend only on k
    for k in (2, 5, -7):
        values = set()
        for n in range(1, 40):
            if not is_squarefree(n) or n % 3 == 0 or n % (3 * abs(k)) == 0:
                continue
            from math import gcd

            if gcd(n, 3 * abs(k)) != 1:
                continue
            _, comp = descent3.rank_upper_type1(k * n * n)
            values.add(comp.class_unit_total)
        assert len(values) <= 2, (k, values)
