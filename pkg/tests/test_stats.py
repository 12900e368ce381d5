import random
from decimal import Decimal
from fractions import Fraction
from math import gcd, isqrt

import pytest

from ecdescent import curves, descent2, families, polys, stats
from ecdescent.curves import ShortWeierstrass
from ecdescent.errors import DomainError
from ecdescent.families import E2Param


def oracle_count_r2(X):
    total = 0
    for a in range(-(X * X) + 1, X * X):
        for b in range(-(isqrt(abs(a)) + 2 * X + 4), isqrt(abs(a)) + 2 * X + 5):
            if abs(b**3 + a * b) < X**3:
                total += 1
    return total


def oracle_count_r3(X):
    total = 0
    amax = int(1.5 * X**0.5) + 4
    for a in range(-amax, amax + 1):
        bmax = isqrt(X**3 + 27 * a**6) + 2
        for b in range(-bmax, bmax + 1):
            if abs(6 * a * b + 27 * a**4) < X * X and abs(b * b - 27 * a**6) < X**3:
                total += 1
    return total


def test_count_r2_small():
    assert stats.count_r2(1) == 1
    for X in range(2, 21, 3):
        assert stats.count_r2(X) == oracle_count_r2(X), X


def test_count_r3_small():
    # X = 40 exercises the linear-term cancellation region |a| ~ 0.8 sqrt(X)
    for X in list(range(1, 21, 3)) + [20, 40]:
        assert stats.count_r3(X) == oracle_count_r3(X), X


def test_volume_constant():
    vc = stats.volume_constant(25)
    assert abs(vc.alpha_minus - Decimal("1.3247179572447460259609088")) < Decimal("1e-24")
    assert abs(vc.alpha_plus - Decimal("0.6823278038280193273694837")) < Decimal("1e-24")
    assert vc.value.quantize(Decimal("1.0000")) == Decimal("4.0030")
    # defining equations hold to precision
    for root, sgn in ((vc.alpha_plus, 1), (vc.alpha_minus, -1)):
        assert abs(root**3 + sgn * root - 1) < Decimal("1e-20")
    with pytest.raises(DomainError):
        stats.volume_constant(5)


def test_count_r2_tracks_volume():
    vc = stats.volume_constant(15)
    ratio = stats.count_r2(60) / 60**3
    assert abs(ratio - float(vc.value)) / float(vc.value) < 0.05


def test_slope():
    assert abs(stats.slope([(10, 1000), (20, 8000), (40, 64000)]) - 3) < 1e-9
    assert abs(stats.slope([(10, 10), (20, 20), (40, 40), (80, 80)]) - 1) < 1e-9
    rng = random.Random(4)
    pts = [(X, int(X**3 * rng.uniform(0.95, 1.05))) for X in (50, 100, 200, 400)]
    assert abs(stats.slope(pts) - 3) < 0.1
    with pytest.raises(DomainError):
        stats.slope([(10, 5), (20, 9)])
    with pytest.raises(DomainError):
        stats.slope([(10, 0), (20, 9), (40, 17)])


def test_count_family_monotone_and_positive():
    c50 = stats.count_family(5, 50)
    c100 = stats.count_family(5, 100)
    assert 0 < c50 <= c100
    assert stats.count_family(7, 200) <= stats.count_family(5, 200)
    with pytest.raises(DomainError):
        stats.count_family(3, 50)


def test_count_family_contains_integer_parameters():
    # every integer t with a small enough fiber is counted
    X = 60
    count = stats.count_family(5, X)
    direct = set()
    for t in range(-10, 11):
        if t == 0:
            continue
        E = curves.short_model(families.e5_curve(t))
        if curves.height_leq(E, X):
            direct.add((E.A, E.B))
    assert count >= len(direct)


def test_roots_mod_examples():
    assert stats.roots_mod([-1, -11, 1], 3) == 0
    assert stats.roots_mod([0, 1], 5, square=True) == 1
    assert stats.roots_mod([-1, -11, 1], 5) == 1  # t = 3 mod 5 (double root)


def oracle_roots_mod_square(f, p):
    return sum(1 for r in range(p * p) if polys.evaluate_mod(f, r, p * p) == 0)


def test_roots_mod_square_oracle():
    rng = random.Random(10)
    for _ in range(50):
        f = polys.normalize([rng.randrange(-9, 10) for _ in range(rng.randrange(2, 6))])
        if len(f) < 2:
            continue
        for p in (2, 3, 5, 7, 11):
            assert stats.roots_mod(f, p, square=True) == oracle_roots_mod_square(f, p), (f, p)


def test_roots_mod_bound_fails_only_at_resultant_primes():
    """The 2 deg(f) bound for rho_f(p^2) requires p coprime to Res(f, f');
    the content-gcd condition alone admits counterexamples."""
    f = [-1, -11, 1]
    assert gcd(polys.content(f), polys.content(polys.derivative(f))) == 1
    assert polys.resultant(f, polys.derivative(f)) % 5 == 0
    assert stats.roots_mod(f, 5, square=True) == 5  # exceeds 2 deg(f) = 4

    g = [1, 5, -8, 1]
    assert gcd(polys.content(g), polys.content(polys.derivative(g))) == 1
    assert polys.resultant(g, polys.derivative(g)) % 7 == 0
    assert stats.roots_mod(g, 7, square=True) == 7  # exceeds 2 deg(g) = 6


def test_roots_mod_bound_away_from_resultant():
    from ecdescent.arith import primes_up_to

    for f in ([-1, -11, 1], [1, 5, -8, 1]):
        res = polys.resultant(f, polys.derivative(f))
        deg = polys.degree(f)
        for p in primes_up_to(300):
            if res % p == 0:
                continue
            assert stats.roots_mod(f, p, square=True) <= 2 * deg, (f, p)


def test_is_irreducible():
    assert stats.is_irreducible([-1, -11, 1])
    assert stats.is_irreducible([1, 5, -8, 1])
    assert stats.is_irreducible([0, 1])
    assert stats.is_irreducible([1, 0, 0, 0, 1])  # x^4 + 1
    assert not stats.is_irreducible([-1, 0, 1])
    assert not stats.is_irreducible([1, 2, 1])
    assert not stats.is_irreducible([1, 0, 2, 0, 1])  # (x^2 + 1)^2
    assert not stats.is_irreducible([4, 0, 0, 0, 1])  # (x^2-2x+2)(x^2+2x+2)
    assert not stats.is_irreducible([2])
    f3, g3, d3 = families.e3_polynomials()
    assert stats.is_irreducible(d3)


def test_normal_order_experiment():
    ns = stats.normal_order_experiment([0, 1], 30)
    # reduced pairs b in [1, 30], |a| <= 30, minus a = 0 (f vanishes)
    count = sum(1 for b in range(1, 31) for a in range(-30, 31)
                if gcd(a, b) == 1 and a != 0)
    assert ns.sample_count == count
    assert ns.variance >= 0
    assert 0 < ns.mean < 4

    with pytest.raises(DomainError):
        stats.normal_order_experiment([-1, 0, 1], 50)  # reducible
    with pytest.raises(DomainError):
        stats.normal_order_experiment([0, 1], 5)  # X too small


def test_normal_order_excluded_primes():
    full = stats.normal_order_experiment([-1, -11, 1], 20)
    reduced = stats.normal_order_experiment([-1, -11, 1], 20, S=(2, 3, 5))
    assert reduced.mean <= full.mean
    assert reduced.sample_count == full.sample_count


def test_normal_order_mean_growth():
    means = [float(stats.normal_order_experiment([0, 1], X).mean)
             for X in (100, 200, 400)]
    assert means[1] >= means[0] - 0.3
    assert means[2] >= means[1] - 0.3


def test_average_trace_constant_family():
    for p in (5, 7, 11, 13):
        got = stats.average_trace([0], [1], p)
        assert got == curves.frobenius_trace(ShortWeierstrass(0, 1), p)


def test_avg_frobenius_bound():
    bound5 = stats.family_trace_bound("e5")
    assert bound5 == 3 * 7 + 4 - 2
    for p in (5, 7, 11, 17, 31):
        v = stats.avg_frobenius("e5", p)
        assert abs(v) <= bound5
        w = stats.avg_frobenius("e7", p)
        assert abs(w) <= stats.family_trace_bound("e7")
        u = stats.avg_frobenius("e3poly", p)
        assert abs(u) <= stats.family_trace_bound("e3poly")
    with pytest.raises(DomainError):
        stats.avg_frobenius("e5", 3)


def test_avg_frobenius_matches_direct_fiber_sum():
    """Independent oracle: good fibers by brute-force point count, singular
    fibers by the smooth-locus group order (p - a_p nonsingular points)."""
    p = 13
    A_poly, B_poly = stats._tate_short_polys(5)
    delta5 = families.delta5_poly()
    total = 0
    for r in range(p):
        A = polys.evaluate_mod(A_poly, r, p)
        B = polys.evaluate_mod(B_poly, r, p)
        singular_xy = None
        affine = 0
        for x in range(p):
            fx = (x**3 + A * x + B) % p
            for y in range(p):
                if (y * y - fx) % p == 0:
                    affine += 1
                    if (3 * x * x + A) % p == 0 and y == 0 and fx == 0:
                        singular_xy = (x, y)
        if polys.evaluate_mod(delta5, r, p) != 0:
            ap = p + 1 - (affine + 1)
            assert singular_xy is None
        else:
            # smooth locus: affine minus singular point plus infinity,
            # and #E_ns(F_p) = p - a_p
            assert singular_xy is not None
            ap = p - affine
            assert ap in (-1, 0, 1)
        total += ap
    assert stats.avg_frobenius("e5", p) == Fraction(total, p)


def test_certificate_density():
    certified, total = stats.certificate_density(10)
    assert certified / total > 0.5
    assert total > 2000


def test_certificate_soundness_exhaustive_small():
    """Every certified pair passes the full-descent rank bound check."""
    X = 5
    for a in range(-X, X + 1):
        for b in range(-X * X, X * X + 1):
            if b == 0 or gcd(a, b) != 1:
                continue
            n = a * a - 4 * b
            from ecdescent.arith import is_square

            if n == 0 or is_square(n):
                continue
            if not stats.has_insolubility_certificate(a, b):
                continue
            param = E2Param(a, b)
            est = descent2.rank_upper(param)
            model, _ = families.e2_curve(param)
            omega_n, _ = curves.conductor_support(model)
            assert est.rank_upper <= omega_n - 2, (a, b)


def test_square_discriminant_pairs_are_rare():
    X = 50
    squares = 0
    total = 0
    from ecdescent.arith import is_square

    for a in range(-X, X + 1):
        for b in range(-X * X, X * X + 1):
            if b * (a * a - 4 * b) == 0:
                continue
            total += 1
            if is_square(a * a - 4 * b):
                squares += 1
    assert squares / total < 0.05
