"""Counting and statistics harness.

Exact lattice counts for the torsion-family regions, the lattice-volume
constant from the roots of x^3 +- x - 1, log-log slope estimation, root
counts mod p and p^2, normal-order experiments for the number of prime
factors of square-free parts of polynomial values, averaged Frobenius
traces over family fibers, and the local-insolubility certificate density.
"""

from dataclasses import dataclass
from decimal import Decimal, getcontext
from fractions import Fraction
from math import gcd, isqrt, log

from . import curves, families, polys
from .arith import factor, is_square, legendre, primes_up_to
from .errors import DomainError

SAFETY_BOX_FACTOR = 4


@dataclass(frozen=True)
class CountSeries:
    family: str
    points: tuple  # ((X, count), ...)


@dataclass(frozen=True)
class NormalOrderSample:
    X: int
    mean: Fraction
    variance: Fraction
    sample_count: int


@dataclass(frozen=True)
class VolumeConstant:
    alpha_plus: Decimal
    alpha_minus: Decimal
    value: Decimal


def count_r2(X):
    """Exact number of integer pairs with |a| < X^2 and |b^3 + ab| < X^3."""
    if X < 1:
        raise DomainError("X must be >= 1")
    cube = X**3
    total = 0
    for a in range(-(X * X) + 1, X * X):
        bmax = isqrt(abs(a)) + X + 2
        row = 0
        for b in range(1, bmax + 1):
            if abs(b * (b * b + a)) < cube:
                row += 1
        total += 2 * row + 1  # b and -b give the same |value|; b = 0 always counts
    return total


def count_r3(X):
    """Exact number of integer pairs with |6ab + 27a^4| < X^2 and |b^2 - 27a^6| < X^3."""
    if X < 1:
        raise DomainError("X must be >= 1")
    sq, cube = X * X, X**3
    total = 2 * isqrt(cube - 1) + 1  # a = 0 row: b^2 < X^3
    # the two b-intervals are disjoint once 6.75 a^6 > X^3 + 1.5 a^2 X^2,
    # i.e. beyond |a| of order 0.8 sqrt(X)
    amax = int(1.5 * X**0.5) + 3
    for a in range(-amax, amax + 1):
        if a == 0:
            continue
        # strict linear window: lo_num < 6a*b < hi_num
        lo_num, hi_num = -sq - 27 * a**4, sq - 27 * a**4
        den = 6 * a
        if den < 0:
            lo_num, hi_num, den = -hi_num, -lo_num, -den
        blo = lo_num // den + 1  # least integer strictly above lo_num/den
        bhi = -((-hi_num) // den) - 1  # greatest integer strictly below hi_num/den
        if blo > bhi:
            continue
        # strict quadratic window: 27a^6 - X^3 < b^2 < 27a^6 + X^3
        low2 = 27 * a**6 - cube
        r_hi = isqrt(27 * a**6 + cube - 1)
        if low2 >= 0:
            r_lo = isqrt(low2) + 1
            intervals = ((-r_hi, -r_lo), (r_lo, r_hi))
        else:
            intervals = ((-r_hi, r_hi),)
        for lo, hi in intervals:
            lo2, hi2 = max(lo, blo), min(hi, bhi)
            if lo2 <= hi2:
                total += hi2 - lo2 + 1
    return total


def _decimal_root(c1, precision):
    """Unique real root of x^3 + c1*x - 1 by Newton iteration, certified by sign."""
    getcontext().prec = precision + 15
    x = Decimal(1)
    for _ in range(200):
        fx = x**3 + c1 * x - 1
        dfx = 3 * x * x + c1
        step = fx / dfx
        x -= step
        if abs(step) < Decimal(10) ** (-(precision + 5)):
            break
    eps = Decimal(10) ** (-precision)
    f = lambda t: t**3 + c1 * t - 1
    assert f(x - eps) * f(x + eps) < 0, "root not certified within interval"
    return x


def volume_constant(precision=30):
    """Vol of the ambient 2-torsion region at X = 1.

    2 log(alpha_minus / alpha_plus) + (4/3)(alpha_plus + alpha_minus), where
    alpha_plus, alpha_minus are the real roots of x^3 + x - 1 and x^3 - x - 1.
    """
    if precision < 10:
        raise DomainError("precision must be >= 10")
    a_plus = _decimal_root(Decimal(1), precision)
    a_minus = _decimal_root(Decimal(-1), precision)
    value = 2 * (a_minus / a_plus).ln() + Decimal(4) / Decimal(3) * (a_plus + a_minus)
    q = Decimal(10) ** (-precision)
    return VolumeConstant(a_plus.quantize(q), a_minus.quantize(q), value.quantize(q))


def slope(series):
    """Least-squares slope of log(count) against log(X)."""
    pts = series.points if isinstance(series, CountSeries) else tuple(series)
    if len(pts) < 3:
        raise DomainError("need at least 3 points")
    if any(c <= 0 for _, c in pts):
        raise DomainError("counts must be positive for a log-log fit")
    xs = [log(x) for x, _ in pts]
    ys = [log(c) for _, c in pts]
    n = len(xs)
    mx = sum(xs) / n
    my = sum(ys) / n
    sxx = sum((x - mx) ** 2 for x in xs)
    if sxx == 0:
        raise DomainError("degenerate series: all X equal")
    return sum((x - mx) * (y - my) for x, y in zip(xs, ys)) / sxx


def count_family(ell, X, box_factor=SAFETY_BOX_FACTOR):
    """Number of distinct minimal curves of height <= X in the 5- or 7-torsion family.

    Enumerates t = a/b over the family's parameter window (scaled by a safety
    factor), builds the Tate normal fiber, reduces to the minimal short model
    and dedupes on (A, B).
    """
    if ell not in (5, 7):
        raise DomainError("count_family covers ell in {5, 7}")
    box = families.param_box(ell)
    build = families.e5_curve if ell == 5 else families.e7_curve
    num_max = int(box_factor * X ** float(box.m)) + 1
    den_max = int(box_factor * X ** float(box.n)) + 1
    seen = set()
    for den in range(1, den_max + 1):
        for num in range(-num_max, num_max + 1):
            if gcd(num, den) != 1:
                continue
            t = Fraction(num, den)
            try:
                long_model = build(t)
            except Exception:
                continue  # singular parameter
            model = curves.short_model(long_model)
            if curves.height_leq(model, X):
                seen.add((model.A, model.B))
    return len(seen)


def family_series(ell, heights, box_factor=SAFETY_BOX_FACTOR):
    """CountSeries over the given heights: region count for ell = 3, fiber
    enumeration for ell in {5, 7}."""
    pts = []
    for X in heights:
        if ell == 3:
            pts.append((X, count_r3(X)))
        else:
            pts.append((X, count_family(ell, X, box_factor)))
    return CountSeries(f"e{ell}", tuple(pts))


def _polmulmod(u, v, monic, p):
    """u * v mod (monic, p) for ascending coefficient lists, monic of degree d."""
    d = len(monic) - 1
    w = [0] * (len(u) + len(v) - 1)
    for i, ui in enumerate(u):
        if ui:
            for j, vj in enumerate(v):
                w[i + j] = (w[i + j] + ui * vj) % p
    for i in range(len(w) - 1, d - 1, -1):
        c = w[i]
        if c:
            shift = i - d
            for j in range(d + 1):
                w[shift + j] = (w[shift + j] - c * monic[j]) % p
    return polys.normalize(w[:d])


def _distinct_roots_gcd(f, p):
    """Number of distinct roots of f mod p as deg gcd(x^p - x, f), or None
    when the reduction degenerates (f vanishes or drops below degree 1)."""
    red = polys.normalize([c % p for c in f])
    if len(red) < 2:
        return None
    inv = pow(red[-1], -1, p)
    monic = [c * inv % p for c in red]
    xp = [1]
    base = [0, 1]
    e = p
    while e:
        if e & 1:
            xp = _polmulmod(xp, base, monic, p)
        base = _polmulmod(base, base, monic, p)
        e >>= 1
    frob = polys.normalize(polys.sub(xp, [0, 1]))
    g = polys._poly_gcd_mod(monic, [c % p for c in frob], p) if frob else monic
    return len(g) - 1


def roots_mod(f, p, square=False):
    """rho_f(p), or rho_f(p^2) with square=True.

    Mod p^2 counts lifts of mod-p roots through the exact expansion
    f(r1 + p r2) = f(r1) + p r2 f'(r1) (mod p^2).  Root counts mod p use
    exhaustive evaluation for small p and the degree of gcd(x^p - x, f)
    beyond that; when f is squarefree mod p every root is simple, so the
    distinct-root count already equals rho_f(p^2).
    """
    f = polys.normalize(f)
    if not f:
        raise DomainError("zero polynomial")
    fp = polys.derivative(f)
    if p > 500:
        count = _distinct_roots_gcd(f, p)
        if count is not None:
            if not square:
                return count
            if len(polys._poly_gcd_mod(f, fp, p)) == 1:
                return count  # all roots simple: unique lifts
    if not square:
        return len(polys.roots_mod_p(f, p))
    p2 = p * p
    count = 0
    for r1 in polys.roots_mod_p(f, p):
        fr = polys.evaluate_mod(f, r1, p2)
        dr = polys.evaluate_mod(fp, r1, p)
        if dr != 0:
            count += 1
        elif fr == 0:
            count += p
    return count


def _divisors(n):
    n = abs(n)
    out = set()
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.update((d, n // d))
        d += 1
    return sorted(out)


def _has_quadratic_factor(f):
    """Whether a primitive quartic with no rational root splits into two quadratics.

    Writes f = (a2 x^2 + a1 x + a0)(b2 x^2 + b1 x + b0); a2 b2 = c4 and
    a0 b0 = c0 leave a 2x2 linear system for (a1, b1) from the x^3 and x^1
    coefficients, checked against the x^2 coefficient.  A singular system
    reduces to a quadratic in a1.  Every candidate is verified by exact
    polynomial multiplication.
    """
    c0, c1, c2, c3, c4 = f

    def is_factorization(a2, a1, a0, b2, b1, b0):
        return polys.mul([a0, a1, a2], [b0, b1, b2]) == list(f)

    for a2 in _divisors(c4):
        b2 = c4 // a2
        for a0_abs in _divisors(c0):
            for a0 in (a0_abs, -a0_abs):
                b0 = c0 // a0
                # a2*b1 + b2*a1 = c3 ; a0*b1 + b0*a1 = c1
                det = a2 * b0 - b2 * a0
                if det != 0:
                    b1_num = c3 * b0 - c1 * b2
                    a1_num = c1 * a2 - c3 * a0
                    if b1_num % det or a1_num % det:
                        continue
                    if is_factorization(a2, a1_num // det, a0, b2, b1_num // det, b0):
                        return True
                else:
                    # dependent rows: a1 satisfies b2 a1^2 - c3 a1 + a2 (c2 - a2 b0 - a0 b2) = 0
                    qa, qb, qc = b2, -c3, a2 * (c2 - a2 * b0 - a0 * b2)
                    disc = qb * qb - 4 * qa * qc
                    if disc < 0 or not is_square(disc):
                        continue
                    r = isqrt(disc)
                    for num in (-qb + r, -qb - r):
                        if num % (2 * qa):
                            continue
                        a1 = num // (2 * qa)
                        if (c3 - a1 * b2) % a2:
                            continue
                        b1 = (c3 - a1 * b2) // a2
                        if is_factorization(a2, a1, a0, b2, b1, b0):
                            return True
    return False


def is_irreducible(f):
    """Irreducibility over Q for a nonconstant integer polynomial.

    Degree <= 3 reduces to the absence of rational roots; degree 4 also
    excludes quadratic-times-quadratic splittings; higher degrees accept a
    mod-p irreducibility witness and otherwise refuse to certify.
    """
    f = polys.primitive(f)
    d = polys.degree(f)
    if d <= 0:
        return False
    if d == 1:
        return True
    if polys.rational_roots(f):
        return False
    if d <= 3:
        return True
    if d == 4:
        return not _has_quadratic_factor(f)
    for p in primes_up_to(1000):
        if f[-1] % p == 0:
            continue
        if _irreducible_mod_p(f, p):
            return True
    raise DomainError("cannot certify irreducibility at this degree")


def _irreducible_mod_p(f, p):
    """Distinct-degree test: f irreducible mod p iff x^(p^d) = x mod f and
    gcd(x^(p^(d/q)) - x, f) = 1 for prime q | d."""
    d = polys.degree(f)
    inv = pow(f[-1], -1, p)
    monic = [c * inv % p for c in f]

    def polmulmod(u, v):
        w = [0] * (len(u) + len(v) - 1)
        for i, ui in enumerate(u):
            if ui:
                for j, vj in enumerate(v):
                    w[i + j] = (w[i + j] + ui * vj) % p
        # reduce mod monic
        for i in range(len(w) - 1, d - 1, -1):
            c = w[i]
            if c:
                shift = i - d
                for j in range(d + 1):
                    w[shift + j] = (w[shift + j] - c * monic[j]) % p
        return polys.normalize(w[:d])

    def xpow(e):
        out = [1]
        b = [0, 1]
        while e:
            if e & 1:
                out = polmulmod(out, b)
            b = polmulmod(b, b)
            e >>= 1
        return out

    xq = xpow(p**d)
    if polys.normalize(polys.sub(xq, [0, 1])) != []:
        return False
    for q in set(k for k, _ in factor(d).factors):
        xr = xpow(p ** (d // q))
        diff = [c % p for c in polys.sub(xr, [0, 1])]
        if len(polys._poly_gcd_mod(f, diff, p)) != 1:
            return False
    return True


def normal_order_experiment(f, X, S=()):
    """Mean and variance of omega_S(s(f(r))) over reduced rationals of height <= X.

    f(a/b) is cleared to the integer b^deg(f) f(a/b); omega_S counts the
    distinct primes of its square-free part outside S.  Requires f
    irreducible (zero values would otherwise swamp the sample).
    """
    f = polys.primitive(f)
    if X < 10:
        raise DomainError("X must be >= 10")
    if not is_irreducible(f):
        raise DomainError("f must be irreducible over Q")
    excluded = set(S)
    total = 0
    total_sq = 0
    count = 0
    for b in range(1, X + 1):
        for a in range(-X, X + 1):
            if gcd(a, b) != 1:
                continue
            value = polys.homogeneous_value(f, a, b)
            if value == 0:
                continue
            om = sum(1 for pr, e in factor(value).factors
                     if e % 2 == 1 and pr not in excluded)
            total += om
            total_sq += om * om
            count += 1
    mean = Fraction(total, count)
    variance = Fraction(total_sq, count) - mean * mean
    return NormalOrderSample(X, mean, variance, count)


def average_trace(A_coeffs, B_coeffs, p):
    """(1/p) sum over r in F_p of the trace sum for y^2 = x^3 + A(r)x + B(r).

    Fibers with vanishing discriminant contribute through the same Legendre
    sum, which lands on the conventions +1 (split multiplicative), -1
    (nonsplit), 0 (additive).
    """
    chi = curves._legendre_table(p)
    total = 0
    for r in range(p):
        A = polys.evaluate_mod(A_coeffs, r, p)
        B = polys.evaluate_mod(B_coeffs, r, p)
        total += curves.trace_from_coefficients(A, B, p, chi)
    return Fraction(total, p)


def _tate_short_polys(ell):
    """Ascending coefficient lists (A(t), B(t)) of the short model of the
    5- or 7-torsion Tate family, via -27 c4 and -54 c6."""
    if ell == 5:
        b_poly, c_poly = [0, 1], [0, 1]
    else:
        b_poly, c_poly = [0, 0, -1, 1], [0, -1, 1]
    one_minus_c = polys.sub([1], c_poly)
    b2 = polys.add(polys.mul(one_minus_c, one_minus_c), polys.scale(b_poly, -4))
    b4 = polys.mul(one_minus_c, polys.scale(b_poly, -1))
    b6 = polys.mul(b_poly, b_poly)
    c4 = polys.sub(polys.mul(b2, b2), polys.scale(b4, 24))
    c6 = polys.add(
        polys.sub(polys.scale(polys.power(b2, 3), -1),
                  polys.scale(b6, 216)),
        polys.scale(polys.mul(b2, b4), 36),
    )
    return polys.scale(c4, -27), polys.scale(c6, -54)


def avg_frobenius(family, p):
    """Averaged Frobenius trace over the fibers of one torsion family at p > 3."""
    if p <= 3:
        raise DomainError("need p > 3")
    if family == "e5":
        A, B = _tate_short_polys(5)
    elif family == "e7":
        A, B = _tate_short_polys(7)
    elif family == "e3poly":
        f3, g3, _ = families.e3_polynomials()
        A, B = f3, g3
    else:
        raise DomainError(f"unknown family {family!r}")
    return average_trace(A, B, p)


def family_trace_bound(family):
    """3 deg(Delta) + deg(c4) - 2 for the family, the uniform bound on |A_p|."""
    if family == "e5":
        delta_deg = polys.degree(families.delta5_poly())
        c4_deg = polys.degree(_tate_short_polys(5)[0])
    elif family == "e7":
        delta_deg = polys.degree(families.delta7_poly())
        c4_deg = polys.degree(_tate_short_polys(7)[0])
    elif family == "e3poly":
        f3, g3, d3 = families.e3_polynomials()
        delta_deg = polys.degree(d3)
        c4_deg = polys.degree(f3)
    else:
        raise DomainError(f"unknown family {family!r}")
    return 3 * delta_deg + c4_deg - 2


def certificate_density(X):
    """(certified, total) over coprime pairs with |a| <= X, |b| <= X^2.

    total counts nonsingular coprime pairs whose a^2 - 4b is not a perfect
    square; certified counts those admitting a local insolubility
    certificate, which forces rank <= omega(N) - 2 through the descent
    bound.  See `has_insolubility_certificate`.
    """
    if X < 2:
        raise DomainError("X must be >= 2")
    certified = 0
    total = 0
    for a in range(-X, X + 1):
        for b in range(-X * X, X * X + 1):
            if b == 0 or gcd(a, b) != 1:
                continue
            n = a * a - 4 * b
            if n == 0 or (n > 0 and is_square(n)):
                continue
            total += 1
            if has_insolubility_certificate(a, b):
                certified += 1
    return certified, total


def has_insolubility_certificate(a, b):
    """Local certificate killing one F_2-dimension of a Selmer group.

    A prime p | b with p > 3, p coprime to a, and (nu_p(b) odd or (a/p) = 1)
    makes every class d with (d/p) = -1 locally insoluble on the phi side;
    the certificate also needs a finite prime q | a^2 - 4b with (q/p) = -1
    so that the killed character is nontrivial away from the sign class.
    The mirror version at p | a^2 - 4b kills on the phi-hat side.  Combined
    with the either-or collapse of one sign class, either variant gives
    rank <= omega(N) - 2 for coprime pairs.
    """
    n = a * a - 4 * b
    n_primes = [q for q, _ in factor(n).factors]
    b_primes = [q for q, _ in factor(b).factors]
    for p, e in factor(b).factors:
        if p <= 3 or a % p == 0:
            continue
        if e % 2 == 1 or legendre(a, p) == 1:
            if any(legendre(q, p) == -1 for q in n_primes):
                return True
    for p, e in factor(n).factors:
        if p <= 3 or a % p == 0:
            continue
        if e % 2 == 1 or legendre(-2 * a, p) == 1:
            if any(legendre(q, p) == -1 for q in b_primes):
                return True
    return False
