"""3-isogeny descent for curves y^2 = x^3 + a.

The rank bound adds, for K = Q(sqrt(-3a)) and Q(sqrt(a)): the 3-rank of the
class group (exact for imaginary fields via reduced binary quadratic forms
and Gauss composition, bounded via Scholz reflection for real fields), the
F_3-dimension of units mod cubes, and the sizes of the local prime sets S_a
and S_{-27a}.
"""

from dataclasses import dataclass
from functools import lru_cache
from math import gcd, isqrt

from .arith import factor, legendre, squarefree_kernel
from .errors import DomainError

RATIONAL = 1  # square-class marker for the degenerate "field" Q

EXACT_IMAGINARY = "exact-imaginary"
SCHOLZ_BOUND = "scholz-bound"
RATIONAL_TRIVIAL = "rational-trivial"


@dataclass(frozen=True)
class SPrimeSet:
    a: int
    primes: tuple


@dataclass(frozen=True)
class ClassGroup3:
    field_kernel: int  # square-free d with K = Q(sqrt(d)); 1 means K = Q
    r3: int
    method: str


@dataclass(frozen=True)
class Type1Bound:
    bound: int
    class_a: ClassGroup3
    unit_a: int
    class_m27a: ClassGroup3
    unit_m27a: int
    s_a: int
    s_m27a: int

    @property
    def class_unit_total(self):
        return self.class_a.r3 + self.unit_a + self.class_m27a.r3 + self.unit_m27a


def s_set(a):
    """S_a: always 2 and 3, plus primes p > 3 with nu_p(a) in {2, 4} and (-3/p) = 1."""
    if a == 0:
        raise DomainError("a must be nonzero")
    primes = {2, 3}
    for p, e in factor(a).factors:
        if p > 3 and e in (2, 4) and legendre(-3, p) == 1:
            primes.add(p)
    return SPrimeSet(a, tuple(sorted(primes)))


def reduce_form(a, b, c):
    """Reduced representative of a positive definite form (a, b, c).

    Reduced means |b| <= a <= c with b >= 0 whenever |b| = a or a = c.
    """
    while True:
        if a > c:
            a, b, c = c, -b, a
            continue
        if abs(b) > a:
            r = b % (2 * a)
            if r > a:
                r -= 2 * a
            c += (r * r - b * b) // (4 * a)
            b = r
            continue
        if (abs(b) == a or a == c) and b < 0:
            b = -b
            continue
        return a, b, c


def compose(f1, f2, D):
    """Gauss composition of primitive positive definite forms of discriminant D."""
    a1, b1, c1 = f1
    a2, b2, c2 = f2
    if a1 == 1:
        return reduce_form(a2, b2, c2)
    if a2 == 1:
        return reduce_form(a1, b1, c1)
    s = (b1 + b2) // 2
    d1, u1, v1 = _xgcd(a1, a2)
    d, u2, v2 = _xgcd(d1, s)
    a3 = a1 * a2 // (d * d)
    b3 = (u2 * u1 * a1 * b2 + u2 * v1 * a2 * b1 + v2 * (b1 * b2 + D) // 2) // d
    b3 %= 2 * a3
    c3 = (b3 * b3 - D) // (4 * a3)
    return reduce_form(a3, b3, c3)


def _xgcd(a, b):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def identity_form(D):
    if D % 2 == 0:
        return (1, 0, -D // 4)
    return (1, 1, (1 - D) // 4)


def reduced_forms(D):
    """All primitive reduced forms of discriminant D < 0 (the form class group)."""
    if D >= 0 or D % 4 not in (0, 1):
        raise DomainError(f"{D} is not a negative discriminant")
    out = []
    bmax = isqrt(-D // 3)
    for b in range(bmax + 1):
        if (b - D) % 2 != 0:
            continue
        ac4 = b * b - D
        if ac4 % 4 != 0:
            continue
        ac = ac4 // 4
        a = max(b, 1)
        while a * a <= ac:
            if ac % a == 0:
                c = ac // a
                if gcd(gcd(a, b), c) == 1:
                    out.append((a, b, c))
                    if b and b != a and a != c:
                        out.append((a, -b, c))
            a += 1
    return sorted(out)


def class_number(D):
    """h(D): the number of primitive reduced forms of discriminant D < 0."""
    return len(reduced_forms(D))


@lru_cache(maxsize=None)
def r3_imaginary(D):
    """3-rank of the form class group of discriminant D < 0.

    Counts elements g with g^3 = identity by explicit Gauss composition over
    the reduced forms; the count is 3^r3.
    """
    forms = reduced_forms(D)
    ident = identity_form(D)
    cubes = 0
    for f in forms:
        if compose(f, compose(f, f, D), D) == ident:
            cubes += 1
    r3 = 0
    while 3**r3 < cubes:
        r3 += 1
    if 3**r3 != cubes:
        raise ArithmeticError(f"3-torsion count {cubes} is not a power of 3 for D={D}")
    return r3


def fundamental_discriminant(d):
    """Discriminant of Q(sqrt(d)) for square-free d: d if d = 1 mod 4, else 4d."""
    return d if d % 4 == 1 else 4 * d


def class_bound(d):
    """3-rank data for Q(sqrt(d)), exact when imaginary, a bound when real.

    d is reduced to its square-free kernel; kernel 1 means the rationals
    (r3 = 0).  Real fields use Scholz reflection: r3(Q(sqrt(d))) is at most
    r3(Q(sqrt(-3d))), computed exactly on the imaginary partner.
    """
    if d == 0:
        raise DomainError("square class of zero is undefined")
    k = squarefree_kernel(d)
    if k == 1:
        return ClassGroup3(RATIONAL, 0, RATIONAL_TRIVIAL)
    if k < 0:
        return ClassGroup3(k, r3_imaginary(fundamental_discriminant(k)), EXACT_IMAGINARY)
    partner = squarefree_kernel(-3 * k)
    r3 = r3_imaginary(fundamental_discriminant(partner))
    return ClassGroup3(k, r3, SCHOLZ_BOUND)


def unit_3dim(d):
    """dim_F3 of units modulo cubes: 1 for real fields and Q(sqrt(-3)), else 0."""
    if d == 0:
        raise DomainError("square class of zero is undefined")
    k = squarefree_kernel(d)
    if k > 1:
        return 1  # fundamental unit
    if k == -3:
        return 1  # sixth roots of unity
    return 0


def rank_upper_type1(a):
    """Rank bound for y^2 = x^3 + a through the 3-isogeny to y^2 = x^3 - 27a.

    bound = r3(K_a) + units(K_a) + r3(K_{-27a}) + units(K_{-27a})
          + #S_a + #S_{-27a},
    with K_a = Q(sqrt(-3a)) and K_{-27a} = Q(sqrt(a)).  Class-group terms may
    be Scholz upper bounds; the sum stays a valid upper bound.
    """
    if a == 0:
        raise DomainError("a must be nonzero")
    cls_a = class_bound(-3 * a)
    cls_m = class_bound(a)
    unit_a = unit_3dim(-3 * a)
    unit_m = unit_3dim(a)
    sa = len(s_set(a).primes)
    sm = len(s_set(-27 * a).primes)
    bound = cls_a.r3 + unit_a + cls_m.r3 + unit_m + sa + sm
    return bound, Type1Bound(bound, cls_a, unit_a, cls_m, unit_m, sa, sm)
