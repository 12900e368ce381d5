"""Parametrized curve families with prescribed rational torsion.

Covers the 2-torsion family y^2 = x^3 + ax^2 + bx and its dual, the
Harron-Snowden style (a, b) parametrizations of 2- and 3-torsion short
models, Tate normal forms (5- and 7-torsion), curves y^2 = x^3 + a with a
rational 3-isogeny, and quadratic twists of y^2 = x^3 - 1.
"""

from dataclasses import dataclass
from fractions import Fraction

from . import curves, polys
from .arith import factor, is_square, is_squarefree, omega
from .curves import LongWeierstrass, ShortWeierstrass
from .errors import DomainError, SingularCurve

E2_TAG = "e2"
E3_TAG = "e3"

COND_I = "CondI"
COND_II = "CondII"
LARGE_OMEGA = "LargeOmega"
UNCLASSIFIED = "Unclassified"


@dataclass(frozen=True)
class E2Param:
    """Parameters of y^2 = x^3 + ax^2 + bx; nonsingular iff b(a^2 - 4b) != 0."""

    a: int
    b: int

    def __post_init__(self):
        if self.b * (self.a * self.a - 4 * self.b) == 0:
            raise SingularCurve(f"E_({self.a},{self.b}) is singular")

    @property
    def disc_quadratic(self):
        """a^2 - 4b, the discriminant of x^2 + ax + b."""
        return self.a * self.a - 4 * self.b


@dataclass(frozen=True)
class ParamBox:
    """Exponent box |num(t)| = O(X^m), |den(t)| = O(X^n) for one torsion family."""

    ell: int
    m: Fraction
    n: Fraction


def e2_curve(p):
    """Minimal short model of y^2 = x^3 + ax^2 + bx, plus the dual parameters.

    The dual 2-isogenous curve is y^2 = x^3 - 2ax^2 + (a^2 - 4b)x, returned
    as its (a', b') parameter pair.
    """
    a, b = p.a, p.b
    long_model = LongWeierstrass(0, a, 0, b, 0)
    model = curves.short_model(long_model)
    dual = E2Param(-2 * a, a * a - 4 * b)
    return model, dual


def e2_height_leq(p, X):
    """H_2(E_{a,b}) <= X, i.e. |a| <= X and |b| <= X^2."""
    return abs(p.a) <= X and abs(p.b) <= X * X


def e2_from_torsion(a, b):
    """Short model (A, B) = (a, b^3 + ab); x = -b is a rational 2-torsion root."""
    return ShortWeierstrass(a, b**3 + a * b)


def e3_from_torsion(a, b):
    """Short model (A, B) = (6ab + 27a^4, b^2 - 27a^6), carrying 3-torsion."""
    return ShortWeierstrass(6 * a * b + 27 * a**4, b * b - 27 * a**6)


def type1(a):
    """(y^2 = x^3 + a, its 3-isogenous partner y^2 = x^3 - 27a, memberships).

    Membership: the curve has 2-torsion iff a is a perfect cube, and
    3-torsion iff a is a perfect square.
    """
    if a == 0:
        raise DomainError("a must be nonzero")
    member = set()
    if _is_cube(a):
        member.add(E2_TAG)
    if a > 0 and is_square(a):
        member.add(E3_TAG)
    return ShortWeierstrass(0, a), ShortWeierstrass(0, -27 * a), frozenset(member)


def _is_cube(n):
    m = abs(n)
    r = round(m ** (1 / 3))
    for c in (r - 1, r, r + 1):
        if c >= 0 and c**3 == m:
            return True
    return False


def tate_normal(b, c):
    """E(b, c): Y^2 + (1-c)XY - bY = X^3 - bX^2, with a torsion point at (0, 0).

    Discriminant b^3 (16b^2 - 8bc^2 - 20bc + b + c(c-1)^3); b = 0 is singular.
    """
    b = Fraction(b)
    c = Fraction(c)
    disc = b**3 * (16 * b * b - 8 * b * c * c - 20 * b * c + b + c * (c - 1) ** 3)
    if disc == 0:
        raise SingularCurve(f"E({b}, {c}) is singular")
    return LongWeierstrass(1 - c, -b, -b, 0, 0)


def e5_curve(t):
    """Tate normal curve with b = c = t; the point (0, 0) has order 5.

    Discriminant t^5 (t^2 - 11t - 1).
    """
    return tate_normal(t, t)


def e7_curve(t):
    """Tate normal curve with b = t^3 - t^2, c = t^2 - t; (0, 0) has order 7.

    Discriminant (t^3 - 8t^2 + 5t + 1)(t - 1)^7 t^7.
    """
    t = Fraction(t)
    return tate_normal(t**3 - t * t, t * t - t)


def delta5_poly():
    """t^5 (t^2 - 11t - 1), ascending coefficients."""
    return polys.mul([0, 0, 0, 0, 0, 1], [-1, -11, 1])


def delta7_poly():
    """(t^3 - 8t^2 + 5t + 1)(t - 1)^7 t^7, ascending coefficients."""
    out = [1, 5, -8, 1]
    out = polys.mul(out, polys.power([-1, 1], 7))
    return polys.mul(out, polys.power([0, 1], 7))


def e3_polynomials():
    """(f3, g3, delta3) for the 1-parameter family of 3-torsion curves.

    f3 = 162t - 27 and g3 = 729t^2 + 486t + 54; delta3 = 4 f3^3 - 27 g3^2.
    """
    f3 = [-27, 162]
    g3 = [54, 486, 729]
    delta3 = polys.sub(polys.scale(polys.power(f3, 3), 4), polys.scale(polys.mul(g3, g3), 27))
    return f3, g3, delta3


def twist_e0(D, nu2_manin=0, single_prime_cond2=True):
    """Quadratic twist y^2 = x^3 - D^3 of y^2 = x^3 - 1, with its rank class.

    CondI: every prime of D is 5 mod 12.  CondII: exactly one prime is not
    5 mod 12 and that prime is 3 mod 4 (a single such prime counts, with the
    5 mod 12 condition vacuous, unless single_prime_cond2 is off).
    LargeOmega: omega(D) >= 10 + 2*nu2_manin.  Otherwise Unclassified.
    """
    if D == 0 or not is_squarefree(D):
        raise DomainError(f"{D} is not a nonzero square-free integer")
    curve = ShortWeierstrass(0, -(D**3))
    primes = [p for p, _ in factor(D).factors]
    bad = [p for p in primes if p % 12 != 5]
    if not bad:
        cls = COND_I
    elif len(bad) == 1 and bad[0] % 4 == 3 and (single_prime_cond2 or len(primes) > 1):
        cls = COND_II
    elif primes and omega(D) >= 10 + 2 * nu2_manin:
        cls = LARGE_OMEGA
    else:
        cls = UNCLASSIFIED
    return curve, cls


def param_box(ell):
    """Window exponents (m, n) for enumerating t = a/b per torsion family.

    Chosen so that m + n matches the family's count exponent: 2 for ell = 3,
    1 for ell = 5, 1/2 for ell = 7.
    """
    table = {
        3: (Fraction(3, 2), Fraction(1, 2)),
        5: (Fraction(1, 2), Fraction(1, 2)),
        7: (Fraction(1, 4), Fraction(1, 4)),
    }
    if ell not in table:
        raise DomainError(f"no parameter box for ell = {ell}")
    m, n = table[ell]
    return ParamBox(ell, m, n)
