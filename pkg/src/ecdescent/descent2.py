"""Full descent via 2-isogeny for y^2 = x^3 + ax^2 + bx.

Signed square-free divisor classes d of a^2 - 4b (resp. b) index quartic
homogeneous spaces Z^2 = d U^4 + F U^2 V^2 + (n/d) V^4; a class survives
into the phi- (resp. phi-hat-) Selmer set when its space is soluble over R
and over Q_p for every p | 2b(a^2 - 4b).  The rank bound is
dim_phi + dim_phihat - 2.

p-adic solubility is decided exactly: (U, V) is scaled primitive, the two
dehomogenizations are searched by iterative deepening over residues mod p^k,
and a branch is closed once the value's valuation and unit class are pinned
(unit squares mod p for odd p, unit = 1 mod 8 for p = 2).  A hard depth cap
of nu_p(4 d1 d2 (F^2 - 4 d1 d2)) plus a configurable margin turns any
unresolved branch into an Undecided error rather than a silent guess.
"""

from dataclasses import dataclass
from functools import lru_cache
from math import gcd

from .arith import (
    factor,
    is_prime,
    is_square,
    legendre,
    next_prime,
    squarefree_divisors,
    unitary_squarefree_divisors,
    valuation,
)
from .errors import DomainError, Undecided

DEFAULT_DEPTH_MARGIN = 5


@dataclass(frozen=True)
class HomogeneousSpace:
    """Z^2 = d1 U^4 + F U^2 V^2 + d2 V^4 with d1 d2 (F^2 - 4 d1 d2) != 0."""

    d1: int
    F: int
    d2: int

    def __post_init__(self):
        if self.d1 * self.d2 * (self.F * self.F - 4 * self.d1 * self.d2) == 0:
            raise DomainError("degenerate quartic space")


@dataclass(frozen=True)
class SelmerEstimate:
    phi_classes: tuple
    phihat_classes: tuple
    dim_phi: int
    dim_phihat: int
    rank_upper: int
    clamped: bool


def real_soluble(space):
    """Whether the quartic takes a square value on R^2 away from the origin.

    Insoluble exactly when d1 < 0, d2 < 0 and the middle term cannot rescue:
    F <= 0 or F^2 < 4 d1 d2.
    """
    d1, F, d2 = space.d1, space.F, space.d2
    if d1 > 0 or d2 > 0:
        return True
    return F > 0 and F * F >= 4 * d1 * d2


def _decide_zp(c4, c2, c0, p, cap):
    """Does c4 x^4 + c2 x^2 + c0 take a square value (or 0) for some x in Z_p?

    Iterative deepening over residue classes x = r mod p^k.  Within a class
    the value's valuation v and unit part mod p^(k-v) are constant, so the
    class resolves once v < k (odd p) or v <= k - 3 (p = 2, unit needed mod
    8).  Returns True/False, or None if some branch hits the depth cap.
    """
    undecided = False
    stack = [(r, 1) for r in range(p)]
    while stack:
        r, k = stack.pop()
        t = c4 * r**4 + c2 * r * r + c0
        if t == 0:
            return True  # exact zero of the quartic: a point with Z = 0
        v = valuation(t, p)
        resolved = (v <= k - 3) if p == 2 else (v < k)
        if resolved:
            if v % 2 == 0:
                u = t // p**v
                if p == 2:
                    if u % 8 == 1:
                        return True
                elif legendre(u, p) == 1:
                    return True
            continue
        if k >= cap:
            undecided = True
            continue
        step = p**k
        stack.extend((r + j * step, k + 1) for j in range(p))
    return None if undecided else False


@lru_cache(maxsize=None)
def _padic_soluble_cached(d1, F, d2, p, depth_margin):
    cap = valuation(4 * d1 * d2 * (F * F - 4 * d1 * d2), p) + depth_margin
    if p == 2:
        cap += 2  # unit class needs three more known bits
    first = _decide_zp(d1, F, d2, p, cap)
    if first is True:
        return True
    second = _decide_zp(d2, F, d1, p, cap)
    if second is True:
        return True
    if first is None or second is None:
        raise Undecided(f"depth cap exhausted for ({d1},{F},{d2}) at p={p}")
    return False


def padic_soluble(space, p, depth_margin=DEFAULT_DEPTH_MARGIN):
    """Exact Q_p-solubility of the quartic space, (U, V) != (0, 0).

    Primitive (U, V) splits into V a unit (x = U/V in Z_p) and U a unit
    (x = V/U in Z_p), giving the two dehomogenized quartics.
    """
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    return _padic_soluble_cached(space.d1, space.F, space.d2, p, depth_margin)


def fastpath_insoluble(a, b, d, p):
    """Closed-form local insolubility test for the phi-space of class d at p.

    Requires p > 3 prime, p | b, p coprime to a, and d a square-free unitary
    divisor of a^2 - 4b (sign free).  The space C_{d, -2a, (a^2-4b)/d} has no
    Q_p-point iff (d/p) = -1 and (nu_p(b) odd or (a/p) = 1).
    """
    if p <= 3 or not is_prime(p):
        raise DomainError(f"p = {p} must be a prime > 3")
    if b % p != 0 or a % p == 0:
        raise DomainError("need p | b and p coprime to a")
    n = a * a - 4 * b
    if n == 0 or d == 0 or n % d != 0:
        raise DomainError("d must divide a^2 - 4b")
    if abs(d) not in unitary_squarefree_divisors(n):
        raise DomainError("d must be a square-free unitary divisor of a^2 - 4b")
    return legendre(d, p) == -1 and (valuation(b, p) % 2 == 1 or legendre(a, p) == 1)


def _local_primes(param):
    """Sorted primes dividing 2 b (a^2 - 4b)."""
    n = param.disc_quadratic
    primes = {2}
    primes.update(p for p, _ in factor(param.b).factors)
    primes.update(p for p, _ in factor(n).factors)
    return sorted(primes)


def _survivors(param, quartic_of, classes, real_place, depth_margin):
    local = _local_primes(param)
    out = []
    for d in classes:
        space = quartic_of(d)
        if real_place and not real_soluble(space):
            continue
        if all(padic_soluble(space, p, depth_margin) for p in local):
            out.append(d)
    out.sort(key=lambda d: (abs(d), d < 0))
    return out


def sel_phi(param, real_place=True, depth_margin=DEFAULT_DEPTH_MARGIN):
    """Surviving classes d in Q(T1), T1 = primes(a^2 - 4b) and infinity.

    The space for class d is Z^2 = d U^4 - 2a U^2 V^2 + ((a^2-4b)/d) V^4;
    signed square-free representatives always divide a^2 - 4b exactly.
    """
    n = param.disc_quadratic
    classes = squarefree_divisors(n)
    quartic = lambda d: HomogeneousSpace(d, -2 * param.a, n // d)
    return _survivors(param, quartic, classes, real_place, depth_margin)


def sel_phihat(param, real_place=True, depth_margin=DEFAULT_DEPTH_MARGIN):
    """Surviving classes d in Q(T2), T2 = primes(b) and infinity.

    The space for class d is Z^2 = d U^4 + a U^2 V^2 + (b/d) V^4.
    """
    classes = squarefree_divisors(param.b)
    quartic = lambda d: HomogeneousSpace(d, param.a, param.b // d)
    return _survivors(param, quartic, classes, real_place, depth_margin)


def _dim_f2(classes):
    size = len(classes)
    dim = size.bit_length() - 1
    assert 1 << dim == size, f"Selmer set size {size} is not a power of 2"
    return dim


def rank_upper(param, real_place=True, depth_margin=DEFAULT_DEPTH_MARGIN):
    """Selmer sets for both isogeny directions and the rank bound.

    rank(E_{a,b}(Q)) <= dim_phi + dim_phihat - 2, clamped at 0 (the clamp is
    recorded; the bound is vacuous below zero).
    """
    phi = sel_phi(param, real_place, depth_margin)
    phihat = sel_phihat(param, real_place, depth_margin)
    assert 1 in phi and 1 in phihat, "trivial class must survive"
    dim_phi = _dim_f2(phi)
    dim_phihat = _dim_f2(phihat)
    bound = dim_phi + dim_phihat - 2
    clamped = bound < 0
    return SelmerEstimate(
        tuple(phi), tuple(phihat), dim_phi, dim_phihat, max(bound, 0), clamped
    )


def either_or_check(param, real_place=True, depth_margin=DEFAULT_DEPTH_MARGIN):
    """At least one of the two Selmer sets contains no negative class."""
    if all(d > 0 for d in sel_phi(param, real_place, depth_margin)):
        return True
    return all(d > 0 for d in sel_phihat(param, real_place, depth_margin))


def construct_b_candidates(a, M, bound):
    """All |b| <= bound with gcd(a, b) = 1 and nu_{q_i}(a^2 - 4b) = 1, i <= M.

    P(a) is the least prime > 3 with (a/P) = 1; q_1 < q_2 < ... are the
    primes with (q_i/P(a)) = -1.  Requires a not a perfect square.
    """
    if a >= 0 and is_square(a):
        raise DomainError(f"a = {a} must not be a perfect square")
    P = least_split_prime(a)
    qs = nonresidue_primes(P, M)
    out = []
    for b in range(-bound, bound + 1):
        if b == 0 or gcd(a, b) != 1:
            continue
        n = a * a - 4 * b
        if n != 0 and all(valuation(n, q) == 1 for q in qs):
            out.append(b)
    return out


def least_split_prime(a):
    """P(a): least prime > 3 with Legendre symbol (a/p) = 1."""
    p = 5
    while legendre(a, p) != 1:
        p = next_prime(p)
    return p


def nonresidue_primes(P, M):
    """The M least primes q with (q/P) = -1."""
    out = []
    q = 2
    while len(out) < M:
        if legendre(q, P) == -1:
            out.append(q)
        q = next_prime(q)
    return out
