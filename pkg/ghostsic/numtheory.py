""" Elementary and quadratic-field number theory.

Discriminants, fundamental units, Dedekind sums and class numbers of
orders in real quadratic fields. Everything here is exact integer or
rational arithmetic except the analytic class-number path, which works in
double precision and rounds to the nearest integer.
"""
from collections import namedtuple
from fractions import Fraction
from math import gcd, isqrt, log, sqrt, pi

import numpy as np
from scipy.special import erfc, exp1
from sympy import factorint, divisors, isprime
from sympy.ntheory import legendre_symbol
from mpmath import mp, mpf

from .config import defaults
from .errors import DomainError, BoundError, ConvergenceError


Discriminant = namedtuple("Discriminant", ["delta", "delta0", "f"])


def _is_square(n):
    return n >= 0 and isqrt(n) ** 2 == n


def squarefree_decomposition(n, bound=None):
    """ Write n = s^2 * D with D squarefree.

    Arguments:
        n: (int) positive integer
        bound: (int) trial division bound, beyond which unfactored
            composite cofactors raise BoundError

    Returns:
        s: (int) square root of the square part
        D: (int) squarefree part
    """
    bound = bound or defaults.factor_bound
    factors = factorint(n, limit=bound)
    (s, D) = (1, 1)
    for (p, e) in factors.items():
        if p > bound and not isprime(p):
            if _is_square(p):
                s *= isqrt(p) ** e
                continue
            raise BoundError("cofactor {} of {} exceeds the factor bound {}".format(p, n, bound))
        s *= p ** (e // 2)
        if e % 2:
            D *= p
    return (s, D)


def fundamental_discriminant(delta, bound=None):
    """ Split a positive non-square discriminant as f^2 * delta0.

    Arguments:
        delta: (int) discriminant, 0 or 1 mod 4
        bound: (int) trial division bound

    Returns:
        disc: (Discriminant) (delta, delta0, f)
    """
    if not isinstance(delta, int) or delta <= 0:
        raise DomainError("discriminant must be a positive integer, got {!r}".format(delta))
    if delta % 4 not in (0, 1):
        raise DomainError("discriminant {} is not 0 or 1 mod 4".format(delta))
    if _is_square(delta):
        raise DomainError("discriminant {} is a perfect square".format(delta))
    (s, D) = squarefree_decomposition(delta, bound)
    if D % 4 == 1:
        return Discriminant(delta, D, s)
    return Discriminant(delta, 4 * D, s // 2)


def is_fundamental(delta0):
    try:
        return fundamental_discriminant(delta0).f == 1
    except DomainError:
        return False


class QuadInt(namedtuple("QuadInt", ["x", "y", "delta0"])):
    """ Element x + y*sqrt(delta0) of a real quadratic field, x and y rational. """
    __slots__ = ()

    def __new__(cls, x, y, delta0):
        return super(QuadInt, cls).__new__(cls, Fraction(x), Fraction(y), delta0)

    def _check(self, other):
        if isinstance(other, (int, Fraction)):
            return QuadInt(other, 0, self.delta0)
        if other.delta0 != self.delta0:
            raise DomainError("elements of Q(sqrt {}) and Q(sqrt {}) do not mix"
                              .format(self.delta0, other.delta0))
        return other

    def __add__(self, other):
        other = self._check(other)
        return QuadInt(self.x + other.x, self.y + other.y, self.delta0)

    __radd__ = __add__

    def __neg__(self):
        return QuadInt(-self.x, -self.y, self.delta0)

    def __sub__(self, other):
        return self + (-self._check(other))

    def __mul__(self, other):
        other = self._check(other)
        return QuadInt(self.x * other.x + self.delta0 * self.y * other.y,
                       self.x * other.y + self.y * other.x, self.delta0)

    __rmul__ = __mul__

    def __pow__(self, n):
        result = QuadInt(1, 0, self.delta0)
        base = self if n >= 0 else self.inverse()
        n = abs(n)
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __truediv__(self, other):
        return self * self._check(other).inverse()

    def conj(self):
        return QuadInt(self.x, -self.y, self.delta0)

    def trace(self):
        return 2 * self.x

    def norm(self):
        return self.x * self.x - self.delta0 * self.y * self.y

    def inverse(self):
        n = self.norm()
        if n == 0:
            raise DomainError("zero has no inverse")
        return QuadInt(self.x / n, -self.y / n, self.delta0)

    def in_order(self, f=1):
        """ True when the element lies in the order of conductor f. """
        b = 2 * self.y
        a = self.x - self.y * self.delta0
        return b.denominator == 1 and a.denominator == 1 and b.numerator % f == 0

    def to_mpf(self, prec=None):
        with mp.workprec(prec or mp.prec):
            return mpf(self.x.numerator) / self.x.denominator + \
                mpf(self.y.numerator) / self.y.denominator * mp.sqrt(self.delta0)

    def __float__(self):
        return float(self.x) + float(self.y) * sqrt(self.delta0)


def _cf_states(delta0):
    """ Complete quotients (P + sqrt D)/Q of omega = (s + sqrt D)/2, s = D mod 2.

    Yields (i, P, Q, a) for i = 0, 1, ... with a the partial quotient.
    All Q_i are positive, and Q_i = 2 for i > 0 exactly at unit convergents.
    """
    root = isqrt(delta0)
    (P, Q) = (delta0 % 2, 2)
    i = 0
    while True:
        a = (P + root) // Q
        yield (i, P, Q, a)
        P = a * Q - P
        Q = (delta0 - P * P) // Q
        i += 1


def _unit_convergent(delta0, modulus=None):
    """ Convergent (p, q) of omega whose element p - q*omega' is the fundamental unit.

    Returns:
        p, q: (int) convergent, reduced mod modulus when given
        norm: (int) norm of the fundamental unit
    """
    if not is_fundamental(delta0):
        raise DomainError("{} is not a fundamental discriminant".format(delta0))
    (p0, q0, p1, q1) = (0, 1, 1, 0)
    for (i, P, Q, a) in _cf_states(delta0):
        if i > 0 and Q == 2:
            return (p1, q1, -1 if i % 2 else 1)
        (p0, q0, p1, q1) = (p1, q1, a * p1 + p0, a * q1 + q0)
        if modulus:
            (p1, q1) = (p1 % modulus, q1 % modulus)


def fundamental_unit(delta0):
    """ Fundamental unit of the maximal order and its smallest positive-norm power.

    Arguments:
        delta0: (int) fundamental discriminant

    Returns:
        eps: (QuadInt) fundamental unit greater than 1
        eps_bar: (QuadInt) eps if norm(eps) = 1, else eps^2
        norm: (int) norm of eps, +1 or -1
    """
    (p, q, norm) = _unit_convergent(delta0)
    s = delta0 % 2
    eps = QuadInt(Fraction(2 * p - q * s, 2), Fraction(q, 2), delta0)
    eps_bar = eps if norm == 1 else eps * eps
    return (eps, eps_bar, norm)


def unit_trace_parity(delta0):
    """ Parity of the trace of the fundamental unit, without forming the unit. """
    (p, q, norm) = _unit_convergent(delta0, modulus=2)
    return (2 * p - q * (delta0 % 2)) % 2


def regulator(delta0, prec=None):
    """ log of the fundamental unit, summed over the complete quotients.

    Works for discriminants whose unit is too large to write down.
    """
    prec = prec or defaults.prec
    if not is_fundamental(delta0):
        raise DomainError("{} is not a fundamental discriminant".format(delta0))
    with mp.workprec(prec + defaults.guard):
        root = mp.sqrt(delta0)
        total = mpf(0)
        for (i, P, Q, a) in _cf_states(delta0):
            if i > 0:
                total += mp.log((P + root) / Q)
                if Q == 2:
                    break
    return +total


def lucas_u(n, P, Q=1, modulus=None):
    """ Lucas sequence U_n(P, Q): U_0 = 0, U_1 = 1, U_{k+1} = P U_k - Q U_{k-1}. """
    if n < 0:
        raise DomainError("lucas_u needs n >= 0, got {}".format(n))
    (u0, u1) = (0, 1)
    for _ in range(n):
        (u0, u1) = (u1, P * u1 - Q * u0)
        if modulus:
            (u0, u1) = (u0 % modulus, u1 % modulus)
    return u0


def lucas_index(P, Q, u, f):
    """ Smallest k >= 1 with f dividing u U_k(P, Q), stepping the sequence mod f. """
    (u0, u1) = (0, 1 % f)
    k = 1
    while u * u1 % f:
        (u0, u1) = (u1, (P * u1 - Q * u0) % f)
        k += 1
    return k


def lucas_v(n, P, Q=1):
    """ Companion sequence V_n(P, Q): V_0 = 2, V_1 = P. """
    (v0, v1) = (2, P)
    for _ in range(n):
        (v0, v1) = (v1, P * v1 - Q * v0)
    return v0


def dedekind_sum(a, b):
    """ Exact Dedekind sum s(a, b) by the reciprocity law.

    Arguments:
        a: (int) numerator
        b: (int) nonzero modulus; only |b| matters

    Returns:
        s: (Fraction) the Dedekind sum
    """
    if b == 0:
        raise DomainError("dedekind_sum needs b != 0")
    b = abs(b)
    a %= b
    g = gcd(a, b)
    (a, b) = (a // g, b // g)
    total = Fraction(0)
    sign = 1
    while a != 0:
        total += sign * (Fraction(-1, 4) + (Fraction(a, b) + Fraction(b, a) + Fraction(1, a * b)) / 12)
        sign = -sign
        (a, b) = (b % a, a)
    return total


def kronecker(delta0, n):
    """ Kronecker symbol (delta0 / n) for n >= 1. """
    if n < 1:
        raise DomainError("kronecker needs n >= 1, got {}".format(n))
    result = 1
    while n % 2 == 0:
        n //= 2
        if delta0 % 2 == 0:
            return 0
        result *= 1 if delta0 % 8 in (1, 7) else -1
    for (p, e) in factorint(n).items():
        ls = legendre_symbol(delta0 % p, p) if delta0 % p else 0
        result *= ls ** e
    return result


def _kronecker_table(delta0, N):
    """ chi(n) = (delta0 / n) for 0 <= n <= N, sieved with numpy. """
    sieve = np.ones(N + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, isqrt(N) + 1):
        if sieve[p]:
            sieve[p * p::p] = False
    chi = np.ones(N + 1, dtype=np.int8)
    chi[0] = 0
    for p in np.nonzero(sieve)[0]:
        p = int(p)
        cp = kronecker(delta0, p)
        if cp == 1:
            continue
        if cp == 0:
            chi[p::p] = 0
            continue
        pk = p
        while pk <= N:
            chi[pk::pk] *= -1
            pk *= p
    return chi


def class_number_analytic(delta0, logger=None):
    """ Class number of the maximal order from the erfc / E1 series for h*R.

    Uses 2hR = sum_n chi(n) (sqrt(D)/n erfc(n sqrt(pi/D)) + E1(pi n^2/D)).
    """
    D = float(delta0)
    N = int(6.5 * sqrt(D / pi)) + 10
    chi = _kronecker_table(delta0, N).astype(np.float64)
    n = np.arange(1, N + 1, dtype=np.float64)
    terms = chi[1:] * (sqrt(D) / n * erfc(n * sqrt(pi / D)) + exp1(pi * n * n / D))
    hR = 0.5 * np.sum(terms)
    R = float(regulator(delta0, prec=64))
    h_float = hR / R
    h = int(round(h_float))
    if logger:
        logger.debug("analytic class number of {}: hR={} R={} h~{}".format(delta0, hR, R, h_float))
    if h < 1 or abs(h_float - h) > 0.05:
        raise ConvergenceError("analytic class number for {} did not round cleanly ({})"
                               .format(delta0, h_float))
    return h


def _wide_classes(delta, logger=None):
    """ GL2(Z) classes of primitive forms of discriminant delta, by reduction cycles. """
    from .quadforms import reduced_forms, reduction_cycle, QuadForm

    forms = reduced_forms(delta)
    parent = {Q: Q for Q in forms}

    def find(Q):
        while parent[Q] != Q:
            parent[Q] = parent[parent[Q]]
            Q = parent[Q]
        return Q

    def union(P, Q):
        (P, Q) = (find(P), find(Q))
        if P != Q:
            parent[max(P, Q)] = min(P, Q)

    seen = set()
    for Q in forms:
        if Q in seen:
            continue
        cycle = reduction_cycle(Q)
        seen.update(cycle)
        for R in cycle:
            union(Q, R)
    for Q in forms:
        union(Q, QuadForm(-Q.a, Q.b, -Q.c))
    classes = sorted(set(find(Q) for Q in forms))
    if logger:
        logger.debug("discriminant {}: {} reduced forms, {} wide classes".format(delta, len(forms), len(classes)))
    return classes


def class_number_fundamental(delta0, method="auto", enum_bound=None, logger=None):
    """ Wide class number of the maximal order of Q(sqrt delta0). """
    if not is_fundamental(delta0):
        raise DomainError("{} is not a fundamental discriminant".format(delta0))
    enum_bound = enum_bound or defaults.enum_bound
    if method == "auto":
        method = "enumerate" if delta0 <= enum_bound else "analytic"
    if method == "enumerate":
        return len(_wide_classes(delta0, logger=logger))
    if method == "analytic":
        return class_number_analytic(delta0, logger=logger)
    raise DomainError("unknown class number method {!r}".format(method))


def unit_index(delta0, f):
    """ Index [O_1^x : O_f^x] of the unit group of the order of conductor f. """
    if f == 1:
        return 1
    (eps, eps_bar, norm) = fundamental_unit(delta0)
    (t, u) = (int(eps.trace()), int(2 * eps.y))
    return lucas_index(t, norm, u, f)


def class_number_order(delta0, f, method="auto", enum_bound=None, logger=None):
    """ Wide class number of the order of conductor f in Q(sqrt delta0).

    Arguments:
        delta0: (int) fundamental discriminant
        f: (int) conductor
        method: (str) "enumerate", "formula" or "auto" (enumerate up to the
            configured discriminant bound, formula beyond it)
        enum_bound: (int) largest discriminant handled by enumeration

    Returns:
        h: (int) class number
        classes: (list) one reduced QuadForm per class, or None on the
            formula path
    """
    if not is_fundamental(delta0):
        raise DomainError("{} is not a fundamental discriminant".format(delta0))
    if f < 1:
        raise DomainError("conductor must be positive, got {}".format(f))
    enum_bound = enum_bound or defaults.enum_bound
    delta = f * f * delta0
    if method == "auto":
        method = "enumerate" if delta <= enum_bound else "formula"
    if method == "enumerate":
        if delta > enum_bound:
            raise BoundError("discriminant {} exceeds the enumeration bound {}".format(delta, enum_bound))
        classes = _wide_classes(delta, logger=logger)
        return (len(classes), classes)
    if method != "formula":
        raise DomainError("unknown class number method {!r}".format(method))

    h0 = class_number_fundamental(delta0, enum_bound=enum_bound, logger=logger)
    numerator = Fraction(h0 * f)
    for p in factorint(f):
        numerator *= 1 - Fraction(kronecker(delta0, p), p)
    h = numerator / unit_index(delta0, f)
    if h.denominator != 1:
        raise ConvergenceError("order class number formula gave {} for ({}, {})".format(h, delta0, f))
    return (int(h), None)


def orbit_count(d, logger=None):
    """ Number of extended Clifford orbits of rank-1 tuples in dimension d.

    Sum of class numbers h(f^2 delta0) over the conductors f dividing f_j.
    """
    from .towers import pair_to_triple, conductor_sequence

    triple = pair_to_triple(d, 1)
    if triple is None:
        raise DomainError("(d, r) = ({}, 1) is not admissible".format(d))
    (delta0, j, m) = triple
    f_j = conductor_sequence(delta0, j)[-1]
    total = 0
    for f in divisors(f_j):
        (h, _) = class_number_order(delta0, f, logger=logger)
        total += h
    return total
