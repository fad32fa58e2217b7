""" Integral binary quadratic forms and 2x2 integer matrices.

Forms are stored as the integer triple (a, b, c) for a x^2 + b x y + c y^2.
GL2(Z) acts on the right by Q_M = det(M) M^T Q M.
"""
from collections import namedtuple
from fractions import Fraction
from math import gcd, isqrt

from mpmath import mp
from sympy import divisors

from .config import defaults
from .errors import DomainError


def _sgn(x):
    return (x > 0) - (x < 0)


class Mat2Z(namedtuple("Mat2Z", ["alpha", "beta", "gamma", "delta"])):
    """ Integer matrix [[alpha, beta], [gamma, delta]]. """
    __slots__ = ()

    def __new__(cls, alpha, beta, gamma, delta):
        return super(Mat2Z, cls).__new__(cls, int(alpha), int(beta), int(gamma), int(delta))

    @classmethod
    def from_rows(cls, rows):
        ((a, b), (c, d)) = rows
        return cls(a, b, c, d)

    def rows(self):
        return [[self.alpha, self.beta], [self.gamma, self.delta]]

    def __mul__(self, other):
        if isinstance(other, Mat2Z):
            (a, b, c, d) = self
            (e, f, g, h) = other
            return Mat2Z(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)
        if isinstance(other, int):
            return Mat2Z(*[other * x for x in self])
        return NotImplemented

    __rmul__ = __mul__

    def __neg__(self):
        return Mat2Z(-self.alpha, -self.beta, -self.gamma, -self.delta)

    def __add__(self, other):
        return Mat2Z(*[x + y for (x, y) in zip(self, other)])

    def __sub__(self, other):
        return Mat2Z(*[x - y for (x, y) in zip(self, other)])

    def __pow__(self, n):
        result = I
        base = self if n >= 0 else self.inverse()
        n = abs(n)
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def det(self):
        return self.alpha * self.delta - self.beta * self.gamma

    def trace(self):
        return self.alpha + self.delta

    def inverse(self):
        """ Inverse of a unimodular matrix. """
        det = self.det()
        if det not in (1, -1):
            raise DomainError("matrix {} is not invertible over Z".format(self.rows()))
        return Mat2Z(det * self.delta, -det * self.beta, -det * self.gamma, det * self.alpha)

    def sign(self):
        return _sgn(self.gamma) if self.gamma else _sgn(self.delta)

    def j(self, tau):
        """ Automorphy factor gamma*tau + delta. """
        return self.gamma * tau + self.delta

    def act(self, tau):
        """ Moebius action (alpha*tau + beta)/(gamma*tau + delta). """
        return (self.alpha * tau + self.beta) / (self.gamma * tau + self.delta)

    def apply(self, p):
        """ Matrix times the column vector p. """
        return (self.alpha * p[0] + self.beta * p[1], self.gamma * p[0] + self.delta * p[1])

    def mod(self, n):
        return Mat2Z(*[x % n for x in self])


I = Mat2Z(1, 0, 0, 1)
S = Mat2Z(0, -1, 1, 0)
T = Mat2Z(1, 1, 0, 1)
J = Mat2Z(1, 0, 0, -1)


class QuadForm(namedtuple("QuadForm", ["a", "b", "c"])):
    """ Primitive indefinite irreducible form a x^2 + b x y + c y^2. """
    __slots__ = ()

    def __new__(cls, a, b, c):
        (a, b, c) = (int(a), int(b), int(c))
        if gcd(gcd(a, b), c) != 1:
            raise DomainError("form <{},{},{}> is not primitive".format(a, b, c))
        delta = b * b - 4 * a * c
        if delta <= 0 or isqrt(delta) ** 2 == delta:
            raise DomainError("form <{},{},{}> has discriminant {}, not a positive non-square"
                              .format(a, b, c, delta))
        return super(QuadForm, cls).__new__(cls, a, b, c)

    @classmethod
    def _relaxed(cls, a, b, c):
        # reducible or definite forms for internal bookkeeping only
        return super(QuadForm, cls).__new__(cls, int(a), int(b), int(c))

    @classmethod
    def parse(cls, text):
        """ Form from the "a,b,c" notation used on the command line. """
        try:
            (a, b, c) = [int(x) for x in text.split(",")]
        except ValueError:
            raise DomainError("cannot parse form {!r}, expected a,b,c".format(text))
        return cls(a, b, c)

    def __str__(self):
        return "<{},{},{}>".format(self.a, self.b, self.c)

    def __call__(self, x, y):
        return self.a * x * x + self.b * x * y + self.c * y * y

    def discriminant(self):
        return self.b * self.b - 4 * self.a * self.c

    def sign(self):
        return _sgn(self.a)

    def conductor(self):
        from .numtheory import fundamental_discriminant
        return fundamental_discriminant(self.discriminant()).f

    def fundamental_discriminant(self):
        from .numtheory import fundamental_discriminant
        return fundamental_discriminant(self.discriminant()).delta0


def apply_gl2(Q, M):
    """ Q_M = det(M) M^T Q M, repacked as a triple.

    Arguments:
        Q: (QuadForm) the form
        M: (Mat2Z) unimodular matrix

    Returns:
        Q_M: (QuadForm) transformed form, same discriminant
    """
    det = M.det()
    if det not in (1, -1):
        raise DomainError("apply_gl2 needs det = +-1, got {}".format(det))
    (a, b, c) = Q
    (al, be, ga, de) = M
    a2 = det * (a * al * al + b * al * ga + c * ga * ga)
    b2 = det * (2 * a * al * be + b * (al * de + be * ga) + 2 * c * ga * de)
    c2 = det * (a * be * be + b * be * de + c * de * de)
    try:
        return QuadForm(a2, b2, c2)
    except DomainError:
        return QuadForm._relaxed(a2, b2, c2)


def roots(Q, prec=None):
    """ rho_+ and rho_- = (-b +- sqrt(Delta))/(2a) to prec bits. """
    prec = prec or defaults.prec
    with mp.workprec(prec):
        root = mp.sqrt(Q.discriminant())
        return ((-Q.b + root) / (2 * Q.a), (-Q.b - root) / (2 * Q.a))


def canonical_rep(Q, kappa):
    """ Image of kappa = x + y sqrt(delta0) under eta_Q(kappa) = x I + (2y/f) S Q.

    Arguments:
        Q: (QuadForm) form of conductor f in Q(sqrt delta0)
        kappa: (QuadInt) field element

    Returns:
        M: (Mat2Z) if the image is integral, else a 4-tuple of Fractions
    """
    from .numtheory import fundamental_discriminant

    disc = fundamental_discriminant(Q.discriminant())
    if kappa.delta0 != disc.delta0:
        raise DomainError("element of Q(sqrt {}) used with a form of Q(sqrt {})"
                          .format(kappa.delta0, disc.delta0))
    (x, y, f) = (kappa.x, kappa.y, disc.f)
    (a, b, c) = Q
    entries = (x - y * b / f, -2 * y * c / f, 2 * y * a / f, x + y * b / f)
    if all(Fraction(e).denominator == 1 for e in entries):
        return Mat2Z(*[int(e) for e in entries])
    return tuple(Fraction(e) for e in entries)


def principal_form(delta0, f=1):
    """ Principal form <1, b, (b^2 - Delta)/4> with b just below -sqrt(Delta). """
    delta = f * f * delta0
    s = isqrt(delta)
    b = -(s + 1) if (s + 1 - delta) % 2 == 0 else -(s + 2)
    return QuadForm(1, b, (b * b - delta) // 4)


def stabilizers(t):
    """ Generators of the stability groups of the form of an admissible tuple.

    Arguments:
        t: (AdmissibleTuple) the tuple

    Returns:
        L: (Mat2Z) generator of S(Q)/{+-I}, image of the smallest unit in O_f
        L_pos: (Mat2Z) L or L^2, whichever has determinant 1
        L_z: (Mat2Z) ((d_j - 1)/2) I + (f_j/f) S Q
        A: (Mat2Z) L_z^(2m+1), generator of the congruence stabilizer
    """
    from .numtheory import fundamental_unit, unit_index

    if t.f_j % t.f:
        raise DomainError("conductor {} does not divide f_j = {}".format(t.f, t.f_j))
    (eps, eps_bar, norm) = fundamental_unit(t.delta0)
    L = canonical_rep(t.Q, eps ** unit_index(t.delta0, t.f))
    L_pos = L if L.det() == 1 else L * L
    L_z = canonical_rep(t.Q, eps_bar ** t.j)
    if not isinstance(L_z, Mat2Z):
        raise DomainError("form {} is not admissible at level j = {}".format(t.Q, t.j))
    A = L_z ** (2 * t.m + 1)
    return (L, L_pos, L_z, A)


def is_reduced(Q):
    """ Gauss reduction |sqrt(Delta) - 2|a|| < b < sqrt(Delta), in exact integers. """
    s = isqrt(Q.discriminant())
    return 0 < Q.b <= s and s - Q.b + 1 <= 2 * abs(Q.a) <= s + Q.b


def rho_step(Q):
    """ One step of the reduction operator, Q -> Q o [[0, -1], [1, t]]. """
    (a, b, c) = Q
    delta = Q.discriminant()
    s = isqrt(delta)
    n = 2 * abs(c)
    if abs(c) > s:
        r = (-b) % n
        if r > abs(c):
            r -= n
    else:
        r = s - ((s + b) % n)
    return QuadForm._relaxed(c, r, (r * r - delta) // (4 * c))


def reduce(Q):
    """ First reduced form reached by the reduction operator. """
    steps = 0
    while not is_reduced(Q):
        Q = rho_step(Q)
        steps += 1
        if steps > 10000 + Q.discriminant():
            raise DomainError("reduction of {} did not terminate".format(Q))
    return QuadForm(*Q)


def reduction_cycle(Q):
    """ Cycle of reduced forms through a reduced Q. """
    Q = reduce(Q)
    cycle = [Q]
    R = QuadForm(*rho_step(Q))
    while R != Q:
        cycle.append(R)
        R = QuadForm(*rho_step(R))
    return cycle


def reduced_forms(delta):
    """ All primitive reduced forms of discriminant delta. """
    s = isqrt(delta)
    forms = []
    for b in range(1, s + 1):
        if (b - delta) % 2:
            continue
        ac = (delta - b * b) // 4
        for a in divisors(ac):
            if s - b + 1 <= 2 * a <= s + b:
                c = ac // a
                for sa in (1, -1):
                    if gcd(gcd(a, b), c) == 1:
                        forms.append(QuadForm(sa * a, b, -sa * c))
    return sorted(forms)

