""" Roots of unity, the Rademacher invariant and the multiplier characters.

Phases are exact: a RootOfUnity stores its angle as a Fraction of a full
turn and only becomes a complex number on request.
"""
from fractions import Fraction

from mpmath import mp, mpf, mpc

from .config import defaults
from .errors import DomainError
from .numtheory import dedekind_sum


def _sgn(x):
    return (x > 0) - (x < 0)


class RootOfUnity(object):
    """ e^{2 pi i k}, k a Fraction reduced into [0, 1). """
    __slots__ = ("turn",)

    def __init__(self, turn):
        self.turn = Fraction(turn) % 1

    @classmethod
    def sign(cls, s):
        return cls(0 if s > 0 else Fraction(1, 2))

    def __mul__(self, other):
        return RootOfUnity(self.turn + other.turn)

    def __pow__(self, n):
        return RootOfUnity(self.turn * n)

    def inverse(self):
        return RootOfUnity(-self.turn)

    def __eq__(self, other):
        return isinstance(other, RootOfUnity) and self.turn == other.turn

    def __hash__(self):
        return hash(self.turn)

    def __repr__(self):
        return "RootOfUnity({})".format(self.turn)

    def order(self):
        return self.turn.denominator

    def value(self, prec=None):
        with mp.workprec(prec or defaults.prec):
            return mp.expjpi(2 * mpf(self.turn.numerator) / self.turn.denominator)


def rademacher(M):
    """ Rademacher class invariant Psi(M) of M in SL2(Z).

    Arguments:
        M: (Mat2Z) determinant-one matrix

    Returns:
        Psi: (Fraction) b/d when c = 0, else an integer
    """
    if M.det() != 1:
        raise DomainError("rademacher needs det 1, got {}".format(M.det()))
    (a, b, c, d) = M
    if c == 0:
        return Fraction(b, d)
    tr = a + d
    return Fraction(tr, c) - 3 * _sgn(c * tr) - 12 * _sgn(c) * dedekind_sum(a, c)


def psi(M):
    """ Eta multiplier e^{pi i Psi(M)/12} as a root of unity. """
    return RootOfUnity(rademacher(M) / 24)


def chi_r(r, M):
    """ Theta multiplier chi_r(M) = (-1)^(1 + delta) e^{-pi i <Mr, r>}.

    Arguments:
        r: (tuple) rational 2-vector
        M: (Mat2Z) matrix with (M - I) r integral

    Returns:
        chi: (RootOfUnity)
    """
    r = (Fraction(r[0]), Fraction(r[1]))
    Mr = M.apply(r)
    diff = (Mr[0] - r[0], Mr[1] - r[1])
    if diff[0].denominator != 1 or diff[1].denominator != 1:
        raise DomainError("{} does not fix r = {} modulo Z^2".format(M.rows(), r))
    delta = 1 if diff[0] % 2 == 0 and diff[1] % 2 == 0 else 0
    symp = Mr[1] * r[0] - Mr[0] * r[1]
    return RootOfUnity(Fraction(1 + delta, 2) - symp / 2)


def sf_phase(t, p, A=None):
    """ Shintani-Faddeev phase phi_p(t) as a root of unity.

    (-1)^{s_d(p)} e^{-pi i Psi(A)/12} xi_d^{-(f_jm/f) Q(p)}, with
    s_d(p) = d + (1+d)(1+p1)(1+p2) and xi_d = -e^{pi i/d}.
    """
    if A is None:
        from .quadforms import stabilizers
        A = stabilizers(t)[3]
    d = t.d
    (p1, p2) = p
    s_d = d + (1 + d) * (1 + p1) * (1 + p2)
    xi_exponent = -Fraction(t.f_jm, t.f) * t.Q(p1, p2)
    # xi_d = e^{pi i (d+1)/d}
    turn = Fraction(s_d, 2) - rademacher(A) / 24 + xi_exponent * Fraction(d + 1, 2 * d)
    return RootOfUnity(turn)


def eta(tau, prec=None, terms=None):
    """ Dedekind eta e^{pi i tau/12} prod (1 - q^n), q = e^{2 pi i tau}, on the upper half-plane. """
    prec = prec or defaults.prec
    with mp.workprec(prec + defaults.guard):
        tau = mpc(tau)
        if tau.imag <= 0:
            raise DomainError("eta needs Im(tau) > 0, got {}".format(tau))
        q = mp.expjpi(2 * tau)
        if terms is None:
            terms = int((prec + defaults.guard) * mp.log(2) / (2 * mp.pi * tau.imag)) + 2
        product = mpc(1)
        qn = mpc(1)
        for _ in range(terms):
            qn *= q
            product *= 1 - qn
        return +(mp.expjpi(tau / 12) * product)
