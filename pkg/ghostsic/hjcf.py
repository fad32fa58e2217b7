""" Hirzebruch-Jung continued fractions and SL2(Z) words.

[k1, k2, k3, ...]_- = k1 - 1/(k2 - 1/(k3 - ...)). Quadratic irrationals are
expanded through exact integer orbits of forms, so periods never depend on
floating point.
"""
from collections import namedtuple
from fractions import Fraction
from math import isqrt

from mpmath import mp, mpf

from .config import defaults
from .errors import DomainError, PrecisionError
from .quadforms import Mat2Z, QuadForm, I, S, T, apply_gl2, reduce, reduction_cycle, J


HJWord = namedtuple("HJWord", ["exponents", "n", "endpoints"])
HJPeriod = namedtuple("HJPeriod", ["preperiod", "period"])


def hj_expand(x, terms, prec=None):
    """ First terms of the HJ expansion of a real number.

    Arguments:
        x: (mpf) irrational number
        terms: (int) number of partial quotients
        prec: (int) bits to which x is known

    Returns:
        ks: (list) partial quotients, all >= 2 after the first
    """
    prec = prec or defaults.prec
    if terms < 1:
        raise DomainError("hj_expand needs at least one term")
    ks = []
    lost = 0.0
    with mp.workprec(prec + defaults.guard):
        x = mpf(x)
        for _ in range(terms):
            k = int(mp.ceil(x))
            gap = k - x
            if gap == 0 or mp.log(gap, 2) < -(prec - lost - defaults.guard):
                raise PrecisionError("HJ expansion of {} exhausted {} bits after {} terms"
                                     .format(mp.nstr(x, 10), prec, len(ks)),
                                     needed_bits=2 * prec)
            ks.append(k)
            x = 1 / gap
            lost += 2 * float(mp.log(abs(x), 2)) if abs(x) > 1 else 0.0
            if lost > prec - defaults.guard:
                raise PrecisionError("HJ expansion lost {:.0f} of {} bits".format(lost, prec),
                                     needed_bits=2 * prec)
    return ks


def hj_value(ks, prec=None):
    """ Value of the finite expansion [k1, ..., kn]_-. """
    prec = prec or defaults.prec
    with mp.workprec(prec):
        value = mpf(ks[-1])
        for k in reversed(ks[:-1]):
            value = k - 1 / value
        return value


def _floor_root(Q):
    """ floor(rho_+) of a form, in exact integers. """
    (a, b) = (Q.a, Q.b)
    s = isqrt(Q.discriminant())
    if a > 0:
        return (s - b) // (2 * a)
    return (b - s - 1) // (-2 * a)


def _hj_step(Q):
    """ Partial quotient k and the form of the complete quotient 1/(k - rho_+). """
    k = _floor_root(Q) + 1
    (a, b, c) = Q
    return (k, QuadForm(a * k * k + b * k + c, -2 * a * k - b, a))


def periodic_expansion(Q):
    """ Preperiod and period of the HJ expansion of rho_+, from the orbit of forms. """
    seen = {}
    ks = []
    while Q not in seen:
        seen[Q] = len(ks)
        (k, Q) = _hj_step(Q)
        ks.append(k)
    start = seen[Q]
    return HJPeriod(ks[:start], ks[start:])


def word_matrix(exponents):
    """ T^r1 S T^r2 S ... T^rn S T^r(n+1). """
    M = I
    for r in exponents[:-1]:
        M = M * T ** r * S
    return M * T ** exponents[-1]


def word_decompose(M):
    """ Canonical word T^r1 S ... T^rn S T^r(n+1) of a matrix with positive lower-left entry.

    Arguments:
        M: (Mat2Z) determinant-one matrix, gamma > 0

    Returns:
        word: (HJWord) exponents, length n and the endpoints -delta_i/gamma_i
            of the nested domains of the suffixes
    """
    if M.det() != 1:
        raise DomainError("word_decompose needs det 1, got {}".format(M.det()))
    if M.gamma <= 0:
        raise DomainError("word_decompose needs a positive lower-left entry, got {}".format(M.gamma))
    exponents = []
    endpoints = []
    (al, be, ga, de) = M
    while ga != 0:
        endpoints.append(Fraction(-de, ga))
        r = -((-al) // ga)  # ceil(alpha/gamma)
        exponents.append(r)
        (al, be, ga, de) = (ga, de, r * ga - al, r * de - be)
    exponents.append(be)  # remaining factor is T^beta
    return HJWord(tuple(exponents), len(exponents) - 1, tuple(endpoints))


def _root_below(Q, k):
    """ rho_+ < 1/k for a form with a > 0, in exact integers. """
    rhs = 2 * Q.a + k * Q.b
    return rhs > 0 and k * k * Q.discriminant() < rhs * rhs


def euclid_to_hj(Q):
    """ Map a Gauss-reduced form with a > 0 into W_HJ.

    With 1/(n+2) < rho_+ < 1/(n+1), returns Q_{L_n^-1} for
    L_n = [[n, -1], [n+1, -1]], whose roots are L_n applied to those of Q.
    """
    if Q.a <= 0:
        raise DomainError("euclid_to_hj needs a > 0, got {}".format(Q))
    n = 0
    while _root_below(Q, n + 2):
        n += 1
    return apply_gl2(Q, Mat2Z(n, -1, n + 1, -1).inverse())


def is_hj_reduced(Q):
    """ rho_+ > 1 and 0 < rho_- < 1, i.e. a > 0, Q(0, 1) > 0 and Q(1, 1) < 0. """
    (a, b, c) = Q
    return a > 0 and c > 0 and a + b + c < 0


def hj_reduced_cycle(Q):
    """ Forms met along the purely periodic part of the expansion of Q. """
    expansion = periodic_expansion(Q)
    R = Q
    for _ in expansion.preperiod:
        (_, R) = _hj_step(R)
    cycle = [R]
    for _ in expansion.period[:-1]:
        (_, R) = _hj_step(R)
        cycle.append(R)
    return cycle


def minimal_form(class_reps):
    """ HJ-reduced representative of minimal period length in the GL2(Z) class.

    Ties are broken by the smallest (a, |b|, c).
    """
    if not class_reps:
        raise DomainError("minimal_form needs at least one form")
    delta = class_reps[0].discriminant()
    if any(Q.discriminant() != delta for Q in class_reps):
        raise DomainError("minimal_form needs forms of one discriminant")
    candidates = set()
    for Q in class_reps:
        for R in (Q, apply_gl2(Q, J)):
            for E in reduction_cycle(reduce(R)):
                if E.a < 0:
                    E = apply_gl2(E, J)
                if E.a > 0:
                    for H in hj_reduced_cycle(euclid_to_hj(E)):
                        candidates.add(H)

    def key(H):
        return (len(periodic_expansion(H).period), H.a, abs(H.b), H.c)

    return min(candidates, key=key)


def stabilizer_word(Q):
    """ N M N^-1 from the preperiod word N and period word M of rho_+. """
    expansion = periodic_expansion(Q)
    N = I
    for k in expansion.preperiod:
        N = N * T ** k * S
    M = I
    for k in expansion.period:
        M = M * T ** k * S
    return N * M * N.inverse()
