""" Shintani-Faddeev cocycles.

The Jacobi cocycle sigma_M(z, tau) is a ratio of infinite q-Pochhammer
symbols on the upper half-plane. At real multiplication points it is
evaluated instead through the word of M in S and T, each sigma_S factor
coming from the integral representation of the double sine.

All functions take prec in bits and work internally with defaults.guard
extra bits.
"""
from collections import namedtuple
from fractions import Fraction
from math import ceil

from mpmath import mp, mpf, mpc
from tqdm import tqdm

from .config import defaults
from .errors import DomainError, PoleError, ConvergenceError
from .hjcf import word_decompose
from .quadforms import I, T, S, roots, stabilizers


RMPoint = namedtuple("RMPoint", ["rho", "A", "word", "word_inv"])


def _e(x):
    """ e^{2 pi i x}. """
    return mp.expjpi(2 * x)


def _is_zero(x, prec):
    return abs(x) < mpf(2) ** (-(prec - defaults.guard // 2))


def qpoch_finite(z, tau, n, prec=None):
    """ Finite variant q-Pochhammer symbol (z, tau)_n.

    Arguments:
        z: (mpc) argument
        tau: (mpc) step
        n: (int) length; negative n gives the inverse product over j = n..-1
        prec: (int) working precision in bits

    Returns:
        value: (mpc)
    """
    prec = prec or defaults.prec
    with mp.workprec(prec + defaults.guard):
        if n == 0:
            return mpc(1)
        value = mpc(1)
        if n > 0:
            for j in range(n):
                value *= 1 - _e(z + j * tau)
            return value
        for j in range(n, 0):
            factor = 1 - _e(z + j * tau)
            if _is_zero(factor, prec):
                raise PoleError("q-Pochhammer pole at index {}".format(j), index=j)
            value /= factor
        return value


def qpoch_inf(z, tau, prec=None):
    """ Infinite variant q-Pochhammer symbol on the upper half-plane. """
    prec = prec or defaults.prec
    with mp.workprec(prec + defaults.guard):
        (z, tau) = (mpc(z), mpc(tau))
        if tau.imag <= 0:
            raise DomainError("qpoch_inf needs Im(tau) > 0, got {}".format(tau))
        eps = mpf(2) ** (-(prec + defaults.guard))
        q = _e(tau)
        term = _e(z)
        value = mpc(1)
        j = 0
        while abs(term) > eps or j == 0:
            value *= 1 - term
            term *= q
            j += 1
            if j > 10 ** 6:
                raise ConvergenceError("q-Pochhammer tail did not decay for tau = {}".format(tau))
        return value


def _dbs_integrand(a, tau, t, prec):
    """ (sinh(a t)/(2 sinh(t/2) sinh(tau t/2)) - 2a/(tau t))/t with the t -> 0 limit. """
    if t < mpf(2) ** (-(prec // 2)):
        return (2 * a / tau) * (a * a / 6 - (1 + tau * tau) / 24)
    extra = int(2 * mp.log(1 / t, 2)) + 10 if t < 1 else 0
    with mp.extraprec(extra):
        ratio = mp.sinh(a * t) / (2 * mp.sinh(t / 2) * mp.sinh(tau * t / 2))
        return (ratio - 2 * a / (tau * t)) / t


def double_sine(w, tau, prec=None, logger=None):
    """ Double sine dbs(w, tau) from its integral representation.

    Valid for Re(tau) > 0 and -1 < Re(w - 1) < Re(tau). The quadrature runs
    over [0, T] with T from the decay rate of the sinh ratio, and the
    algebraic tail of the subtracted term is added in closed form.

    The quadrature is accepted once mpmath's error estimate is below
    2^(-prec/2), so values are good to about half of prec bits. Ghost
    overlaps inherit this: the idempotency residual of a ghost fiducial
    falls only to about 2^(-prec/2), and ghost.tolerance gates at
    2^(8 - prec/2). Do not tighten tolerance() past that gate.
    """
    prec = prec or defaults.prec
    work = prec + defaults.guard
    with mp.workprec(work):
        (w, tau) = (mpc(w), mpc(tau))
        z = w - 1
        if tau.real <= 0 or not (-1 < z.real < tau.real):
            raise DomainError("double_sine outside its strip: w = {}, tau = {}"
                              .format(mp.nstr(w, 8), mp.nstr(tau, 8)))
        a = (tau - 1 - 2 * z) / 2
        if abs(a) == 0:
            return mpc(1)
        kappa = (1 + tau.real) / 2 - abs(a.real)
        cutoff = work * mp.log(2) / kappa + 10
        points = [mpf(0)] + [mpf(2) ** k for k in range(-4, int(ceil(mp.log(cutoff, 2))))] + [cutoff]
        points = sorted(set(p for p in points if p <= cutoff))
        (integral, err) = mp.quad(lambda t: _dbs_integrand(a, tau, t, work), points,
                                  error=True, maxdegree=defaults.quad_degree)
        integral -= 2 * a / (tau * cutoff)
        if err > mpf(2) ** (-(prec // 2)):
            raise ConvergenceError("double sine quadrature error {} at w = {}, tau = {}"
                                   .format(mp.nstr(err, 5), mp.nstr(w, 8), mp.nstr(tau, 8)))
        if logger:
            logger.debug("dbs quadrature over [0, {}] error {}".format(mp.nstr(cutoff, 5), mp.nstr(err, 3)))
        return mp.exp(-integral)


def sigma_direct(M, z, tau, prec=None):
    """ sigma_M(z, tau) as the q-Pochhammer ratio, tau in the upper half-plane. """
    prec = prec or defaults.prec
    with mp.workprec(prec + defaults.guard):
        (z, tau) = (mpc(z), mpc(tau))
        j = M.j(tau)
        return qpoch_inf(z / j, M.act(tau), prec) / qpoch_inf(z, tau, prec)


def sigma_S(z, tau, prec=None):
    """ sigma_S(z, tau).

    On the upper half-plane with Re(tau) <= 0 this is the q-Pochhammer ratio;
    otherwise z is shifted by an integer m into the centre of the double sine
    strip and sigma_S(z0 + m) = sigma_S(z0) / (z0/tau, -1/tau)_{-m}.
    """
    prec = prec or defaults.prec
    with mp.workprec(prec + defaults.guard):
        (z, tau) = (mpc(z), mpc(tau))
        if tau.imag > 0 and tau.real <= 0:
            return sigma_direct(S, z, tau, prec)
        if tau.real <= 0:
            raise DomainError("sigma_S needs Re(tau) > 0 off the upper half-plane, got {}".format(tau))
        m = int(mp.nint(z.real - (tau.real - 1) / 2))
        z0 = z - m
        phase = mp.expjpi((6 * z0 * z0 + 6 * (1 - tau) * z0 + tau * tau - 3 * tau + 1) / (12 * tau))
        value = phase / double_sine(z0 + 1, tau, prec)
        if m:
            value /= qpoch_finite(z0 / tau, -1 / tau, -m, prec)
        return value


def sigma_M(M, z, tau, prec=None):
    """ sigma_M(z, tau) along the S, T word of M.

    Arguments:
        M: (Mat2Z) determinant-one matrix
        z: (mpc) elliptic argument
        tau: (mpc) point of the domain of M
        prec: (int) bits

    Returns:
        value: (mpc)
    """
    prec = prec or defaults.prec
    if M.det() != 1:
        raise DomainError("sigma_M needs det 1, got {}".format(M.det()))
    with mp.workprec(prec + defaults.guard):
        (z, tau) = (mpc(z), mpc(tau))
        if M.gamma == 0:
            if M.alpha == 1:
                return mpc(1)
            if tau.imag > 0:
                return sigma_direct(M, z, tau, prec)
            raise DomainError("sigma of {} is only defined on the upper half-plane".format(M.rows()))
        if M.gamma < 0:
            Minv = M.inverse()
            return 1 / sigma_M(Minv, z / M.j(tau), M.act(tau), prec)
        word = word_decompose(M)
        exps = word.exponents
        value = mpc(1)
        for k in range(1, word.n + 1):
            # L_{k+1} = T^{r_{k+1}} S ... S T^{r_{n+1}}
            L_k = I
            for r in exps[k:-1]:
                L_k = L_k * T ** r * S
            L_k = L_k * T ** exps[-1]
            value *= sigma_S(z / L_k.j(tau), L_k.act(tau), prec)
        return value


def _pairing(r, tau):
    """ <r, (tau, 1)> = r2 tau - r1. """
    return mpf(r[1].numerator) / r[1].denominator * tau - mpf(r[0].numerator) / r[0].denominator


def _integral_shift(r, M):
    r = (Fraction(r[0]), Fraction(r[1]))
    Mr = M.apply(r)
    n = (r[0] - Mr[0], r[1] - Mr[1])
    if n[0].denominator != 1 or n[1].denominator != 1:
        raise DomainError("{} is not in Gamma_r for r = {}".format(M.rows(), r))
    return (r, int(n[1]))


def shin(r, M, tau, prec=None):
    """ Shintani-Faddeev modular cocycle shin^r_M(tau).

    Arguments:
        r: (tuple) rational 2-vector with (M - I) r integral
        M: (Mat2Z) determinant-one matrix
        tau: (mpf, mpc or RMPoint) point of the domain of M
        prec: (int) bits

    Returns:
        value: (mpc) sigma_M(<r, tau>, tau) / (<r, tau>/j_M(tau), M tau)_n with
            n = ((I - M) r)_2
    """
    prec = prec or defaults.prec
    if isinstance(tau, RMPoint):
        tau = tau.rho
    (r, n) = _integral_shift(r, M)
    with mp.workprec(prec + defaults.guard):
        tau = mpc(tau)
        z = _pairing(r, tau)
        value = sigma_M(M, z, tau, prec)
        if n:
            denom = qpoch_finite(z / M.j(tau), M.act(tau), n, prec)
            if _is_zero(denom, prec):
                raise PoleError("shin^{}_{} has a pole".format(r, M.rows()), index=n)
            value /= denom
        return value


def shin_coboundary(r, M, tau, prec=None):
    """ shin^r_M(tau) = (<r, M tau>, M tau)_inf / (<r, tau>, tau)_inf on the upper half-plane. """
    prec = prec or defaults.prec
    (r, n) = _integral_shift(r, M)
    with mp.workprec(prec + defaults.guard):
        tau = mpc(tau)
        Mtau = M.act(tau)
        return qpoch_inf(_pairing(r, Mtau), Mtau, prec) / qpoch_inf(_pairing(r, tau), tau, prec)


def rm_point(t, prec=None):
    """ Fixed point rho_+ of the form of t with the words of A and A^-1. """
    prec = prec or defaults.prec
    A = stabilizers(t)[3]
    (rho, _) = roots(t.Q, prec + defaults.guard)
    word = word_decompose(A) if A.gamma > 0 else None
    word_inv = word_decompose(A.inverse()) if A.gamma < 0 else None
    return RMPoint(rho, A, word, word_inv)


def shin_table(t, B, prec=None, point=None, progbar=False, logger=None):
    """ shin^{q/d}_B(rho) for q in [0, d)^2.

    Arguments:
        t: (AdmissibleTuple) tuple, fixing d and rho
        B: (Mat2Z) A or A^-1
        prec: (int) bits
        point: (RMPoint) precomputed fixed point

    Returns:
        table: (dict) q -> mpc
    """
    prec = prec or defaults.prec
    point = point or rm_point(t, prec)
    d = t.d
    grid = [(q1, q2) for q1 in range(d) for q2 in range(d)]
    table = {}
    for q in (tqdm(grid) if progbar else grid):
        table[q] = shin((Fraction(q[0], d), Fraction(q[1], d)), B, point.rho, prec)
    if logger:
        logger.debug("shin table for B = {} at d = {}: {} entries".format(B.rows(), d, len(table)))
    return table
