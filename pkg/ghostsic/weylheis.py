""" Weyl-Heisenberg displacement operators and Clifford unitaries.

Every operator here is built from exact phase exponents: the entry of D_p
in row j, column k is xi_d^e with e computed as an integer mod dbar, so a
Galois twist xi_d -> xi_d^k acts exactly on the exponents.
"""
from math import gcd

from mpmath import mp, mpf

from .config import defaults
from .errors import DomainError
from .quadforms import Mat2Z
from .towers import dbar


def xi_turn(d):
    """ xi_d = -e^{pi i/d} = e^{2 pi i k/dbar}; returns k. """
    return (d + 1) // 2 if d % 2 else d + 1


def xi_powers(d, prec=None):
    """ Table of xi_d^e for e in [0, dbar). """
    n = dbar(d)
    k = xi_turn(d)
    with mp.workprec((prec or defaults.prec) + defaults.guard):
        return [mp.expjpi(mpf(2 * k * e) / n) for e in range(n)]


def displacement_phase(d, p, k):
    """ Row index and xi_d exponent of column k of D_p.

    D_p |k> = xi_d^{p1 p2 + 2 p2 k} |k + p1>.
    """
    (p1, p2) = p
    return ((k + p1) % d, (p1 * p2 + 2 * p2 * k) % dbar(d))


def displacement(d, p, prec=None, powers=None):
    """ Displacement operator D_p = xi_d^{p1 p2} X^{p1} Z^{p2} as an mpmath matrix.

    Arguments:
        d: (int) dimension, at least 2
        p: (tuple) integer 2-vector, not reduced
        prec: (int) bits
        powers: (list) precomputed xi_powers(d, prec)

    Returns:
        D: (mp.matrix) d x d unitary
    """
    if d < 2:
        raise DomainError("dimension must be at least 2, got {}".format(d))
    powers = powers or xi_powers(d, prec)
    with mp.workprec((prec or defaults.prec) + defaults.guard):
        D = mp.matrix(d, d)
        for k in range(d):
            (row, e) = displacement_phase(d, p, k)
            D[row, k] = powers[e]
        return D


def _mod_inverse(x, n):
    return pow(x % n, -1, n)


def _prime_unitary(d, F, powers, prec):
    n = dbar(d)
    (alpha, beta, gamma, delta) = F
    binv = _mod_inverse(beta, n)
    with mp.workprec(prec + defaults.guard):
        scale = 1 / mp.sqrt(d)
        U = mp.matrix(d, d)
        for j in range(d):
            for k in range(d):
                U[j, k] = scale * powers[(binv * (delta * j * j - 2 * j * k + alpha * k * k)) % n]
        return U


def symplectic_unitary(d, F, prec=None):
    """ Unitary U_F with U_F D_p U_F^dagger = D_{Fp}, up to a global phase.

    Arguments:
        d: (int) dimension
        F: (Mat2Z) matrix with det F = 1 mod dbar

    Returns:
        U: (mp.matrix) d x d unitary
    """
    prec = prec or defaults.prec
    n = dbar(d)
    F = F.mod(n)
    if F.det() % n != 1:
        raise DomainError("{} is not symplectic mod {}".format(F.rows(), n))
    powers = xi_powers(d, prec)
    if F == Mat2Z(1, 0, 0, 1):
        with mp.workprec(prec + defaults.guard):
            return mp.eye(d)
    if gcd(F.beta, n) == 1:
        return _prime_unitary(d, F, powers, prec)
    for x in range(n):
        if gcd(x * F.beta + F.delta, n) == 1:
            F1 = Mat2Z(0, -1, 1, x).mod(n)
            F2 = Mat2Z(x * F.alpha + F.gamma, x * F.beta + F.delta, -F.alpha, -F.beta).mod(n)
            with mp.workprec(prec + defaults.guard):
                return _prime_unitary(d, F1, powers, prec) * _prime_unitary(d, F2, powers, prec)
    raise DomainError("no prime factorization found for {}".format(F.rows()))


def parity(d, prec=None):
    """ U_P = sum_j |-j><j|. """
    with mp.workprec((prec or defaults.prec) + defaults.guard):
        U = mp.matrix(d, d)
        for j in range(d):
            U[(-j) % d, j] = 1
        return U


def antisymplectic_conjugate(d, F, X, prec=None):
    """ U_F X U_F^dagger for det F = -1, with U_F = U_{FJ} composed with complex conjugation.

    X may be a column vector or a square matrix.
    """
    n = dbar(d)
    if F.det() % n != n - 1:
        raise DomainError("{} is not anti-symplectic mod {}".format(F.rows(), n))
    U = symplectic_unitary(d, F * Mat2Z(1, 0, 0, -1), prec)
    with mp.workprec((prec or defaults.prec) + defaults.guard):
        Xc = X.conjugate()
        if X.cols == 1:
            return U * Xc
        return U * Xc * U.transpose_conj()


def galois_twist_matrix(d, k):
    """ H_g = diag(1, k) for the automorphism xi_d -> xi_d^k. """
    if gcd(k, dbar(d)) != 1:
        raise DomainError("{} is not a unit mod {}".format(k, dbar(d)))
    return Mat2Z(1, 0, 0, k % dbar(d))


def zauner_matrix(d):
    return Mat2Z(0, d - 1, d + 1, d - 1)


def variant_zauner_matrix(d):
    """ F_a for d = 3 mod 9, F'_a for d = 6 mod 9. """
    if d % 9 == 3:
        return Mat2Z(1, d + 3, (4 * d - 3) // 3, d - 2)
    if d % 9 == 6:
        return Mat2Z(1, d + 3, (2 * d - 3) // 3, d - 2)
    raise DomainError("no variant Zauner matrix in dimension {}".format(d))


def order3_class(d, F):
    """ Conjugacy class "z", "a" or "a'" of a det 1, trace d-1 matrix mod dbar. """
    n = dbar(d)
    if F.det() % n != 1 or (F.trace() - (d - 1)) % n:
        raise DomainError("{} does not have det 1 and trace {} mod {}".format(F.rows(), d - 1, n))
    if d % 3 == 0 and all(x % 3 == y for (x, y) in zip(F, (1, 0, 0, 1))):
        if d % 9 == 3:
            return "a"
        if d % 9 == 6:
            return "a'"
    return "z"
