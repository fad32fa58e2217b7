""" Dimension towers, dimension grids and admissible tuples.

For a real quadratic field with smallest totally positive unit eps_bar,
the tower d_j = Tr(eps_bar^j) + 1 and conductors f_j = 2 Im(eps_bar^j)
(coefficient of sqrt(delta0)) drive everything. All values are exact
integers from Lucas recursions.
"""
from collections import namedtuple
from math import isqrt

import numpy as np

from .config import defaults
from .errors import DomainError
from .numtheory import fundamental_discriminant, fundamental_unit, lucas_index, lucas_u, lucas_v, \
    unit_trace_parity
from .parallel import shard_map


AdmissibleTuple = namedtuple("AdmissibleTuple",
                             ["d", "r", "Q", "delta0", "j", "m", "f", "f_j", "d_j", "dbar", "f_jm"])
GridEntry = namedtuple("GridEntry", ["j", "m", "d_jm", "r_jm", "f_jm"])


def _unit_data(delta0):
    """ Trace of eps_bar and f_1. """
    (eps, eps_bar, norm) = fundamental_unit(delta0)
    return (int(eps_bar.trace()), int(2 * eps_bar.y))


def dbar(d):
    return d if d % 2 else 2 * d


def conductor_sequence(delta0, jmax):
    """ f_1, ..., f_jmax with f_j = f_1 U_j(Tr eps_bar, 1). """
    (t, f1) = _unit_data(delta0)
    return [f1 * lucas_u(j, t) for j in range(1, jmax + 1)]


def tower(delta0, jmax):
    """ Rows {j, d_j, f_j} of the dimension tower of Q(sqrt delta0). """
    (t, f1) = _unit_data(delta0)
    return [{"j": j, "d_j": lucas_v(j, t) + 1, "f_j": f1 * lucas_u(j, t)}
            for j in range(1, jmax + 1)]


def grid(delta0, j, m):
    """ Grid entry (d_{j,m}, r_{j,m}, f_{jm}) from U_m(d_j - 1). """
    if j < 1 or m < 1:
        raise DomainError("grid indices must be positive, got j={}, m={}".format(j, m))
    (t, f1) = _unit_data(delta0)
    t_j = lucas_v(j, t)
    r_jm = lucas_u(m, t_j)
    d_jm = lucas_u(m + 1, t_j) + r_jm
    return GridEntry(j, m, d_jm, r_jm, f1 * lucas_u(j, t) * r_jm)


def chebyshev_variant(kind, j, x):
    """ T*_j(x) = V_j(x - 1) + 1 or U*_j(x) = U_j(x - 1).

    Arguments:
        kind: (str) "T" or "U" (a trailing "*" is accepted)
        j: (int) index, at least 1
        x: (int) argument

    Returns:
        value: (int) exact polynomial value
    """
    kind = kind.rstrip("*").upper()
    if j < 1:
        raise DomainError("chebyshev_variant needs j >= 1, got {}".format(j))
    if kind == "T":
        return lucas_v(j, x - 1) + 1
    if kind == "U":
        return lucas_u(j, x - 1)
    raise DomainError("unknown Chebyshev kind {!r}".format(kind))


def _tower_index(t_bar, trace):
    """ j with Tr(eps_bar^j) = trace, or None. """
    j = 1
    (v0, v1) = (2, t_bar)
    while v1 < trace:
        (v0, v1) = (v1, t_bar * v1 - v0)
        j += 1
    return j if v1 == trace else None


def pair_to_triple(d, r):
    """ Field, level and grid index (delta0, j, m) of an admissible pair, or None. """
    if d <= 3 or r < 1 or 2 * r >= d - 1:
        return None
    (n, rem) = divmod(d * d - 1, r * (d - r))
    if rem or n <= 4:
        return None
    trace = n - 2
    delta0 = fundamental_discriminant(trace * trace - 4).delta0
    (t_bar, f1) = _unit_data(delta0)
    j = _tower_index(t_bar, trace)
    if j is None:
        return None
    m = 1
    while True:
        r_jm = lucas_u(m, trace)
        if r_jm >= r:
            break
        m += 1
    if r_jm != r or lucas_u(m + 1, trace) + r_jm != d:
        return None
    return (delta0, j, m)


def admissible_pairs(dmax, logger=None):
    """ All admissible (d, r, delta0, j, m) with 1 < r < (d - 1)/2 and d <= dmax, sorted by d. """
    rows = []
    n = 5
    while True:
        trace = n - 2
        if lucas_u(3, trace) + lucas_u(2, trace) > dmax:
            break
        delta0 = fundamental_discriminant(trace * trace - 4).delta0
        (t_bar, f1) = _unit_data(delta0)
        j = _tower_index(t_bar, trace)
        m = 2
        while True:
            r_jm = lucas_u(m, trace)
            d_jm = lucas_u(m + 1, trace) + r_jm
            if d_jm > dmax:
                break
            if 2 * r_jm < d_jm - 1:
                rows.append((d_jm, r_jm, delta0, j, m))
            m += 1
        n += 1
    rows.sort()
    if logger:
        logger.debug("{} admissible pairs with r > 1 up to d = {}".format(len(rows), dmax))
    return rows


def j_min(delta0, f):
    """ Smallest j with f | f_j. """
    if f < 1:
        raise DomainError("conductor must be positive, got {}".format(f))
    (t, f1) = _unit_data(delta0)
    return lucas_index(t, 1, f1, f)


def make_tuple(d, r, Q):
    """ Admissible tuple (d, r, Q) with all derived data.

    Arguments:
        d: (int) dimension
        r: (int) rank
        Q: (QuadForm) form whose field and conductor must fit (d, r)

    Returns:
        t: (AdmissibleTuple)
    """
    triple = pair_to_triple(d, r)
    if triple is None:
        raise DomainError("(d, r) = ({}, {}) is not admissible".format(d, r))
    (delta0, j, m) = triple
    disc = fundamental_discriminant(Q.discriminant())
    if disc.delta0 != delta0:
        raise DomainError("form {} lives in Q(sqrt {}), dimension {} needs Q(sqrt {})"
                          .format(Q, disc.delta0, d, delta0))
    (t_bar, f1) = _unit_data(delta0)
    f_j = f1 * lucas_u(j, t_bar)
    if f_j % disc.f:
        raise DomainError("conductor {} of {} does not divide f_j = {}".format(disc.f, Q, f_j))
    d_j = lucas_v(j, t_bar) + 1
    return AdmissibleTuple(d, r, Q, delta0, j, m, disc.f, f_j, d_j, dbar(d), f_j * lucas_u(m, d_j - 1))


def anti_unitary_type(t):
    """ "anti-unitary" when the field and conductor admit an anti-unitary symmetry, else "unitary". """
    (t_bar, f1) = _unit_data(t.delta0)
    d1 = t_bar + 1
    if isqrt(d1 - 3) ** 2 != d1 - 3:
        return "unitary"
    jm = j_min(t.delta0, t.f)
    if jm % 2 == 0:
        return "unitary"
    d_jm = lucas_v(jm, t_bar) + 1
    s = isqrt(d_jm - 3)
    if s * s != d_jm - 3:
        return "unitary"
    f_jm = f1 * lucas_u(jm, t_bar)
    return "anti-unitary" if f_jm % (t.f * s) == 0 else "unitary"


def _squarefree_sieve(bound):
    squarefree = np.ones(bound + 1, dtype=bool)
    for p in range(2, isqrt(bound) + 1):
        squarefree[p * p::p * p] = False
    return squarefree


def _odd_trace_chunk(discs):
    return [unit_trace_parity(D) for D in discs]


def odd_trace_density(bound=None, threads=None, progbar=False, logger=None):
    """ Fraction of fundamental discriminants D = 5 mod 8 up to bound with a unit of odd trace.

    Returns:
        density: (float) fraction of fields with an odd-trace fundamental unit
        count: (int) number of discriminants scanned
    """
    bound = bound or defaults.density_bound
    threads = threads or defaults.threads
    squarefree = _squarefree_sieve(bound)
    discs = [D for D in range(5, bound + 1, 8) if squarefree[D]]
    parities = shard_map(_odd_trace_chunk, discs, threads, progbar=progbar, logger=logger)
    density = float(sum(parities)) / len(discs)
    if logger:
        logger.info("odd-trace density up to {}: {:.4f} over {} fields".format(bound, density, len(discs)))
    return (density, len(discs))
