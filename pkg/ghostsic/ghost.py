""" Ghost overlaps, ghost fiducials and the checks built on them.

The normalized ghost overlaps of an admissible tuple t are the real numbers
nu_p = phi_p(t) shin^{p/d}_{A_t}(rho_t). A table stores them on the
transversal [0, d)^2; any other p is reached exactly through the ratio of
the SF phases, since shin^{p/d} depends on p only modulo d.
"""
from collections import namedtuple
from fractions import Fraction
from math import gcd

from mpmath import mp, mpf, mpc
from tqdm import tqdm

from .config import defaults
from .errors import DomainError, PrecisionError
from .parallel import shard_map
from .phases import sf_phase
from .quadforms import I, apply_gl2, principal_form, stabilizers
from .sf import rm_point, shin, shin_table
from .towers import make_tuple, tower
from .weylheis import displacement, galois_twist_matrix, parity, xi_powers


GhostFiducial = namedtuple("GhostFiducial", ["matrix", "t", "shift", "twist", "table", "residuals"])


def tolerance(prec):
    """ Gate applied to residuals computed at prec bits.

    Overlaps carry the half-precision error of sf.double_sine, so the gate
    sits 8 bits above 2^(-prec/2) and not lower.
    """
    return mpf(2) ** (-(prec // 2) + 8)


def max_abs(M):
    """ Largest entry modulus of an mpmath matrix. """
    return max(abs(M[i, k]) for i in range(M.rows) for k in range(M.cols))


class GhostOverlapTable(object):
    """ Normalized ghost overlaps of one tuple on the transversal [0, d)^2. """

    def __init__(self, t, nu, prec, A=None):
        self.t = t
        self.nu = nu
        self.prec = prec
        self.A = A if A is not None else stabilizers(t)[3]
        self._phases = {}

    def __len__(self):
        return len(self.nu)

    def phase(self, p):
        if p not in self._phases:
            self._phases[p] = sf_phase(self.t, p, self.A)
        return self._phases[p]

    def nu_at(self, p):
        """ nu_p for any integer p.

        Off the transversal the ratio phi_p/phi_p0 is +-1 when p is not
        divisible by d; the value is then real.
        """
        d = self.t.d
        p = (int(p[0]), int(p[1]))
        p0 = (p[0] % d, p[1] % d)
        if p == p0:
            return self.nu[p0]
        ratio = self.phase(p) * self.phase(p0).inverse()
        if ratio.turn == 0:
            return self.nu[p0]
        if ratio.turn == Fraction(1, 2):
            return -self.nu[p0]
        with mp.workprec(self.prec + defaults.guard):
            return ratio.value(self.prec + defaults.guard) * self.nu[p0]

    def mu_at(self, p):
        """ Candidate ghost overlap: r at p = 0 mod d, else sqrt(r(d-r)/(d^2-1)) nu_p. """
        (d, r) = (self.t.d, self.t.r)
        if p[0] % d == 0 and p[1] % d == 0:
            return mpf(r)
        with mp.workprec(self.prec + defaults.guard):
            return mp.sqrt(mpf(r * (d - r)) / (d * d - 1)) * self.nu_at(p)

    def product_residual(self):
        """ max over p != 0 of |nu_p nu_-p - 1|. """
        d = self.t.d
        worst = mpf(0)
        with mp.workprec(self.prec + defaults.guard):
            for p in self.nu:
                if p == (0, 0):
                    continue
                worst = max(worst, abs(self.nu[p] * self.nu_at((-p[0], -p[1])) - 1))
        return worst


def _overlap_chunk(items):
    """ Raw complex overlaps for a shard of (t, p, prec) items. """
    if not items:
        return []
    (t, _, prec) = items[0]
    point = rm_point(t, prec)
    d = t.d
    out = []
    for (t, p, prec) in items:
        value = shin((Fraction(p[0], d), Fraction(p[1], d)), point.A, point.rho, prec)
        out.append(sf_phase(t, p, point.A).value(prec + defaults.guard) * value)
    return out


def ghost_overlaps(t, prec=None, threads=None, progbar=False, logger=None):
    """ Normalized ghost overlaps of an admissible tuple.

    Arguments:
        t: (AdmissibleTuple) the tuple
        prec: (int) bits
        threads: (int) worker processes for the shin evaluations
        progbar: (bool) progress bar over the transversal (inline runs only)
        logger: (Logger) logger object

    Returns:
        table: (GhostOverlapTable) real overlaps on [0, d)^2
    """
    prec = prec or defaults.prec
    threads = threads or defaults.threads
    d = t.d
    grid = [(p1, p2) for p1 in range(d) for p2 in range(d)]
    items = [(t, p, prec) for p in grid]
    if threads > 1:
        raw = shard_map(_overlap_chunk, items, threads, progbar=progbar, logger=logger)
    else:
        raw = []
        for item in (tqdm(items) if progbar else items):
            raw += _overlap_chunk([item])

    gate = mpf(2) ** (-(prec // 2))
    nu = {}
    worst = mpf(0)
    for (p, value) in zip(grid, raw):
        value = mpc(value)
        worst = max(worst, abs(value.imag) / max(1, abs(value.real)))
        nu[p] = value.real
    if worst > gate:
        raise PrecisionError("ghost overlaps of {} have imaginary part {} at {} bits"
                             .format(t.Q, mp.nstr(worst, 5), prec), needed_bits=2 * prec)
    if logger:
        logger.info("ghost overlaps for (d, r, Q) = ({}, {}, {}): max |Im| {}"
                    .format(d, t.r, t.Q, mp.nstr(worst, 3)))
    return GhostOverlapTable(t, nu, prec, stabilizers(t)[3])


def valid_shift(t, shift):
    return gcd(2 * shift + t.d_j - 1, t.d) == 1


def twist_determinant(t, shift):
    """ det G with det(G) r (2 shift + d_j - 1 + d) = 1 mod dbar. """
    if not valid_shift(t, shift):
        raise DomainError("{} is not a shift candidate for d = {}: 2*shift + d_j - 1 = {} is not coprime to d"
                          .format(shift, t.d, 2 * shift + t.d_j - 1))
    value = t.r * (2 * shift + t.d_j - 1 + t.d) % t.dbar
    if gcd(value, t.dbar) != 1:
        raise DomainError("twist congruence has no solution for shift {} in dimension {}".format(shift, t.d))
    return pow(value, -1, t.dbar)


def ghost_fiducial(t, shift=None, prec=None, table=None, logger=None):
    """ Candidate ghost fiducial (1/d) sum_p mu_{Gp} D_p with G = diag(1, det G).

    Arguments:
        t: (AdmissibleTuple) the tuple
        shift: (int) lambda, 2 lambda + d_j - 1 coprime to d
        prec: (int) bits
        table: (GhostOverlapTable) precomputed overlaps of t

    Returns:
        ghost: (GhostFiducial) matrix with idempotency, trace and parity residuals
    """
    prec = prec or defaults.prec
    shift = defaults.shift if shift is None else shift
    G = galois_twist_matrix(t.d, twist_determinant(t, shift))
    if table is None:
        table = ghost_overlaps(t, prec, logger=logger)
    d = t.d
    powers = xi_powers(d, prec)
    with mp.workprec(prec + defaults.guard):
        Pi = mp.matrix(d, d)
        for p1 in range(d):
            for p2 in range(d):
                mu = table.mu_at(G.apply((p1, p2)))
                Pi += mu * displacement(d, (p1, p2), prec, powers)
        Pi /= d
        UP = parity(d, prec)
        residuals = {
            "idempotency": max_abs(Pi * Pi - Pi),
            "trace": abs(sum(Pi[k, k] for k in range(d)) - t.r),
            "parity": max_abs(UP * Pi * UP.transpose_conj() - Pi.transpose_conj()),
        }
    if logger:
        logger.info("ghost fiducial d = {}, shift {}, det G = {}: idempotency {}"
                    .format(d, shift, G.delta, mp.nstr(residuals["idempotency"], 3)))
    return GhostFiducial(Pi, t, shift, G, table, residuals)


def overlap_residual(ghost):
    """ max_p |Tr(Pi D_p^dagger) - mu_{Gp}| over the transversal. """
    (t, table, G) = (ghost.t, ghost.table, ghost.twist)
    d = t.d
    powers = xi_powers(d, table.prec)
    worst = mpf(0)
    with mp.workprec(table.prec + defaults.guard):
        for p1 in range(d):
            for p2 in range(d):
                D = displacement(d, (p1, p2), table.prec, powers)
                trace = sum((ghost.matrix * D.transpose_conj())[k, k] for k in range(d))
                worst = max(worst, abs(trace - table.mu_at(G.apply((p1, p2)))))
    return worst


def tcc_tables(t, prec=None, progbar=False, logger=None):
    """ shin^{q/d}_A(rho) and shin^{q/d}_{A^-1}(rho) on [0, d)^2. """
    prec = prec or defaults.prec
    point = rm_point(t, prec)
    forward = shin_table(t, point.A, prec, point, progbar, logger)
    backward = shin_table(t, point.A.inverse(), prec, point, progbar, logger)
    return (forward, backward)


def tcc_residual(t, shift, p, prec=None, tables=None):
    """ Twisted convolution sum at p minus d^2 delta_{p, 0}.

    Arguments:
        t: (AdmissibleTuple) the tuple
        shift: (int) lambda
        p: (tuple) integer 2-vector
        prec: (int) bits
        tables: (tuple) output of tcc_tables

    Returns:
        residual: (mpc)
    """
    prec = prec or defaults.prec
    if not valid_shift(t, shift):
        raise DomainError("{} is not a shift candidate for d = {}".format(shift, t.d))
    (forward, backward) = tables or tcc_tables(t, prec)
    d = t.d
    (p1, p2) = (int(p[0]), int(p[1]))
    L_z = stabilizers(t)[2]
    M = shift * I + L_z
    with mp.workprec(prec + defaults.guard):
        omega = [mp.expjpi(mpf(2 * k) / d) for k in range(d)]
        total = mpc(0)
        for q1 in range(d):
            for q2 in range(d):
                (m1, m2) = M.apply((q1, q2))
                symp = p2 * m1 - p1 * m2
                back = backward[((q1 - p1) % d, (q2 - p2) % d)]
                total += omega[(t.r * symp) % d] * forward[(q1, q2)] * back
        if p1 % d == 0 and p2 % d == 0:
            total -= d * d
        return total


def tcc_residuals(t, shift, prec=None, tables=None, progbar=False):
    """ tcc_residual over the transversal, as a dict p -> residual. """
    prec = prec or defaults.prec
    tables = tables or tcc_tables(t, prec)
    grid = [(p1, p2) for p1 in range(t.d) for p2 in range(t.d)]
    return dict((p, tcc_residual(t, shift, p, prec, tables)) for p in (tqdm(grid) if progbar else grid))


def shift_scan(t, prec=None, shifts=None, tables=None, logger=None):
    """ Bounded scan of shift candidates lambda in Z/d.

    Returns:
        rows: (list) dicts {shift, residual, is_shift} for every lambda with
            2 lambda + d_j - 1 coprime to d
    """
    prec = prec or defaults.prec
    tables = tables or tcc_tables(t, prec)
    shifts = range(t.d) if shifts is None else shifts
    gate = tolerance(prec)
    rows = []
    for shift in shifts:
        if not valid_shift(t, shift):
            continue
        worst = max(abs(x) for x in tcc_residuals(t, shift, prec, tables).values())
        rows.append({"shift": shift, "residual": worst, "is_shift": worst < gate})
        if logger:
            logger.debug("shift {}: TCC residual {}".format(shift, mp.nstr(worst, 3)))
    return rows


def residual_shrinks(func, prec):
    """ Evaluate a residual at prec and 2 prec bits; True if it drops by at least half. """
    coarse = func(prec)
    fine = func(2 * prec)
    return (coarse, fine, fine <= coarse / 2 or fine < tolerance(2 * prec))


def _sgn(x):
    return 1 if x > 0 else -1


def m_transform_check(t, M, prec=None, table=None):
    """ max_{p != 0} |nu_p(t_M) - nu_{lMp}(t)| with l = sgn(j_{M^-1}(rho_t)).

    Arguments:
        t: (AdmissibleTuple) the tuple
        M: (Mat2Z) element of GL2(Z)

    Returns:
        deviation: (mpf)
    """
    prec = prec or defaults.prec
    if M.det() not in (1, -1):
        raise DomainError("{} is not in GL2(Z)".format(M.rows()))
    if table is None:
        table = ghost_overlaps(t, prec)
    t_M = make_tuple(t.d, t.r, apply_gl2(t.Q, M))
    table_M = ghost_overlaps(t_M, prec)
    rho = rm_point(t, prec).rho
    with mp.workprec(prec + defaults.guard):
        l = _sgn(M.inverse().j(rho))
        worst = mpf(0)
        for p in table_M.nu:
            if p == (0, 0):
                continue
            (x, y) = M.apply(p)
            worst = max(worst, abs(table_M.nu[p] - table.nu_at((l * x, l * y))))
    return worst


def alignment_sign(d_j, n, p):
    """ (-1)^{l(p)} relating level j overlaps to level nj overlaps. """
    if d_j % 2 == 0 and n % 12 in (2, 5, 7, 10):
        ell = n + (1 + p[0]) * (1 + p[1])
    else:
        ell = n + 1
    return -1 if ell % 2 else 1


def alignment_check(delta0, j, n, prec=None, logger=None):
    """ max_{p != 0} |nu_{kappa p}(t') - (-1)^{l(p)} nu_p(t)^n| between levels j and nj.

    t = (d_j, 1, Q) and t' = (d_nj, 1, Q) for the principal form Q of
    Q(sqrt delta0), with kappa = d_nj/d_j.
    """
    prec = prec or defaults.prec
    if n < 1 or n % 3 == 0:
        raise DomainError("alignment needs a positive n coprime to 3, got {}".format(n))
    rows = tower(delta0, n * j)
    (d_j, d_nj) = (rows[j - 1]["d_j"], rows[n * j - 1]["d_j"])
    if d_nj % d_j:
        raise DomainError("d_{} = {} does not divide d_{} = {}".format(j, d_j, n * j, d_nj))
    kappa = d_nj // d_j
    Q = principal_form(delta0)
    table = ghost_overlaps(make_tuple(d_j, 1, Q), prec)
    table_n = table if n == 1 else ghost_overlaps(make_tuple(d_nj, 1, Q), prec)
    with mp.workprec(prec + defaults.guard):
        worst = mpf(0)
        for p in table.nu:
            if p == (0, 0):
                continue
            lhs = table_n.nu_at((kappa * p[0], kappa * p[1]))
            rhs = alignment_sign(d_j, n, p) * table.nu[p] ** n
            worst = max(worst, abs(lhs - rhs))
    if logger:
        logger.info("alignment d = {} -> {} (n = {}): deviation {}".format(d_j, d_nj, n, mp.nstr(worst, 3)))
    return worst


def symmetry_check(t, table):
    """ max_p |nu_{l L_z p} - nu_p| with l = sgn(j_{L_z^-1}(rho)). """
    L_z = stabilizers(t)[2]
    rho = rm_point(t, table.prec).rho
    with mp.workprec(table.prec + defaults.guard):
        l = _sgn(L_z.inverse().j(rho))
        worst = mpf(0)
        for p in table.nu:
            (x, y) = L_z.apply(p)
            worst = max(worst, abs(table.nu_at((l * x, l * y)) - table.nu[p]))
    return worst
