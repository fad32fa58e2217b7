""" Necromancy: from a numerical ghost fiducial to a live SIC fiducial.

Rank-1 tuples whose ghost overlaps generate an abelian extension of
H = K = Q(sqrt delta0) only. The pipeline is

    ghost_vector -> newton_refine -> refined_table -> ghost_invariants
        -> conjugate_and_reconstruct -> verify_sic

Vectors are mpmath column matrices; the Newton systems work on plain lists
of mpc.
"""
from collections import namedtuple
from fractions import Fraction
from math import gcd, isqrt
import random

import numpy as np
from mpmath import mp, mpf, mpc
from scipy.optimize import least_squares
from sympy import QQ, ZZ, factorint
from sympy.polys.matrices import DomainMatrix
from tqdm import tqdm

from .config import defaults
from .errors import ConvergenceError, DomainError, RecognitionError, ReconstructionError
from .ghost import GhostOverlapTable, ghost_fiducial, ghost_overlaps, max_abs, tolerance
from .numtheory import fundamental_discriminant
from .quadforms import Mat2Z, I, stabilizers
from .sf import rm_point
from .weylheis import antisymplectic_conjugate, displacement, displacement_phase, parity, \
    symplectic_unitary, xi_powers


GhostVector = namedtuple("GhostVector", ["psi", "lam", "prec", "gauge"])
InvariantSet = namedtuple("InvariantSet", ["t", "base_point", "cosets", "generators", "orders",
                                           "e", "a", "b", "prec"])
SicCandidate = namedtuple("SicCandidate", ["psi", "d", "overlaps", "residual", "prec", "label"])


def _column(values):
    v = mp.matrix(len(values), 1)
    for (k, x) in enumerate(values):
        v[k] = x
    return v


def _entries(v):
    return [v[k] for k in range(v.rows)]


def _gauge_index(psi, prec):
    """ First component that is not numerically zero. """
    floor = mpf(2) ** (-(prec // 4))
    for (k, x) in enumerate(psi):
        if abs(x) > floor:
            return k
    raise DomainError("vector has no nonzero component")


def ghost_vector(ghost):
    """ Factor a rank-1 ghost as lam |psi><psi| U_P.

    Arguments:
        ghost: (GhostFiducial) ghost fiducial of a rank-1 tuple

    Returns:
        gv: (GhostVector) psi with <0|psi> real positive (or the first
            nonzero component), lam = +-1
    """
    (t, Pi) = (ghost.t, ghost.matrix)
    prec = ghost.table.prec
    if t.r != 1:
        raise DomainError("ghost vectors need a rank-1 tuple, got r = {}".format(t.r))
    d = t.d
    with mp.workprec(prec + defaults.guard):
        N = Pi * parity(d, prec)
        k = max(range(d), key=lambda i: abs(N[i, i]))
        if abs(N[k, k]) == 0:
            raise DomainError("ghost fiducial vanishes on the diagonal")
        lam = 1 if N[k, k].real > 0 else -1
        scale = mp.sqrt(abs(N[k, k]))
        psi = [N[i, k] / (lam * scale) for i in range(d)]
        g = _gauge_index(psi, prec)
        phase = abs(psi[g]) / psi[g]
        psi = [phase * x for x in psi]
        psi[g] = mpc(psi[g].real, 0)
        v = _column(psi)
        rank_residual = max_abs(lam * v * v.transpose_conj() - N)
    if rank_residual > tolerance(prec):
        raise DomainError("ghost is not rank one: residual {}".format(mp.nstr(rank_residual, 5)))
    return GhostVector(v, lam, prec, g)


def _apply_displacement(d, p, v, powers):
    out = [mpc(0)] * d
    for k in range(d):
        (row, e) = displacement_phase(d, p, k)
        out[row] = powers[e] * v[k]
    return out


def _apply_parity(v):
    d = len(v)
    return [v[(-j) % d] for j in range(d)]


def _pairing(v, kind, d, p, powers):
    """ a = <v|M_p|v>, M_p v and (v^dagger M_p)^T for M_p = U_P D_p (ghost) or D_p (live). """
    neg = (-p[0], -p[1])
    if kind == "ghost":
        Mv = _apply_parity(_apply_displacement(d, p, v, powers))
        Mdv = _apply_displacement(d, neg, _apply_parity(v), powers)
    else:
        Mv = _apply_displacement(d, p, v, powers)
        Mdv = _apply_displacement(d, neg, v, powers)
    vM = [mp.conj(x) for x in Mdv]
    a = mp.fsum(mp.conj(v[j]) * Mv[j] for j in range(d))
    return (a, Mv, vM)


def newton_system(psi, kind, d, gauge=0, powers=None):
    """ Residuals and real Jacobian of a_p a_-p = (d delta_p + 1)/(d + 1) over [0, d)^2.

    The unknowns are Re psi_k for all k and Im psi_k for k != gauge.

    Returns:
        F: (list) complex residuals, one per p
        J: (list) rows of complex derivatives, one per p
    """
    powers = powers or xi_powers(d, mp.prec)
    target = mpf(1) / (d + 1)
    (F, J) = ([], [])
    for p1 in range(d):
        for p2 in range(d):
            (a, Mv, vM) = _pairing(psi, kind, d, (p1, p2), powers)
            (b, Nv, vN) = _pairing(psi, kind, d, (-p1, -p2), powers)
            F.append(a * b - (1 if (p1, p2) == (0, 0) else target))
            dx = [b * (vM[k] + Mv[k]) + a * (vN[k] + Nv[k]) for k in range(d)]
            dy = [1j * (b * (vM[k] - Mv[k]) + a * (vN[k] - Nv[k])) for k in range(d) if k != gauge]
            J.append(dx + dy)
    return (F, J)


def _gauss_newton(psi, kind, d, start_prec, target_prec, gauge=0, logger=None):
    """ Gauss-Newton on the real and imaginary parts with precision doubling. """
    gate = mpf(2) ** (-(target_prec - defaults.guard))
    cur = max(start_prec, 53)
    history = []
    for it in range(defaults.newton_iters):
        with mp.workprec(cur + defaults.guard):
            psi = [mpc(x) for x in psi]
            (F, J) = newton_system(psi, kind, d, gauge, xi_powers(d, cur))
            residual = max(abs(x) for x in F)
            history.append(residual)
            if logger:
                logger.debug("newton {} at {} bits: residual {}".format(it, cur, mp.nstr(residual, 3)))
            if cur >= target_prec and residual < gate:
                return (psi, history)
            rows = 2 * len(F)
            cols = len(J[0])
            A = mp.matrix(rows, cols)
            rhs = mp.matrix(rows, 1)
            for (i, (f, row)) in enumerate(zip(F, J)):
                rhs[2 * i] = -f.real
                rhs[2 * i + 1] = -f.imag
                for (k, x) in enumerate(row):
                    A[2 * i, k] = x.real
                    A[2 * i + 1, k] = x.imag
            try:
                (step, _) = mp.qr_solve(A, rhs)
            except (ZeroDivisionError, ValueError):
                raise ConvergenceError("singular Newton Jacobian at iteration {}".format(it))
            others = [k for k in range(d) if k != gauge]
            for k in range(d):
                psi[k] += step[k]
            for (i, k) in enumerate(others):
                psi[k] += 1j * step[d + i]
        if not mp.isfinite(residual) or (len(history) > 3 and residual > 2 * history[0]):
            raise ConvergenceError("Newton diverged: residual {}".format(mp.nstr(residual, 5)))
        cur = min(2 * cur, target_prec)
    raise ConvergenceError("Newton did not reach 2^-{} in {} iterations (last residual {})"
                           .format(target_prec, defaults.newton_iters, mp.nstr(history[-1], 5)))


def newton_refine(gv, target_prec=None, logger=None):
    """ Refine a ghost vector against a_p a_-p = (d delta + 1)/(d + 1), a_p = <psi|U_P D_p|psi>. """
    target_prec = target_prec or defaults.target_prec
    d = gv.psi.rows
    (psi, history) = _gauss_newton(_entries(gv.psi), "ghost", d, gv.prec // 2, target_prec,
                                   gv.gauge, logger)
    if logger:
        logger.info("ghost vector refined to {} bits in {} steps".format(target_prec, len(history)))
    with mp.workprec(target_prec + defaults.guard):
        return GhostVector(_column(psi), gv.lam, target_prec, gv.gauge)


def refined_table(t, gv, twist=None):
    """ Overlaps on [0, d)^2 from a refined ghost vector.

    Tr(Pi D_p^dagger) = lam <psi|U_P D_-p|psi> is mu_{Gp}; nu_{Gp} is sqrt(d + 1)
    times it and is moved back onto the transversal with the exact SF phase
    ratio. nu_0 is the root of x + 1/x = -(d - 2r) sqrt(d_j + 1) inside the
    unit interval.
    """
    G = twist or I
    d = t.d
    prec = gv.prec
    table = GhostOverlapTable(t, {}, prec)
    with mp.workprec(prec + defaults.guard):
        psi = _entries(gv.psi)
        powers = xi_powers(d, prec)
        root = mp.sqrt(d + 1)
        for p1 in range(d):
            for p2 in range(d):
                if (p1, p2) == (0, 0):
                    continue
                (a, _, _) = _pairing(psi, "ghost", d, (-p1, -p2), powers)
                q = G.apply((p1, p2))
                q0 = (q[0] % d, q[1] % d)
                sign = 1 if (table.phase(q) * table.phase(q0).inverse()).turn == 0 else -1
                table.nu[q0] = sign * root * (gv.lam * a).real
        s = -(d - 2 * t.r) * mp.sqrt(t.d_j + 1)
        table.nu[(0, 0)] = (s + mp.sqrt(s * s - 4)) / 2
    return table


def unit_group(t):
    """ Units of (Z/dbar)[X], X = eta_Q(f omega), as matrices mod dbar.

    Arguments:
        t: (AdmissibleTuple) the tuple

    Returns:
        group: (list) Mat2Z reduced mod dbar, identity first
    """
    n = t.dbar
    (a, b, c) = t.Q
    sigma = t.delta0 % 2
    X = Mat2Z((t.f * sigma - b) // 2, -c, a, (t.f * sigma + b) // 2)
    seen = set()
    group = []
    for x in range(n):
        for y in range(n):
            M = (x * I + y * X).mod(n)
            if M in seen or gcd(M.det(), n) != 1:
                continue
            seen.add(M)
            group.append(M)
    group.sort(key=lambda M: (M != I.mod(n), M))
    return group


def symmetry_group(t, table, group=None):
    """ Elements S of the unit group with nu_{Sp} = nu_p on the whole transversal. """
    group = group or unit_group(t)
    gate = tolerance(table.prec)
    with mp.workprec(table.prec + defaults.guard):
        return [S for S in group
                if all(abs(table.nu_at(S.apply(p)) - table.nu[p]) < gate for p in table.nu)]


class _Quotient(object):
    """ Quotient of an abelian matrix group mod n by a subgroup. """

    def __init__(self, group, subgroup, n):
        self.n = n
        self.subgroup = subgroup
        self.reps = []
        self.rep_of = {}
        for M in group:
            key = self.key(M)
            if key not in self.rep_of:
                self.rep_of[key] = M
                self.reps.append(M)

    def key(self, M):
        return min(tuple((M * S).mod(self.n)) for S in self.subgroup)

    def mul(self, A, B):
        return self.rep_of[self.key(A * B)]

    def order(self, M):
        identity = self.key(I)
        (k, P) = (1, M)
        while self.key(P) != identity:
            P = P * M
            k += 1
        return k

    def span(self, keys, g):
        out = set()
        for key in keys:
            P = self.rep_of[key]
            for _ in range(self.order(g)):
                out.add(self.key(P))
                P = P * g
        return out


def primary_decomposition(quotient):
    """ Generators of the Sylow parts of the quotient, largest order first.

    Returns:
        generators: (list) Mat2Z coset representatives
        orders: (list) their orders in the quotient
    """
    reps = quotient.reps
    N = len(reps)
    (generators, orders) = ([], [])
    for q in sorted(factorint(N)):
        sylow = [M for M in reps if factorint(quotient.order(M)).keys() <= {q}]
        H = {quotient.key(I)}
        while len(H) < len(sylow):
            candidates = [M for M in sylow if quotient.key(M) not in H]
            g = max(candidates, key=quotient.order)
            H = quotient.span(H, g)
            generators.append(g)
            orders.append(quotient.order(g))
    return (generators, orders)


def orbit(table, reps, p):
    """ Overlaps nu_{L p} over the coset representatives L, in representative order. """
    return [table.nu_at(L.apply(p)) for L in reps]


def _free_base_point(table, reps, prec):
    """ First p != 0 whose orbit values under the coset representatives are distinct. """
    floor = mpf(2) ** (-(prec // 4))
    for p in sorted(table.nu):
        if p == (0, 0):
            continue
        xs = sorted(orbit(table, reps, p))
        if all(xs[i + 1] - xs[i] > floor for i in range(len(xs) - 1)):
            return p
    raise RecognitionError("no free orbit of length {} in dimension {}".format(len(reps), table.t.d))


def _poly_from_roots(xs):
    """ Monic polynomial coefficients, lowest degree first. """
    coeffs = [mpf(1)]
    for x in xs:
        coeffs = [-x * coeffs[0]] + [coeffs[k - 1] - x * coeffs[k] for k in range(1, len(coeffs))] \
            + [coeffs[-1]]
    return coeffs


def _polyval(coeffs, x):
    return mp.polyval(list(reversed(coeffs)), x)


def recognize_quadratic(x, delta0, height_bound=None, prec=None):
    """ u + v sqrt(delta0) close to x, found by lattice reduction.

    Arguments:
        x: (mpf) real number known to prec bits
        delta0: (int) fundamental discriminant
        height_bound: (int) largest denominator accepted
        prec: (int) bits

    Returns:
        (u, v): (tuple) Fractions, or None when nothing under the bound fits
    """
    prec = prec or defaults.prec
    height_bound = height_bound or 2 ** (prec // 8)
    gate = mpf(2) ** (-(prec // 2))
    with mp.workprec(prec + defaults.guard):
        x = mpf(x)
        root = mp.sqrt(delta0)
        C = mpf(2) ** (prec // 2)
        rows = [[1, 0, 0, int(mp.nint(C * x))],
                [0, 1, 0, int(mp.nint(C))],
                [0, 0, 1, int(mp.nint(C * root))]]
        basis = DomainMatrix([[ZZ(v) for v in row] for row in rows], (3, 4), ZZ)
        delta = Fraction(defaults.lll_delta).limit_denominator(1000)
        reduced = basis.lll(delta=QQ(delta.numerator, delta.denominator)).to_Matrix()
        relations = [[int(reduced[i, k]) for k in range(3)] for i in range(3)]
        relation = mp.pslq([x, 1, root], maxcoeff=height_bound, maxsteps=10 ** 4)
        if relation:
            relations.append(relation)
        for (n0, n1, n2) in relations:
            if n0 == 0 or abs(n0) > height_bound:
                continue
            (u, v) = (Fraction(-n1, n0), Fraction(-n2, n0))
            if abs(x - (mpf(u.numerator) / u.denominator + mpf(v.numerator) / v.denominator * root)) < gate:
                return (u, v)
    return None


def _exact(u, v, root):
    return mpf(u.numerator) / u.denominator + mpf(v.numerator) / v.denominator * root


def _recognize_all(values, delta0, prec, height_bound):
    """ Recognize at half precision and confirm at full precision. """
    gate = mpf(2) ** (-(prec // 2))
    root = mp.sqrt(delta0)
    out = []
    for x in values:
        pair = recognize_quadratic(x, delta0, height_bound, prec // 2)
        if pair is None or abs(x - _exact(pair[0], pair[1], root)) > gate:
            raise RecognitionError("{} not recognized in Q(sqrt {})".format(mp.nstr(x, 20), delta0))
        out.append(pair)
    return out


def ghost_invariants(t, table, height_bound=None, logger=None):
    """ Ghost invariants of a free orbit, recognized in K.

    With x_L = nu_{L p1} over coset representatives L of the unit group
    modulo the symmetry group: e are the coefficients of prod (X - x_L),
    a[q] those of the interpolant R_q(x_L) = nu_{L q}, and b[j] those of
    the Galois polynomial R(x_L) = x_{L_j L} of the j-th generator.

    Returns:
        inv: (InvariantSet) exact pairs (u, v) for u + v sqrt(delta0)
    """
    if t.r != 1:
        raise DomainError("ghost invariants need a rank-1 tuple")
    prec = table.prec
    n = t.dbar
    group = unit_group(t)
    sym = symmetry_group(t, table, group)
    quotient = _Quotient(group, sym, n)
    reps = quotient.reps
    N = len(reps)
    with mp.workprec(prec + defaults.guard):
        base = _free_base_point(table, reps, prec)
        xs = orbit(table, reps, base)
        V = mp.matrix([[x ** k for k in range(N)] for x in xs])
        e = _poly_from_roots(xs)
        a = {}
        for q in sorted(table.nu):
            if q != (0, 0):
                a[q] = mp.lu_solve(V, mp.matrix(orbit(table, reps, q)))
        (generators, orders) = primary_decomposition(quotient)
        b = [mp.lu_solve(V, mp.matrix([table.nu_at(quotient.mul(g, L).apply(base)) for L in reps]))
             for g in generators]
        if logger:
            logger.info("unit group {} / symmetry group {}: orbit of {} from p1 = {}"
                        .format(len(group), len(sym), N, base))
        e_exact = _recognize_all(e[:-1], t.delta0, prec, height_bound)
        a_exact = dict((q, _recognize_all(list(c), t.delta0, prec, height_bound)) for (q, c) in a.items())
        b_exact = [_recognize_all(list(c), t.delta0, prec, height_bound) for c in b]
    return InvariantSet(t, base, reps, generators, orders, e_exact + [(Fraction(1), Fraction(0))],
                        a_exact, b_exact, prec)


def live_signs(d, delta0):
    """ Possible eps = g(sqrt(d + 1))/sqrt(d + 1) for the sign switch g of K. """
    s = isqrt(d + 1)
    if s * s == d + 1:
        return [1]
    if fundamental_discriminant(4 * (d + 1)).delta0 == delta0:
        return [-1]
    return [-1, 1]


def _conjugate(pairs, root):
    return [_exact(u, -v, root) for (u, v) in pairs]


def _displacement_np(d, p):
    n = 2 * d if d % 2 == 0 else d
    k = (d + 1) // 2 if d % 2 else d + 1
    D = np.zeros((d, d), dtype=complex)
    for col in range(d):
        (row, e) = displacement_phase(d, p, col)
        D[row, col] = np.exp(2j * np.pi * k * e / n)
    return D


def sic_refine(mu, d, target_prec=None, logger=None):
    """ SIC vector with Tr(Pi D_p^dagger) close to mu[p].

    Seeds from the top eigenvector of (1/d) sum mu_p D_p, fits the data with
    scipy least squares in double precision, then runs Gauss-Newton on
    |<psi|D_p|psi>|^2 = (d delta + 1)/(d + 1) up to target_prec.

    Returns:
        psi: (list) mpc components
        lam_max: (float) largest eigenvalue of the Hermitian part
    """
    target_prec = target_prec or defaults.target_prec
    grid = [(p1, p2) for p1 in range(d) for p2 in range(d)]
    Ds = dict((p, _displacement_np(d, p)) for p in grid)
    data = np.array([complex(mu[p]) for p in grid])
    B = sum(data[i] * Ds[p] for (i, p) in enumerate(grid)) / d
    (w, v) = np.linalg.eigh((B + B.conj().T) / 2)
    lam_max = float(w[-1])
    seed = v[:, -1] * np.sqrt(max(lam_max, 0.0))
    seed = seed * np.exp(-1j * np.angle(seed[np.argmax(np.abs(seed))]))

    def fit(x):
        psi = x[:d] + 1j * x[d:]
        model = np.array([psi.conj() @ Ds[p].conj().T @ psi for p in grid])
        diff = model - data
        return np.concatenate([diff.real, diff.imag])

    result = least_squares(fit, np.concatenate([seed.real, seed.imag]), method="lm")
    if not result.success:
        raise ConvergenceError("least squares seed fit failed: {}".format(result.message))
    psi = result.x[:d] + 1j * result.x[d:]
    gauge = int(np.argmax(np.abs(psi)))
    psi = psi * np.exp(-1j * np.angle(psi[gauge]))
    with mp.workprec(64):
        start = [mpc(complex(z)) for z in psi]
        start[gauge] = mpc(start[gauge].real, 0)
    (refined, history) = _gauss_newton(start, "live", d, 53, target_prec, gauge, logger)
    return (refined, lam_max)


def _candidate(psi, d, prec, label):
    with mp.workprec(prec + defaults.guard):
        norm = mp.sqrt(mp.fsum(abs(x) ** 2 for x in psi))
        psi = [x / norm for x in psi]
        powers = xi_powers(d, prec)
        overlaps = {}
        for p1 in range(d):
            for p2 in range(d):
                (a, _, _) = _pairing(psi, "live", d, (-p1, -p2), powers)
                overlaps[(p1, p2)] = a
        target = 1 / mp.sqrt(d + 1)
        residual = max(abs(abs(a) - target) for (p, a) in overlaps.items() if p != (0, 0))
        return SicCandidate(_column(psi), d, overlaps, residual, prec, label)


def bootstrap_roots(seed, b, orders):
    """ Orbit of seed under the Galois polynomials.

    Arguments:
        seed: (mpf) one root of the orbit polynomial
        b: (list) coefficient lists, lowest degree first, of the Galois
            polynomial of each generator
        orders: (list) order of each generator in the quotient

    Returns:
        orbit: (list) pairs (exponents, value) with value = R_1^k_1 ... R_m^k_m(seed)
    """
    out = [((), seed)]
    for (c, n) in zip(b, orders):
        grown = []
        for (label, x) in out:
            y = x
            for k in range(n):
                grown.append((label + (k,), y))
                y = _polyval(c, y)
        out = grown
    return out


def galois_residual(x, roots, b):
    """ Distance from x, and from its image under every Galois polynomial, to the root set. """
    def miss(y):
        return min(abs(y - z) for z in roots)
    return max([miss(x)] + [miss(_polyval(c, x)) for c in b])


def conjugate_and_reconstruct(inv, prec=None, target_prec=None, progbar=False, logger=None):
    """ Galois-conjugate the invariants and rebuild a SIC fiducial.

    One root x' of the conjugated orbit polynomial seeds the conjugated orbit,
    the others follow from the conjugated Galois polynomials. Values whose
    Galois images leave the root set are rejected. Each remaining value and
    each admissible sign eps gives live overlaps nu'_q = eps R'_q(x');
    candidates below the lambda_max filter are dropped, the rest are refined
    in order of decreasing lambda_max.

    Returns:
        candidate: (SicCandidate) first candidate passing the modulus gate

    Raises:
        ReconstructionError: all candidates failed; diagnostics attached
    """
    prec = prec or defaults.prec
    target_prec = target_prec or defaults.target_prec
    t = inv.t
    d = t.d
    floor = d / (d + 1.0) - 1e-9
    diagnostics = []
    survivors = []
    with mp.workprec(prec + defaults.guard):
        root = mp.sqrt(t.delta0)
        e = _conjugate(inv.e, root)
        a = dict((q, _conjugate(c, root)) for (q, c) in inv.a.items())
        b = [_conjugate(c, root) for c in inv.b]
        roots = mp.polyroots(list(reversed(e)), maxsteps=400, extraprec=prec)
        gate = tolerance(prec)
        for (label, x) in bootstrap_roots(roots[0], b, inv.orders):
            galois = galois_residual(x, roots, b)
            if galois > gate:
                diagnostics.append({"coset": list(label), "galois": float(galois), "rejected": "galois"})
                continue
            for eps in live_signs(d, t.delta0):
                mu = {(0, 0): mpf(1)}
                for (q, c) in a.items():
                    mu[q] = eps * _polyval(c, x) / mp.sqrt(d + 1)
                data = np.array([complex(mu[p]) for p in sorted(mu)])
                B = sum(z * _displacement_np(d, p) for (z, p) in zip(data, sorted(mu))) / d
                lam_max = float(np.linalg.eigvalsh((B + B.conj().T) / 2)[-1])
                diagnostics.append({"coset": list(label), "sign": eps, "lambda_max": lam_max,
                                    "galois": float(galois)})
                if lam_max >= floor:
                    survivors.append((lam_max, label, eps, mu))
    survivors.sort(key=lambda s: -s[0])
    gate = tolerance(target_prec)
    for (lam_max, label, eps, mu) in (tqdm(survivors) if progbar else survivors):
        try:
            (psi, _) = sic_refine(mu, d, target_prec, logger)
        except ConvergenceError as err:
            if logger:
                logger.debug("candidate coset {} sign {}: {}".format(label, eps, err))
            continue
        candidate = _candidate(psi, d, target_prec, {"coset": list(label), "sign": eps})
        if candidate.residual < gate:
            if logger:
                logger.info("candidate coset {} sign {} accepted: modulus residual {}"
                            .format(label, eps, mp.nstr(candidate.residual, 3)))
            return candidate
    raise ReconstructionError("no SIC among {} candidates in dimension {}".format(len(diagnostics), d),
                              diagnostics=diagnostics)


def verify_projector(Pi, r=1, samples=16, seed=0, prec=None):
    """ Residual report for a candidate r-SIC fiducial projector.

    Returns:
        report: (dict) modulus, gram, identity, hermiticity residuals and passed
    """
    prec = prec or defaults.prec
    d = Pi.rows
    rng = random.Random(seed)
    with mp.workprec(prec + defaults.guard):
        powers = xi_powers(d, prec)
        grid = [(p1, p2) for p1 in range(d) for p2 in range(d)]
        Ds = dict((p, displacement(d, p, prec, powers)) for p in grid)
        modulus = mp.sqrt(mpf(r * (d - r)) / (d * d - 1))
        worst_mod = mpf(0)
        orbit = {}
        total = mp.matrix(d, d)
        for p in grid:
            D = Ds[p]
            overlap = sum((Pi * D.transpose_conj())[k, k] for k in range(d))
            if p != (0, 0):
                worst_mod = max(worst_mod, abs(abs(overlap) - modulus))
            orbit[p] = D * Pi * D.transpose_conj()
            total += orbit[p]
        identity = max_abs(total - r * d * mp.eye(d))
        same = mpf(r * d * (d - r)) / (d * d - 1) + mpf(r * (r * d - 1)) / (d * d - 1)
        other = mpf(r * (r * d - 1)) / (d * d - 1)
        worst_gram = mpf(0)
        for _ in range(samples):
            (j, k) = (rng.choice(grid), rng.choice(grid))
            gram = sum((orbit[j] * orbit[k])[i, i] for i in range(d))
            worst_gram = max(worst_gram, abs(gram - (same if j == k else other)))
        hermiticity = max_abs(Pi - Pi.transpose_conj())
    gate = tolerance(prec)
    report = {"modulus": worst_mod, "gram": worst_gram, "identity": identity, "hermiticity": hermiticity}
    report["passed"] = all(v < gate for v in report.values())
    return report


def verify_sic(candidate, samples=16, seed=0):
    """ verify_projector on |psi><psi| of a SIC candidate. """
    with mp.workprec(candidate.prec + defaults.guard):
        Pi = candidate.psi * candidate.psi.transpose_conj()
    return verify_projector(Pi, 1, samples, seed, candidate.prec)


def sic_symmetry(t, prec=None):
    """ Order-3 symmetry l [L_z] mod dbar, l = sgn(j_{L_z^-1}(rho)). """
    L_z = stabilizers(t)[2]
    rho = rm_point(t, prec).rho
    l = 1 if L_z.inverse().j(rho) > 0 else -1
    return (l * L_z).mod(t.dbar)


def symmetry_residual(Pi, F, prec=None):
    """ max |U_F Pi U_F^dagger - Pi| for a symplectic or anti-symplectic F. """
    prec = prec or defaults.prec
    d = Pi.rows
    n = d if d % 2 else 2 * d
    with mp.workprec(prec + defaults.guard):
        if F.det() % n == 1:
            U = symplectic_unitary(d, F, prec)
            return max_abs(U * Pi * U.transpose_conj() - Pi)
        return max_abs(antisymplectic_conjugate(d, F, Pi, prec) - Pi)


def necromancy(t, prec=None, target_prec=None, shift=None, progbar=False, logger=None):
    """ Full pipeline for a rank-1 tuple.

    Returns:
        candidate: (SicCandidate) accepted SIC fiducial
        inv: (InvariantSet) recognized ghost invariants
        report: (dict) verify_sic report plus the order-3 symmetry residual
    """
    prec = prec or defaults.prec
    target_prec = target_prec or defaults.target_prec
    table = ghost_overlaps(t, prec, progbar=progbar, logger=logger)
    ghost = ghost_fiducial(t, shift, prec, table, logger)
    gv = newton_refine(ghost_vector(ghost), target_prec, logger)
    inv = ghost_invariants(t, refined_table(t, gv, ghost.twist), logger=logger)
    candidate = conjugate_and_reconstruct(inv, prec, target_prec, progbar, logger)
    report = verify_sic(candidate)
    with mp.workprec(target_prec + defaults.guard):
        Pi = candidate.psi * candidate.psi.transpose_conj()
        report["symmetry"] = symmetry_residual(Pi, sic_symmetry(t, target_prec), target_prec)
    return (candidate, inv, report)
