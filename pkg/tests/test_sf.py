from fractions import Fraction

import pytest
from mpmath import mp, mpc, mpf

from ghostsic.config import defaults
from ghostsic.errors import DomainError, PoleError
from ghostsic.quadforms import Mat2Z, QuadForm, S, T
from ghostsic.sf import double_sine, qpoch_finite, qpoch_inf, rm_point, shin, shin_coboundary, sigma_direct, \
    shin_table, sigma_M
from ghostsic.towers import make_tuple


PREC = 64
TOL = 1e-15
WIDE = 96
GATE = mpf(2) ** (-(WIDE - 32))


def _e(x):
    return mp.expjpi(2 * x)


def test_qpoch_finite():
    (z, tau) = (mpc(0.2, 0.1), mpc(-0.3, 0.7))
    with mp.workprec(PREC):
        assert qpoch_finite(z, tau, 0, PREC) == 1
        assert abs(qpoch_finite(z, tau, 2, PREC) - (1 - _e(z)) * (1 - _e(z + tau))) < TOL
        assert abs(qpoch_finite(z, tau, -1, PREC) - 1 / (1 - _e(z - tau))) < TOL
    with pytest.raises(PoleError):
        qpoch_finite(tau, tau, -1, PREC)


def test_qpoch_inf_shift():
    (z, tau) = (mpc(0.2, 0.1), mpc(-0.3, 0.7))
    with mp.workprec(PREC):
        lhs = qpoch_inf(z, tau, PREC)
        rhs = (1 - _e(z)) * qpoch_inf(z + tau, tau, PREC)
        assert abs(lhs - rhs) < TOL
    with pytest.raises(DomainError):
        qpoch_inf(z, mpc(0.3, -0.1), PREC)


def test_double_sine_reflection():
    tau = mpf(1.5)
    with mp.workprec(PREC):
        assert double_sine((1 + tau) / 2, tau, PREC) == 1
        product = double_sine(mpf(1.2), tau, PREC) * double_sine(1 + tau - mpf(1.2), tau, PREC)
        assert abs(product - 1) < 1e-12
    with pytest.raises(DomainError):
        double_sine(3, tau, PREC)


def test_shin_matches_coboundary():
    tau = mpc(-0.3, 0.8)
    r = (Fraction(1, 2), Fraction(1, 2))
    with mp.workprec(PREC):
        assert abs(shin(r, S, tau, PREC) - shin_coboundary(r, S, tau, PREC)) < 1e-12


def test_sigma_of_translation_is_trivial():
    assert sigma_M(T ** 3, mpc(0.1, 0.2), mpc(0.4, 0.9), PREC) == 1
    with pytest.raises(DomainError):
        shin((Fraction(1, 3), 0), S, mpc(-0.3, 0.8), PREC)


@pytest.mark.slow
def test_shin_table_of_smallest_tuple():
    t = make_tuple(4, 1, QuadForm(1, -3, 1))
    point = rm_point(t, PREC)
    assert point.A.gamma > 0
    assert point.word is not None
    table = shin_table(t, point.A, PREC, point)
    assert len(table) == 16
    assert all(p in table for p in [(0, 0), (3, 3), (1, 2)])


def test_double_sine_quasi_periodicity():
    tau = mpf(1.5)
    with mp.workprec(WIDE):
        for w in (mpf("0.3"), mpc("0.6", "0.2"), mpf("0.5")):
            lhs = double_sine(w + tau, tau, WIDE)
            rhs = double_sine(w, tau, WIDE) / (2 * mp.sin(mp.pi * w))
            assert abs(lhs - rhs) < GATE


def test_double_sine_modular_duality():
    tau = mpf(1.5)
    with mp.workprec(WIDE):
        for w in (mpf("0.7"), mpf("1.3"), mpc("0.5", "0.1")):
            assert abs(double_sine(w / tau, 1 / tau, WIDE) - double_sine(w, tau, WIDE)) < GATE


def test_double_sine_stable_under_deeper_quadrature(monkeypatch):
    points = [(mpf("0.3"), mpf(1.5)), (mpc("0.9", "0.1"), mpc(1, "0.5")), (mpf("1.7"), mpf(1.5))]
    with mp.workprec(WIDE):
        coarse = [double_sine(w, tau, WIDE) for (w, tau) in points]
    monkeypatch.setattr(defaults, "quad_degree", defaults.quad_degree + 1)
    with mp.workprec(WIDE):
        fine = [double_sine(w, tau, WIDE) for (w, tau) in points]
        for (x, y) in zip(coarse, fine):
            assert abs(x - y) < GATE


@pytest.mark.slow
@pytest.mark.parametrize("M", [S, Mat2Z(2, 1, 1, 1), Mat2Z(3, 1, 2, 1)])
def test_word_path_matches_products(M):
    with mp.workprec(WIDE):
        for (z, tau) in [(mpc("0.2", "0.1"), mpc("0.3", "0.9")), (mpc("-0.1", "0.05"), mpc(1, 1))]:
            assert abs(sigma_M(M, z, tau, WIDE) - sigma_direct(M, z, tau, WIDE)) < GATE


@pytest.mark.slow
def test_cocycle_relation():
    (M, N) = (Mat2Z(2, 1, 1, 1), Mat2Z(1, 0, 1, 1))
    with mp.workprec(WIDE):
        for (z, tau) in [(mpc("0.2", "0.1"), mpc("0.3", "0.9")), (mpc("0.15", "-0.05"), mpc("0.6", "1.2"))]:
            lhs = sigma_M(M * N, z, tau, WIDE)
            rhs = sigma_M(M, z / N.j(tau), N.act(tau), WIDE) * sigma_M(N, z, tau, WIDE)
            assert abs(lhs - rhs) < GATE


@pytest.mark.slow
def test_shin_closed_forms_at_fixed_point():
    t = make_tuple(4, 1, QuadForm(1, -3, 1))
    point = rm_point(t, WIDE)
    A = point.A
    with mp.workprec(WIDE):
        j = A.j(point.rho)
        assert abs(abs(shin((0, 0), A, point, WIDE)) * mp.sqrt(j) - 1) < GATE
        for r in [(Fraction(1, 2), 0), (0, Fraction(1, 2)), (Fraction(1, 2), Fraction(1, 2))]:
            value = shin(r, A, point, WIDE)
            assert min(abs(value - 1), abs(value + 1)) < GATE, r
