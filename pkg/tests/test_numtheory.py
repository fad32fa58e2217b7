from fractions import Fraction
from math import floor

import pytest

from ghostsic.errors import BoundError, DomainError
from ghostsic.numtheory import QuadInt, class_number_fundamental, class_number_order, dedekind_sum, \
    fundamental_discriminant, fundamental_unit, is_fundamental, kronecker, lucas_index, lucas_u, lucas_v, \
    orbit_count, regulator, squarefree_decomposition, unit_index, unit_trace_parity


def _sawtooth(x):
    if x.denominator == 1:
        return Fraction(0)
    return x - floor(x) - Fraction(1, 2)


def _dedekind_brute(a, b):
    return sum(_sawtooth(Fraction(k, b)) * _sawtooth(Fraction(a * k, b)) for k in range(1, b))


def test_fundamental_discriminant_splits_square_part():
    assert fundamental_discriminant(5) == (5, 5, 1)
    assert fundamental_discriminant(32) == (32, 8, 2)
    assert fundamental_discriminant(480) == (480, 120, 2)
    assert fundamental_discriminant(45) == (45, 5, 3)


@pytest.mark.parametrize("delta", [0, -7, 6, 7, 16, 49])
def test_fundamental_discriminant_rejects(delta):
    with pytest.raises(DomainError):
        fundamental_discriminant(delta)


def test_squarefree_decomposition():
    assert squarefree_decomposition(72) == (6, 2)
    assert squarefree_decomposition(250001) == (53, 89)


def test_is_fundamental():
    assert [D for D in range(2, 30) if is_fundamental(D)] == [5, 8, 12, 13, 17, 21, 24, 28, 29]


def test_quadint_arithmetic():
    phi = QuadInt(Fraction(1, 2), Fraction(1, 2), 5)
    assert phi.norm() == -1
    assert phi * phi == phi + 1
    assert phi * phi.inverse() == QuadInt(1, 0, 5)
    assert (phi ** 3).trace() == 4
    with pytest.raises(DomainError):
        phi + QuadInt(1, 1, 8)


@pytest.mark.parametrize("delta0, eps, norm", [
    (5, (Fraction(1, 2), Fraction(1, 2)), -1),
    (8, (1, Fraction(1, 2)), -1),
    (12, (2, Fraction(1, 2)), 1),
    (13, (Fraction(3, 2), Fraction(1, 2)), -1),
    (21, (Fraction(5, 2), Fraction(1, 2)), 1),
])
def test_fundamental_unit(delta0, eps, norm):
    (unit, unit_bar, n) = fundamental_unit(delta0)
    assert (unit.x, unit.y) == eps
    assert n == norm
    assert unit_bar.norm() == 1
    assert unit_bar == (unit if norm == 1 else unit * unit)


def test_unit_trace_parity_matches_unit():
    for delta0 in (5, 13, 21, 29, 37, 53, 61, 69, 77):
        (eps, _, _) = fundamental_unit(delta0)
        assert unit_trace_parity(delta0) == int(eps.trace()) % 2


def test_regulator():
    assert abs(regulator(5, prec=64) - 0.48121182505960344) < 1e-15
    assert abs(regulator(12, prec=64) - 1.3169578969248166) < 1e-15


def test_lucas_sequences():
    assert [lucas_u(n, 3) for n in range(1, 9)] == [1, 3, 8, 21, 55, 144, 377, 987]
    assert [lucas_v(n, 3) for n in range(0, 5)] == [2, 3, 7, 18, 47]
    assert lucas_u(30, 3, modulus=7) == lucas_u(30, 3) % 7
    assert lucas_index(1, -1, 1, 8) == 6
    assert lucas_index(3, 1, 1, 7) == 4


@pytest.mark.parametrize("a, b, s", [
    (1, 3, Fraction(1, 18)),
    (1, 2, Fraction(0)),
    (5, 8, Fraction(-1, 16)),
])
def test_dedekind_sum_values(a, b, s):
    assert dedekind_sum(a, b) == s


def test_dedekind_sum_against_definition():
    for b in range(2, 25):
        for a in range(-b, 2 * b):
            if a % b and Fraction(a, b).denominator == b:
                assert dedekind_sum(a, b) == _dedekind_brute(a, b)


def test_kronecker():
    assert [kronecker(5, n) for n in range(1, 11)] == [1, -1, -1, 1, 0, 1, -1, -1, 1, 0]
    assert kronecker(8, 2) == 0
    assert kronecker(12, 3) == 0


def test_unit_index():
    assert unit_index(5, 1) == 1
    assert unit_index(5, 2) == 3
    assert unit_index(5, 5) == 5


def test_class_number_paths_agree():
    for f in (1, 2, 3, 4, 5, 6, 10, 12):
        (h_enum, classes) = class_number_order(5, f, method="enumerate")
        (h_formula, _) = class_number_order(5, f, method="formula")
        assert h_enum == h_formula == len(classes)


@pytest.mark.parametrize("d, count", zip(range(4, 24), [1, 1, 1, 2, 2, 2, 1, 3, 2, 2, 2, 4, 2, 3, 2, 5, 2, 5, 1, 6]))
def test_orbit_counts(d, count):
    assert orbit_count(d) == count


@pytest.mark.parametrize("delta0, h", [(5, 1), (8, 1), (12, 1), (13, 1), (40, 2), (60, 2), (65, 2), (229, 3)])
def test_class_number_fundamental(delta0, h):
    assert class_number_fundamental(delta0, method="enumerate") == h
    assert class_number_fundamental(delta0, method="analytic") == h
    assert class_number_fundamental(delta0) == h


def test_class_number_fundamental_rejects():
    with pytest.raises(DomainError):
        class_number_fundamental(20)
    with pytest.raises(DomainError):
        class_number_fundamental(5, method="series")


@pytest.mark.slow
def test_class_numbers_large_dimension():
    d = 10 ** 6 + 3
    disc = fundamental_discriminant((d - 3) * (d + 1))
    assert (disc.delta0, disc.f) == (89, 106000)
    divs = [f for f in range(1, disc.f + 1) if disc.f % f == 0]
    assert len(divs) == 40
    pairs = [(f, class_number_order(89, f, method="formula")[0]) for f in divs]
    assert pairs[:10] == [(1, 1), (2, 1), (4, 1), (5, 2), (8, 2), (10, 2), (16, 4), (20, 4), (25, 10), (40, 8)]
    assert pairs[-1] == (106000, 20800)


def test_class_number_rejects():
    with pytest.raises(DomainError):
        class_number_order(20, 1)
    with pytest.raises(BoundError):
        class_number_order(5, 1000, method="enumerate", enum_bound=1000)
