import pytest

from ghostsic.errors import DomainError
from ghostsic.hjcf import euclid_to_hj, hj_expand, hj_value, is_hj_reduced, minimal_form, \
    periodic_expansion, stabilizer_word, word_decompose, word_matrix
from ghostsic.quadforms import QuadForm, Mat2Z, S, T, roots


GOLDEN = QuadForm(1, -3, 1)


def test_expand_golden_square():
    (rho, _) = roots(GOLDEN, prec=128)
    assert hj_expand(rho, 6, prec=128) == [3, 3, 3, 3, 3, 3]
    assert abs(hj_value([3] * 60, prec=128) - rho) < 1e-30


def test_hj_value_finite():
    assert abs(hj_value([2, 2, 2], prec=64) - 4 / 3.0) < 1e-15


def test_periodic_expansion():
    expansion = periodic_expansion(GOLDEN)
    assert expansion.preperiod == []
    assert expansion.period == [3]
    assert is_hj_reduced(GOLDEN)
    assert not is_hj_reduced(QuadForm(1, 1, -1))


@pytest.mark.parametrize("M", [S, Mat2Z(21, -8, 8, -3), Mat2Z(3, -1, 1, 0), Mat2Z(2, 3, 1, 2), T * S * T ** 4])
def test_word_round_trip(M):
    word = word_decompose(M)
    assert word_matrix(list(word.exponents)) == M
    assert word.n == len(word.endpoints)


def test_word_decompose_rejects():
    with pytest.raises(DomainError):
        word_decompose(Mat2Z(2, 0, 0, 1))
    with pytest.raises(DomainError):
        word_decompose(T)


def test_euclid_to_hj_and_minimal_form():
    assert euclid_to_hj(QuadForm(1, 1, -1)) == GOLDEN
    assert minimal_form([QuadForm(1, 1, -1)]) == GOLDEN
    with pytest.raises(DomainError):
        euclid_to_hj(QuadForm(-1, 1, 1))
    with pytest.raises(DomainError):
        minimal_form([])


def test_stabilizer_word():
    M = stabilizer_word(GOLDEN)
    assert M == Mat2Z(3, -1, 1, 0)
    assert M.det() == 1
