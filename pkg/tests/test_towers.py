import pytest

from ghostsic.errors import DomainError
from ghostsic.parallel import shard_map
from ghostsic.quadforms import QuadForm, principal_form
from ghostsic.towers import _odd_trace_chunk, admissible_pairs, anti_unitary_type, chebyshev_variant, \
    conductor_sequence, grid, j_min, make_tuple, odd_trace_density, pair_to_triple, tower


GRID_D = [[4, 11, 29, 76], [8, 55, 377, 2584], [19, 341, 6119, 109801], [48, 2255, 105937, 4976784]]
GRID_R = [[1, 3, 8, 21], [1, 7, 48, 329], [1, 18, 323, 5796], [1, 47, 2208, 103729]]

FIRST_PAIRS = [
    (11, 3, 5, 1, 2), (19, 4, 3, 1, 2), (29, 5, 21, 1, 2), (29, 8, 5, 1, 3), (41, 6, 2, 1, 2),
    (55, 7, 5, 2, 2), (71, 8, 15, 1, 2), (71, 15, 3, 1, 3), (76, 21, 5, 1, 4), (89, 9, 77, 1, 2),
    (109, 10, 6, 1, 2), (131, 11, 13, 1, 2), (139, 24, 21, 1, 3), (155, 12, 35, 1, 2), (181, 13, 165, 1, 2),
    (199, 55, 5, 1, 5), (209, 14, 3, 2, 2), (239, 15, 221, 1, 2), (239, 35, 2, 1, 3), (265, 56, 3, 1, 4),
    (271, 16, 7, 1, 2), (305, 17, 285, 1, 2), (341, 18, 5, 3, 2), (377, 48, 5, 2, 3), (379, 19, 357, 1, 2),
    (419, 20, 11, 1, 2), (461, 21, 437, 1, 2), (505, 22, 30, 1, 2), (521, 144, 5, 1, 6), (551, 23, 21, 2, 2),
]


def _delta0(D):
    return D if D % 4 == 1 else 4 * D


def test_conductors_of_golden_field():
    assert conductor_sequence(5, 8) == [1, 3, 8, 21, 55, 144, 377, 987]
    assert [row["d_j"] for row in tower(5, 4)] == [4, 8, 19, 48]


def test_grid():
    for j in range(1, 5):
        for m in range(1, 5):
            entry = grid(5, j, m)
            assert (entry.d_jm, entry.r_jm) == (GRID_D[j - 1][m - 1], GRID_R[j - 1][m - 1])
    assert grid(5, 1, 2).f_jm == 3
    with pytest.raises(DomainError):
        grid(5, 0, 1)


def test_chebyshev_variants():
    assert [chebyshev_variant("T*", j, 4) for j in range(1, 5)] == [4, 8, 19, 48]
    assert chebyshev_variant("U", 3, 4) == 8
    with pytest.raises(DomainError):
        chebyshev_variant("V", 1, 4)


@pytest.mark.parametrize("d, r, triple", [
    (4, 1, (5, 1, 1)),
    (11, 3, (5, 1, 2)),
    (8, 1, (5, 2, 1)),
    (10, 1, (77, 1, 1)),
    (11, 2, None),
    (5, 2, None),
    (3, 1, None),
])
def test_pair_to_triple(d, r, triple):
    assert pair_to_triple(d, r) == triple


def test_first_admissible_pairs():
    expected = [(d, r, _delta0(D), j, m) for (d, r, D, j, m) in FIRST_PAIRS]
    assert admissible_pairs(551)[:30] == expected


def test_make_tuple():
    t = make_tuple(4, 1, QuadForm(1, -3, 1))
    assert (t.delta0, t.j, t.m, t.f, t.f_j, t.d_j, t.dbar, t.f_jm) == (5, 1, 1, 1, 1, 4, 8, 1)
    t = make_tuple(11, 3, QuadForm(1, -3, 1))
    assert (t.j, t.m, t.dbar, t.f_jm) == (1, 2, 11, 3)
    with pytest.raises(DomainError):
        make_tuple(4, 1, principal_form(8))
    with pytest.raises(DomainError):
        make_tuple(4, 1, principal_form(5, 2))
    with pytest.raises(DomainError):
        make_tuple(11, 2, QuadForm(1, -3, 1))


def test_j_min():
    assert j_min(5, 1) == 1
    assert j_min(5, 8) == 3
    assert j_min(5, 7) == 4


def test_anti_unitary_type():
    assert anti_unitary_type(make_tuple(4, 1, QuadForm(1, -3, 1))) == "anti-unitary"


def test_shard_map_matches_inline():
    discs = [5, 13, 21, 29, 37, 53, 61, 69, 77, 85, 93]
    assert shard_map(_odd_trace_chunk, discs, threads=3) == _odd_trace_chunk(discs)
    assert shard_map(_odd_trace_chunk, [], threads=3) == []


@pytest.mark.slow
def test_odd_trace_density():
    (density, count) = odd_trace_density(bound=10 ** 5, threads=2)
    assert count > 5000
    assert 0.64 <= density <= 0.70
