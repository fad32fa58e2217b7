from fractions import Fraction
import os

from mpmath import mp, mpf

from ghostsic.artifacts import decode_complex, decode_quadratic, decode_real, encode_complex, \
    encode_quadratic, encode_real, load_sic_vector, load_table, save_json, load_json, save_table, \
    sic_record, tuple_record
from ghostsic.necromancy import SicCandidate
from ghostsic.quadforms import QuadForm
from ghostsic.towers import make_tuple


def test_reals_keep_their_bits():
    for prec in (64, 256):
        with mp.workprec(prec):
            x = mp.sqrt(5) - 2
            z = mp.mpc(mp.pi, -mp.e)
        assert decode_real(encode_real(x, prec), prec) == x
        assert decode_complex(encode_complex(z, prec), prec) == z


def test_quadratic_pairs():
    pair = (Fraction(2), Fraction(-1, 3))
    obj = encode_quadratic(pair)
    assert obj == {"u": [2, 1], "v": [-1, 3]}
    assert decode_quadratic(obj) == pair


def test_tables(tmp_path):
    rows = [{"d": 4, "h": 1}, {"d": 11, "h": 3}]
    for fmt in ("json", "csv"):
        path = os.path.join(str(tmp_path), "rows." + fmt)
        save_table(rows, path, fmt)
        assert load_table(path) == rows


def test_tuple_record():
    record = tuple_record(make_tuple(11, 3, QuadForm(1, -3, 1)))
    assert record == {"d": 11, "r": 3, "form": [1, -3, 1], "delta0": 5, "j": 1, "m": 2,
                      "f": 1, "f_j": 1, "d_j": 4}


def test_sic_record_round_trip(tmp_path):
    prec = 96
    with mp.workprec(prec):
        psi = mp.matrix([[0], [1], [-1]]) / mp.sqrt(2)
    candidate = SicCandidate(psi, 3, None, mpf(0), prec, {"root": 0, "sign": -1})
    path = os.path.join(str(tmp_path), "sic.json")
    save_json(sic_record(candidate), path)
    obj = load_json(path)
    assert obj["prec_bits"] == prec
    assert obj["candidate_shift"] == {"root": 0, "sign": -1}
    (loaded, bits) = load_sic_vector(obj)
    assert bits == prec
    assert all(loaded[k] == psi[k] for k in range(3))
