""" JSON and CSV artifacts.

Reals and complex numbers are written as decimal strings carrying enough
digits for their precision, next to an explicit "prec_bits" field, so a file
loads back to the same binary values. Exact rationals are [num, den] pairs.
"""
from fractions import Fraction
from math import log10
import json

import pandas as pd
from mpmath import mp, mpf, mpc


def digits(prec):
    return int(prec * log10(2)) + 3


def encode_real(x, prec):
    with mp.workprec(prec):
        return mp.nstr(mpf(x), digits(prec), strip_zeros=False, min_fixed=1, max_fixed=0)


def decode_real(text, prec):
    with mp.workprec(prec):
        return +mpf(text)


def encode_complex(z, prec):
    with mp.workprec(prec):
        z = mpc(z)
    return [encode_real(z.real, prec), encode_real(z.imag, prec)]


def decode_complex(pair, prec):
    with mp.workprec(prec):
        return mpc(decode_real(pair[0], prec), decode_real(pair[1], prec))


def encode_rational(q):
    q = Fraction(q)
    return [q.numerator, q.denominator]


def decode_rational(pair):
    return Fraction(pair[0], pair[1])


def encode_quadratic(pair):
    """ u + v sqrt(delta0) as {u: [num, den], v: [num, den]}. """
    return {"u": encode_rational(pair[0]), "v": encode_rational(pair[1])}


def decode_quadratic(obj):
    return (decode_rational(obj["u"]), decode_rational(obj["v"]))


def save_json(obj, path):
    with open(path, "w") as fjson:
        json.dump(obj, fjson, indent=1, sort_keys=True)


def load_json(path):
    with open(path) as fjson:
        return json.load(fjson)


def save_table(rows, path, fmt="json"):
    """ List of flat dicts as JSON records or as CSV through pandas. """
    if fmt == "csv":
        pd.DataFrame(rows).to_csv(path, index=False)
    elif fmt == "json":
        save_json(rows, path)
    else:
        raise ValueError("unknown table format {!r}".format(fmt))


def load_table(path):
    if path.endswith(".csv"):
        return pd.read_csv(path).to_dict("records")
    return load_json(path)


def tuple_record(t):
    return {"d": t.d, "r": t.r, "form": [t.Q.a, t.Q.b, t.Q.c], "delta0": t.delta0, "j": t.j,
            "m": t.m, "f": t.f, "f_j": t.f_j, "d_j": t.d_j}


def overlaps_record(table):
    """ Ghost overlap table as a list of {p, nu} with decimal strings. """
    return [{"p": list(p), "nu": encode_real(table.nu[p], table.prec)} for p in sorted(table.nu)]


def sic_record(candidate, t=None):
    """ SIC candidate as a JSON-ready dict. """
    prec = candidate.prec
    out = {
        "d": candidate.d,
        "prec_bits": prec,
        "psi": [encode_complex(candidate.psi[k], prec) for k in range(candidate.d)],
        "residual": encode_real(candidate.residual, prec),
        "candidate_shift": candidate.label,
    }
    if t is not None:
        out["form"] = [t.Q.a, t.Q.b, t.Q.c]
    return out


def load_sic_vector(obj):
    """ psi components of a saved SIC candidate as an mpmath column. """
    prec = obj["prec_bits"]
    with mp.workprec(prec):
        psi = mp.matrix(len(obj["psi"]), 1)
        for (k, pair) in enumerate(obj["psi"]):
            psi[k] = decode_complex(pair, prec)
    return (psi, prec)
