""" Command line surface: python -m ghostsic <command> [flags].

Every run writes into a timestamped directory under --out, next to its log
file. The exit status is 0 when every residual gate passes, 1 when a gate
fails, and the exception's exit status on errors.
"""
from os.path import join
import argparse
import logging

from mpmath import mp
from sympy import divisors

from .artifacts import encode_quadratic, encode_real, load_json, overlaps_record, save_json, \
    save_table, sic_record, tuple_record, load_sic_vector
from .config import MIN_PREC, default_prec, defaults
from .errors import ConfigError, GhostSicError
from .ghost import alignment_check, ghost_fiducial, ghost_overlaps, overlap_residual, \
    residual_shrinks, shift_scan, tcc_residuals, tcc_tables, tolerance
from .hjcf import word_decompose
from .logsetup import setup_logging
from .necromancy import SicCandidate, necromancy, verify_sic
from .numtheory import class_number_order, fundamental_discriminant, unit_index
from .parallel import shard_map
from .quadforms import QuadForm, principal_form, stabilizers
from .towers import admissible_pairs, anti_unitary_type, make_tuple, pair_to_triple, tower, \
    odd_trace_density
from .weylheis import order3_class


def _num(x):
    return mp.nstr(x, 12)


def build_parser():
    parser = argparse.ArgumentParser(prog="ghostsic",
                                     description="Ghost SIC fiducials from Shintani-Faddeev cocycles")
    parser.add_argument('--out', type=str, default=defaults.out,
                        help='directory under which timestamped run directories are created')
    parser.add_argument('--threads', type=int, default=defaults.threads,
                        help='number of worker processes')
    parser.add_argument('--log-level', type=str, default='INFO',
                        help='console log level')
    parser.add_argument('--no-progbar', action='store_true',
                        help='disable progress bars')
    parser.add_argument('--prec', type=int, default=None,
                        help='working precision in bits (default from GHOSTSIC_PREC or {})'.format(defaults.prec))
    parser.add_argument('--format', type=str, default=defaults.format, choices=['json', 'csv'],
                        help='format of table artifacts')
    sub = parser.add_subparsers(dest='command')

    p = sub.add_parser('tower', help='dimension tower of a real quadratic field')
    p.add_argument('--disc', type=int, required=True, help='discriminant, reduced to its fundamental part')
    p.add_argument('--jmax', type=int, default=8, help='number of tower levels')

    p = sub.add_parser('pairs', help='admissible (d, r) pairs with r > 1')
    p.add_argument('--dmax', type=int, required=True, help='largest dimension')

    p = sub.add_parser('classify', help='Galois multiplets and class numbers of rank-1 SICs')
    p.add_argument('--d', type=int, default=None, help='single dimension')
    p.add_argument('--dmax', type=int, default=None, help='classify every dimension 4..dmax')
    p.add_argument('--method', type=str, default='auto', choices=['auto', 'enumerate', 'formula'],
                   help='class number method')

    for name in ('ghost', 'tcc'):
        p = sub.add_parser(name, help='ghost fiducial' if name == 'ghost' else 'twisted convolution residuals')
        p.add_argument('--d', type=int, required=True, help='dimension')
        p.add_argument('--r', type=int, default=1, help='rank')
        p.add_argument('--form', type=str, required=True, help='binary quadratic form a,b,c')
        p.add_argument('--shift', type=int, default=defaults.shift if name == 'ghost' else None,
                       help='shift lambda (tcc scans all candidates when omitted)')
        p.add_argument('--confirm', action='store_true',
                       help='repeat at doubled precision and require the residual to shrink')

    p = sub.add_parser('necromancy', help='live SIC fiducial from a rank-1 ghost')
    p.add_argument('--d', type=int, required=True, help='dimension')
    p.add_argument('--form', type=str, required=True, help='binary quadratic form a,b,c')
    p.add_argument('--target-prec', type=int, default=defaults.target_prec, help='Newton target in bits')

    p = sub.add_parser('verify', help='re-check a saved SIC fiducial')
    p.add_argument('--in', dest='infile', type=str, required=True, help='sic.json written by necromancy')

    p = sub.add_parser('align', help='alignment between tower levels j and nj')
    p.add_argument('--disc', type=int, required=True, help='fundamental discriminant')
    p.add_argument('--j', type=int, default=1, help='tower level')
    p.add_argument('--n', type=int, default=2, help='power, coprime to 3')

    p = sub.add_parser('density', help='odd-trace density of fundamental units')
    p.add_argument('--bound', type=int, default=defaults.density_bound, help='largest discriminant')
    return parser


def validate_args(args):
    """ Fill defaults and check precision >= 64 bits and d >= 4. """
    if args.command is None:
        raise ConfigError("no command given")
    if args.prec is None:
        args.prec = default_prec()
    if args.prec < MIN_PREC:
        raise ConfigError("--prec {} is below the minimum of {} bits".format(args.prec, MIN_PREC))
    if getattr(args, 'd', None) is not None and args.d < 4:
        raise ConfigError("--d must be at least 4, got {}".format(args.d))
    if args.command == 'classify' and args.d is None and args.dmax is None:
        raise ConfigError("classify needs --d or --dmax")
    if not hasattr(logging, args.log_level.upper()):
        raise ConfigError("unknown log level {!r}".format(args.log_level))
    args.progbar = not args.no_progbar
    return args


def cmd_tower(args, run_dir, logger=None):
    delta0 = fundamental_discriminant(args.disc).delta0
    rows = tower(delta0, args.jmax)
    save_table(rows, join(run_dir, "tower." + args.format), args.format)
    if logger:
        logger.info("Q(sqrt {}): d_j = {}".format(delta0, [row["d_j"] for row in rows]))
    return True


def cmd_pairs(args, run_dir, logger=None):
    rows = [dict(zip(("d", "r", "delta0", "j", "m"), row)) for row in admissible_pairs(args.dmax, logger)]
    save_table(rows, join(run_dir, "pairs." + args.format), args.format)
    return True


def classify_dimension(d, method="auto", logger=None):
    """ One row per conductor f | f_j for the rank-1 tuples of dimension d. """
    (delta0, j, m) = pair_to_triple(d, 1)
    rows = []
    f_j = make_tuple(d, 1, principal_form(delta0)).f_j
    for f in divisors(f_j):
        (h, _) = class_number_order(delta0, f, method, logger=logger)
        t = make_tuple(d, 1, principal_form(delta0, f))
        (L, L_pos, L_z, A) = stabilizers(t)
        word = word_decompose(A) if A.gamma > 0 else word_decompose(A.inverse())
        rows.append({"d": d, "delta0": delta0, "f": f, "h": h, "unit_index": unit_index(delta0, f),
                     "anti_unitary": anti_unitary_type(t) == "anti-unitary",
                     "order3": order3_class(d, L_z.mod(t.dbar)), "word_length": word.n})
    return rows


def _classify_chunk(items):
    return [classify_dimension(d, method) for (d, method) in items]


def cmd_classify(args, run_dir, logger=None):
    dims = [args.d] if args.d is not None else list(range(4, args.dmax + 1))
    chunks = shard_map(_classify_chunk, [(d, args.method) for d in dims], args.threads,
                       progbar=args.progbar, logger=logger)
    rows = [row for chunk in chunks for row in chunk]
    save_table(rows, join(run_dir, "classify." + args.format), args.format)
    if logger:
        for d in dims:
            total = sum(row["h"] for row in rows if row["d"] == d)
            logger.info("d = {}: {} orbits".format(d, total))
    return True


def _tuple_from_args(args):
    return make_tuple(args.d, getattr(args, 'r', 1), QuadForm.parse(args.form))


def cmd_ghost(args, run_dir, logger=None):
    t = _tuple_from_args(args)
    table = ghost_overlaps(t, args.prec, args.threads, args.progbar, logger)
    ghost = ghost_fiducial(t, args.shift, args.prec, table, logger)
    residuals = dict(ghost.residuals)
    residuals["overlap"] = overlap_residual(ghost)
    residuals["product"] = table.product_residual()
    gate = tolerance(args.prec)
    passed = all(v < gate for v in residuals.values())
    if args.confirm:
        (coarse, fine, shrinks) = residual_shrinks(
            lambda bits: ghost_fiducial(t, args.shift, bits, logger=logger).residuals["idempotency"], args.prec)
        residuals["idempotency_doubled"] = fine
        passed = passed and shrinks
    save_json({"tuple": tuple_record(t), "shift": ghost.shift, "twist": list(ghost.twist),
               "prec_bits": args.prec, "overlaps": overlaps_record(table),
               "residuals": dict((k, _num(v)) for (k, v) in residuals.items()), "passed": passed},
              join(run_dir, "ghost.json"))
    return passed


def cmd_tcc(args, run_dir, logger=None):
    t = _tuple_from_args(args)
    tables = tcc_tables(t, args.prec, args.progbar, logger)
    gate = tolerance(args.prec)
    if args.shift is None:
        rows = shift_scan(t, args.prec, tables=tables, logger=logger)
        for row in rows:
            row["residual"] = _num(row["residual"])
        save_table(rows, join(run_dir, "shifts." + args.format), args.format)
        return True
    residuals = tcc_residuals(t, args.shift, args.prec, tables, args.progbar)
    worst = max(abs(x) for x in residuals.values())
    passed = worst < gate
    record = {"tuple": tuple_record(t), "shift": args.shift, "prec_bits": args.prec, "max": _num(worst),
              "residuals": [{"p": list(p), "residual": _num(abs(x))} for (p, x) in sorted(residuals.items())]}
    if args.confirm:
        def worst_at(bits):
            return max(abs(x) for x in tcc_residuals(t, args.shift, bits).values())
        (coarse, fine, shrinks) = residual_shrinks(worst_at, args.prec)
        record["max_doubled"] = _num(fine)
        passed = passed and shrinks
    record["passed"] = passed
    save_json(record, join(run_dir, "tcc.json"))
    if logger:
        logger.info("TCC shift {}: max residual {}".format(args.shift, _num(worst)))
    return passed


def cmd_necromancy(args, run_dir, logger=None):
    t = make_tuple(args.d, 1, QuadForm.parse(args.form))
    (candidate, inv, report) = necromancy(t, args.prec, args.target_prec, progbar=args.progbar, logger=logger)
    gate = tolerance(args.target_prec)
    passed = report["passed"] and report["symmetry"] < gate
    record = sic_record(candidate, t)
    record["residuals"] = dict((k, _num(v)) for (k, v) in report.items() if k != "passed")
    record["invariants"] = {
        "base_point": list(inv.base_point),
        "orders": inv.orders,
        "e": [encode_quadratic(x) for x in inv.e],
        "a": [{"q": list(q), "coefficients": [encode_quadratic(x) for x in c]} for (q, c) in sorted(inv.a.items())],
        "b": [[encode_quadratic(x) for x in c] for c in inv.b],
    }
    record["passed"] = passed
    save_json(record, join(run_dir, "sic.json"))
    return passed


def cmd_verify(args, run_dir, logger=None):
    obj = load_json(args.infile)
    try:
        (psi, prec) = load_sic_vector(obj)
    except (KeyError, TypeError, ValueError) as err:
        raise ConfigError("{} is not a SIC artifact: {}".format(args.infile, err))
    candidate = SicCandidate(psi, psi.rows, None, None, prec, obj.get("candidate_shift"))
    report = verify_sic(candidate)
    save_json(dict((k, v if isinstance(v, bool) else _num(v)) for (k, v) in report.items()),
              join(run_dir, "verify.json"))
    if logger:
        logger.info("verify {}: {}".format(args.infile, "passed" if report["passed"] else "FAILED"))
    return report["passed"]


def cmd_align(args, run_dir, logger=None):
    deviation = alignment_check(args.disc, args.j, args.n, args.prec, logger)
    passed = deviation < tolerance(args.prec)
    save_json({"disc": args.disc, "j": args.j, "n": args.n, "prec_bits": args.prec,
               "deviation": encode_real(deviation, args.prec), "passed": passed},
              join(run_dir, "align.json"))
    return passed


def cmd_density(args, run_dir, logger=None):
    (density, count) = odd_trace_density(args.bound, args.threads, args.progbar, logger)
    save_table([{"bound": args.bound, "fields": count, "density": density}],
               join(run_dir, "density." + args.format), args.format)
    return True


COMMANDS = {
    'tower': cmd_tower,
    'pairs': cmd_pairs,
    'classify': cmd_classify,
    'ghost': cmd_ghost,
    'tcc': cmd_tcc,
    'necromancy': cmd_necromancy,
    'verify': cmd_verify,
    'align': cmd_align,
    'density': cmd_density,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        validate_args(args)
    except ConfigError as err:
        parser.print_usage()
        print("ghostsic: error [{}]: {}".format(err.code, err))
        return err.exit_status

    (logger, run_dir) = setup_logging(args.out, args.command.upper(), getattr(logging, args.log_level.upper()))
    logger.info("Arguments: {}".format(vars(args)))
    try:
        passed = COMMANDS[args.command](args, run_dir, logger)
    except GhostSicError as err:
        logger.error("[{}] {}".format(err.code, err))
        save_json(err.report(), join(run_dir, "error.json"))
        return err.exit_status
    if not passed:
        logger.warning("residual gate failed, report in {}".format(run_dir))
        return 1
    return 0
