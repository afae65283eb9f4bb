"""Command-line front end.

Exit codes: 0 success, 1 an ``--assert``/``--expect`` check failed,
2 input error, 3 the engine refused (unsuitable input, no unique minimal
subrelation, not an isomorphism), 4 internal consistency failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from . import grid as gridmod
from . import serialize as ser
from .dynamics import commuting_check, maps_relation, orbit, pair_table, path_check
from .errors import InputError, Refusal, RelcalcError, Unreachable
from .relation import compose, costar, image, inverse, iterate, preimage
from .semilinear import parse_rat, to_records
from .suitable import (
    one_set,
    selection_check,
    singleton_map,
    suitability_report,
    suitable_compose,
    suitable_iterate,
    unique_minimal,
)
from .worked import EXAMPLES, run_worked_examples

EXIT_OK, EXIT_ASSERT, EXIT_INPUT, EXIT_REFUSED, EXIT_INTERNAL = 0, 1, 2, 3, 4


def _emit(text: str, path=None):
    if path:
        Path(path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _emit_json(obj, path=None):
    _emit(json.dumps(obj, indent=2, ensure_ascii=False) + "\n", path)


def _emit_rel(rel, args) -> int:
    _emit(ser.dump(rel), args.output)
    if getattr(args, "expect", None):
        if rel != ser.load_relation(args.expect):
            print(f"relcalc: result differs from {args.expect}", file=sys.stderr)
            return EXIT_ASSERT
    return EXIT_OK


def _verdict(value: bool, args, label: str) -> int:
    _emit_json({label: value})
    return EXIT_ASSERT if args.assert_ and not value else EXIT_OK


# command handlers


def cmd_compose(args):
    return _emit_rel(compose(ser.load_relation(args.g), ser.load_relation(args.f)), args)


def cmd_suitable_compose(args):
    return _emit_rel(suitable_compose(ser.load_relation(args.g), ser.load_relation(args.f)), args)


def cmd_inverse(args):
    return _emit_rel(inverse(ser.load_relation(args.f)), args)


def cmd_iterate(args):
    f = ser.load_relation(args.f)
    rel = suitable_iterate(f, args.n) if args.suitable else iterate(f, args.n)
    return _emit_rel(rel, args)


def cmd_check(args):
    rep = suitability_report(ser.load_relation(args.f))
    _emit_json(ser.report_record(rep), args.output)
    for flag in args.assert_flags or ():
        if flag not in rep.FLAGS:
            raise InputError(f"unknown report flag {flag!r}; choose from {', '.join(rep.FLAGS)}")
        if not getattr(rep, flag):
            return EXIT_ASSERT
    return EXIT_OK


def cmd_minimal(args):
    return _emit_rel(unique_minimal(ser.load_relation(args.f)), args)


def cmd_one_set(args):
    f = ser.load_relation(args.f)
    _emit_json({"one": to_records(one_set(f)), "text": str(one_set(f)), "map": ser.fun_to_record(singleton_map(f))}, args.output)
    return EXIT_OK


def _set_command(op):
    def run(args):
        f = ser.load_relation(args.f)
        space = f.src if op is image else f.dst
        result = op(f, ser.parse_set_arg(space, args.set))
        _emit_json(ser.fset_record(result), args.output)
        return EXIT_OK

    return run


def cmd_orbit(args):
    f = ser.load_relation(args.f)
    res = orbit(f, parse_rat(args.x), args.n, "backward" if args.backward else "forward")
    _emit_json(res.as_dict(), args.output)
    return EXIT_OK


def cmd_path_check(args):
    f = ser.load_relation(args.f)
    return _verdict(path_check(f, [parse_rat(p) for p in args.points]), args, "in_path_space")


def cmd_pair_table(args):
    f = ser.load_relation(args.f)
    table = pair_table(f, args.n_from, args.n_to)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    rows = [("n", "iterate", "suitable", "gap_cells")]
    for row in table.rows:
        tag = f"m{-row.n}" if row.n < 0 else str(row.n)
        it, su = out_dir / f"iterate_{tag}.json", out_dir / f"suitable_{tag}.json"
        ser.dump(row.iterate, it)
        ser.dump(row.suitable, su)
        rows.append((str(row.n), str(it), str(su), str(len(row.gap.simplified().cells))))
    if args.output:
        with open(args.output, "w", newline="", encoding="utf-8") as fh:
            csv.writer(fh, lineterminator="\n").writerows(rows)
    else:
        csv.writer(sys.stdout, lineterminator="\n").writerows(rows)
    return EXIT_OK


def cmd_maps(args):
    h = ser.load_function(args.via)
    return _verdict(maps_relation(h, ser.load_relation(args.g), ser.load_relation(args.f)), args, "maps")


def cmd_commute(args):
    h = ser.load_function(args.via)
    return _verdict(commuting_check(h, ser.load_relation(args.g), ser.load_relation(args.f)), args, "commutes")


def cmd_selection(args):
    g = ser.load_function(args.g)
    is_sel, qc = selection_check(g, ser.load_relation(args.f))
    _emit_json({"is_selection": is_sel, "quasi_continuous": qc})
    return EXIT_ASSERT if args.assert_ and not (is_sel and qc) else EXIT_OK


def cmd_rasterize(args):
    g = gridmod.rasterize(ser.load_relation(args.f), args.k)
    if args.pbm:
        Path(args.pbm).write_bytes(gridmod.to_pbm(g))
    if args.output:
        Path(args.output).write_bytes(gridmod.to_bits(g))
    if not args.pbm and not args.output:
        _emit_json({"k": g.k, "rows": g.shape[0], "cols": g.shape[1], "boxes": g.count()})
    return EXIT_OK


def cmd_render(args):
    _emit(ser.render_svg(ser.load_relation(args.f)), args.svg)
    return EXIT_OK


def cmd_examples(args):
    if args.list or args.names is None:
        for name, ex in EXAMPLES.items():
            print(f"{name}: {ex.summary}")
        return EXIT_OK
    names = args.names or None
    for n in names or ():
        if n not in EXAMPLES:
            raise InputError(f"unknown example {n!r}")
    failed = False
    for name, checks in run_worked_examples(names).items():
        ok = all(v for _, v in checks)
        failed |= not ok
        print(f"{'PASS' if ok else 'FAIL'} {name}")
        for label, v in checks:
            print(f"    {'ok  ' if v else 'FAIL'} {label}")
    return EXIT_ASSERT if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="relcalc", description="Exact calculus of closed piecewise-linear relations.")
    sub = p.add_subparsers(dest="command", required=True)

    def rel_out(sp):
        sp.add_argument("-o", "--output", help="write the relation file here (default: stdout)")
        sp.add_argument("--expect", help="exit 1 unless the result equals this relation file")

    sp = sub.add_parser("compose", help="plain composition G o F")
    sp.add_argument("g")
    sp.add_argument("f")
    rel_out(sp)
    sp.set_defaults(run=cmd_compose)

    sp = sub.add_parser("suitable-compose", help="suitable composition G • F")
    sp.add_argument("g")
    sp.add_argument("f")
    rel_out(sp)
    sp.set_defaults(run=cmd_suitable_compose)

    sp = sub.add_parser("inverse", help="coordinate swap")
    sp.add_argument("f")
    rel_out(sp)
    sp.set_defaults(run=cmd_inverse)

    sp = sub.add_parser("iterate", help="n-th iterate (negative n uses the inverse)")
    sp.add_argument("f")
    sp.add_argument("-n", type=int, required=True)
    sp.add_argument("--suitable", action="store_true", help="suitable iterate")
    rel_out(sp)
    sp.set_defaults(run=cmd_iterate)

    sp = sub.add_parser("check", help="suitability report")
    sp.add_argument("f")
    sp.add_argument("-o", "--output")
    sp.add_argument("--assert", dest="assert_flags", action="append", metavar="FLAG", help="exit 1 unless FLAG is true")
    sp.set_defaults(run=cmd_check)

    sp = sub.add_parser("minimal", help="unique minimal full-domain subrelation")
    sp.add_argument("f")
    rel_out(sp)
    sp.set_defaults(run=cmd_minimal)

    sp = sub.add_parser("one-set", help="singleton-fibre set and its map")
    sp.add_argument("f")
    sp.add_argument("-o", "--output")
    sp.set_defaults(run=cmd_one_set)

    for name, op in (("image", image), ("preimage", preimage), ("costar", costar)):
        sp = sub.add_parser(name, help=f"{name} of a flagged set")
        sp.add_argument("f")
        sp.add_argument("--set", required=True, help='e.g. "[0,1/4] | {1/2}", a JSON record list, or @file')
        sp.add_argument("-o", "--output")
        sp.set_defaults(run=_set_command(op))

    sp = sub.add_parser("orbit", help="orbit of the singleton-fibre map")
    sp.add_argument("f")
    sp.add_argument("-x", required=True)
    sp.add_argument("-n", type=int, default=100)
    sp.add_argument("--backward", action="store_true")
    sp.add_argument("-o", "--output")
    sp.set_defaults(run=cmd_orbit)

    sp = sub.add_parser("path-check", help="is a finite sequence a sample-path prefix?")
    sp.add_argument("f")
    sp.add_argument("points", nargs="+")
    sp.add_argument("--assert", dest="assert_", action="store_true")
    sp.set_defaults(run=cmd_path_check)

    sp = sub.add_parser("pair-table", help="iterates versus suitable iterates")
    sp.add_argument("f")
    sp.add_argument("--from", dest="n_from", type=int, default=0)
    sp.add_argument("--to", dest="n_to", type=int, required=True)
    sp.add_argument("--out-dir", default=".", help="directory for the row relation files")
    sp.add_argument("-o", "--output", help="CSV path (default: stdout)")
    sp.set_defaults(run=cmd_pair_table)

    for name, fn, helptext in (
        ("maps", cmd_maps, "does h carry G into F?"),
        ("commute", cmd_commute, "is h • G equal to F • h?"),
    ):
        sp = sub.add_parser(name, help=helptext)
        sp.add_argument("g")
        sp.add_argument("f")
        sp.add_argument("--via", required=True, help="function file for h")
        sp.add_argument("--assert", dest="assert_", action="store_true")
        sp.set_defaults(run=fn)

    sp = sub.add_parser("selection", help="selection and quasi-continuity check")
    sp.add_argument("g", help="function file")
    sp.add_argument("f", help="relation file")
    sp.add_argument("--assert", dest="assert_", action="store_true")
    sp.set_defaults(run=cmd_selection)

    sp = sub.add_parser("rasterize", help="outer box cover at level k")
    sp.add_argument("f")
    sp.add_argument("-k", type=int, required=True)
    sp.add_argument("--pbm", help="write a binary PBM image")
    sp.add_argument("-o", "--output", help="write the raw bit dump")
    sp.set_defaults(run=cmd_rasterize)

    sp = sub.add_parser("render", help="SVG drawing")
    sp.add_argument("f")
    sp.add_argument("--svg", help="output path (default: stdout)")
    sp.set_defaults(run=cmd_render)

    sp = sub.add_parser("examples", help="built-in worked examples")
    sp.add_argument("--list", action="store_true")
    sp.add_argument("--run", dest="names", nargs="*", metavar="NAME", help="run the named examples (all when none given)")
    sp.set_defaults(run=cmd_examples)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.run(args)
    except Refusal as e:
        witness = getattr(e, "witness", None)
        extra = f" (witness {witness})" if witness is not None else ""
        print(f"relcalc: refused [{e.code}]: {e}{extra}", file=sys.stderr)
        return EXIT_REFUSED
    except Unreachable as e:
        print(f"relcalc: internal [{e.code}]: {e}", file=sys.stderr)
        return EXIT_INTERNAL
    except RelcalcError as e:
        print(f"relcalc: error [{e.code}]: {e}", file=sys.stderr)
        return EXIT_INPUT


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
