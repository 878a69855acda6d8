"""Command line front end.

Exit codes: 0 success, 1 unbalanced input (``validate``), 2 failed
verification (``construct``, ``check``), 64 usage error, 65 malformed input,
66 unreadable or unwritable file.  Diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from .calculus import normalize
from .construct import ConstructionError, ConstructionOutput, check_output_identities, verify_z_system, build_plumbing
from .formats import (
    FormatError,
    dump_resolution,
    parse_plumbing,
    read_resolution,
    serialize_plumbing,
)
from .graph import export_dot
from .resolution import (
    ResolutionError,
    check_balance,
    components_gamma1,
    gen_tab,
    partition,
    solve_mult_pair,
)

EX_UNBALANCED = 1
EX_VERIFY = 2
EX_USAGE = 64
EX_DATAERR = 65
EX_NOINPUT = 66


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(f"{self.prog}: {message}")


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _err(msg: str) -> None:
    print(msg, file=sys.stderr)


def _load_solved(path: str):
    gamma, mp, arrow_m, arrow_l = read_resolution(_read(path))
    if mp is None:
        mp = solve_mult_pair(gamma, arrow_m, arrow_l)
    return gamma, mp


def cmd_validate(args) -> int:
    gamma, mp, _, _ = read_resolution(_read(args.input))
    if mp is None:
        _err("no multiplicities to validate; run 'solve' first")
        return EX_DATAERR
    bad = check_balance(gamma, mp)
    if bad:
        _err(f"{'vertex':<12} {'family':<6} residual")
        for w, fam, r in bad:
            _err(f"{w:<12} {fam:<6} {r}")
        return EX_UNBALANCED
    print(f"balanced: {len(gamma.euler)} exceptional vertices, {len(gamma.arrows)} arrows")
    return 0


def cmd_solve(args) -> int:
    gamma, _, arrow_m, arrow_l = read_resolution(_read(args.input))
    mp = solve_mult_pair(gamma, arrow_m, arrow_l)
    _write(args.output, dump_resolution(gamma, mp))
    return 0


def cmd_partition(args) -> int:
    gamma, mp = _load_solved(args.input)
    part = partition(gamma, mp)
    doc = {k: list(getattr(part, k)) for k in ("W1", "W2", "A_f1", "A_f2", "A_g1", "A_g2")}
    doc["components"] = [
        {"vertices": list(cs.vertices), "d": cs.d, "genus": cs.genus, "euler": cs.euler}
        for cs in components_gamma1(gamma, mp, part)
    ]
    _write(args.output, json.dumps(doc, indent=2) + "\n")
    return 0


def cmd_construct(args) -> int:
    gamma, mp = _load_solved(args.input)
    try:
        out = build_plumbing(gamma, mp)
    except ConstructionError as exc:
        _err(str(exc))
        if exc.report is not None:
            _err(exc.report.summary())
        return EX_VERIFY
    _write(args.output, serialize_plumbing(out))
    return 0


def cmd_check(args) -> int:
    out = parse_plumbing(_read(args.input))
    if args.gamma:
        gamma, mp = _load_solved(args.gamma)
        report = verify_z_system(out, gamma, mp)
    else:
        report = check_output_identities(out)
    if not report.ok:
        _err(report.summary())
        return EX_VERIFY
    print(f"ok: {len(report.checks)} checks on {len(out.graph)} vertices")
    return 0


def cmd_simplify(args) -> int:
    out = parse_plumbing(_read(args.input))
    g, zsys = normalize(out.graph, out.zsys)
    prov = {v: p for v, p in out.provenance.items() if v in g}
    _write(args.output, serialize_plumbing(ConstructionOutput(g, zsys, prov)))
    return 0


def cmd_gen(args) -> int:
    try:
        gamma, mp = gen_tab(args.a, args.b)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _write(args.output, dump_resolution(gamma, mp))
    return 0


def cmd_export(args) -> int:
    out = parse_plumbing(_read(args.input))
    if args.format == "dot":
        _write(args.output, export_dot(out.graph, out.zsys))
    else:
        _write(args.output, serialize_plumbing(out))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="milnor-boundary", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help, input_help="input file, '-' for stdin"):
        p = sub.add_parser(name, help=help)
        p.add_argument("input", nargs="?", default="-", help=input_help)
        p.add_argument("-o", "--output", help="output file (default stdout)")
        p.set_defaults(func=func)
        return p

    add("validate", cmd_validate, "check the balance relations of a resolution document")
    add("solve", cmd_solve, "fill in multiplicities from the arrowhead values")
    add("partition", cmd_partition, "print the m <= l / m > l split and component invariants")
    add("construct", cmd_construct, "build and verify the plumbing graph")
    p = add("check", cmd_check, "re-verify a serialized plumbing document")
    p.add_argument("--gamma", help="resolution document for the full set of checks")
    add("simplify", cmd_simplify, "blow down every eligible vertex")
    p = add("export", cmd_export, "render a plumbing document")
    p.add_argument("--format", choices=("dot", "native"), default="native")

    gen = sub.add_parser("gen", help="generate example resolution documents")
    gen_sub = gen.add_subparsers(dest="family", required=True, parser_class=_Parser)
    tab = gen_sub.add_parser("tab", help="f = x^a + y^b, g = xy")
    tab.add_argument("--a", type=int, required=True)
    tab.add_argument("--b", type=int, required=True)
    tab.add_argument("-o", "--output")
    tab.set_defaults(func=cmd_gen)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        _err(str(exc))
        return EX_USAGE
    except OSError as exc:
        _err(f"I/O error: {exc}")
        return EX_NOINPUT
    except (FormatError, ResolutionError) as exc:
        _err(f"invalid input: {exc}")
        return EX_DATAERR


if __name__ == "__main__":
    sys.exit(main())
