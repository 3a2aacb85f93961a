"""Command-line front end: ``list``, ``verify``, ``table`` and ``bijection``.

Exit status is 0 when everything checked passes, 1 when a verification fails
and 2 for usage or parameter errors.  All output goes through one writer in
the main process; worker processes only compute.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from typing import IO, Iterable

from .bijection import pipeline
from .partitions import DomainError, Partition
from .registry import (
    BoundsProfile,
    ParameterError,
    VerificationReport,
    build_suite,
    instantiate,
    iter_verify,
    lookup,
    registry,
    select,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# -- argument parsing ---------------------------------------------------------------------


def _non_negative(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {v}")
    return v


def _positive(text: str) -> int:
    v = _non_negative(text)
    if v < 1:
        raise argparse.ArgumentTypeError("expected at least 1")
    return v


def _sign(text: str) -> int:
    if text.strip() in ("1", "+1", "+"):
        return 1
    if text.strip() in ("-1", "-"):
        return -1
    raise argparse.ArgumentTypeError(f"eps must be +1 or -1, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qschmidt",
        description="Exact verification of Schmidt-type partition identities.")
    output = argparse.ArgumentParser(add_help=False)
    output.add_argument("--format", choices=("text", "json"), default="text")
    output.add_argument("--out", metavar="PATH", help="write to PATH instead of standard output")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("list", parents=[output], help="list the identity families")
    p.add_argument("--filter", action="append", metavar="TEXT",
                   help="keep ids equal to or containing TEXT (repeatable)")

    p = sub.add_parser("verify", parents=[output], help="verify identities over a parameter grid")
    p.add_argument("--identity", "--filter", dest="identity", action="append", metavar="ID",
                   help="family id or id substring (repeatable; default all)")
    p.add_argument("--N", type=_non_negative, help="bound on parts (default sweep 0..10)")
    p.add_argument("--j", type=_non_negative)
    p.add_argument("--n", type=_non_negative, help="check only the coefficient of q^n")
    p.add_argument("--degree", type=_non_negative, help="truncation degree")
    p.add_argument("--r", type=_non_negative)
    p.add_argument("--t", type=_non_negative)
    p.add_argument("--s", type=_non_negative)
    p.add_argument("--eps", type=_sign)
    p.add_argument("--kind", choices=("psi", "phi"), help="distinct parts or all partitions")
    p.add_argument("--sub", help="substitution such as 'q,q,-1,-1' or 'formal'")
    p.add_argument("--four-variable", action="store_true",
                   help="only families checked in the formal (a,b,c,d) ring, with sub = formal")
    p.add_argument("--workers", type=_positive, default=os.cpu_count() or 1)
    p.add_argument("--show", action="store_true", help="print the checked left side (text format)")

    p = sub.add_parser("table", parents=[output], help="list both sides of a counting identity")
    p.add_argument("--identity", required=True, metavar="ID")
    p.add_argument("--n", type=_non_negative, required=True)
    p.add_argument("--N", type=_non_negative)
    p.add_argument("--j", type=_non_negative)

    p = sub.add_parser("bijection", parents=[output],
                       help="run a partition through the odd embedding and Sylvester's map")
    p.add_argument("--partition", required=True, metavar="P",
                   help="comma-separated parts in decreasing order; '' is the empty partition")
    p.add_argument("--j", type=_positive, required=True)
    p.add_argument("--N", type=_non_negative)
    return parser


# -- commands -----------------------------------------------------------------------------


def cmd_list(args, out: IO[str]) -> int:
    fams = select(args.filter)
    if args.format == "json":
        json.dump([f.describe() for f in fams], out, indent=2)
        out.write("\n")
        return EXIT_OK
    width = max((len(f.id) for f in fams), default=0)
    for f in fams:
        out.write(f"{f.id:<{width}}  [{f.mode}; {', '.join(f.params)}]  {f.title}\n")
        out.write(f"{'':<{width}}  {f.statement}\n")
    return EXIT_OK


def _profile(args) -> BoundsProfile:
    return BoundsProfile(N=args.N, j=args.j, n=args.n, r=args.r, t=args.t, s=args.s,
                         eps=args.eps, kind=args.kind, sub=args.sub,
                         degree_override=args.degree, four_variable=args.four_variable)


def _params_text(params: dict) -> str:
    return " ".join(f"{k}={v}" for k, v in params.items())


def _report_line(rep: VerificationReport) -> str:
    line = (f"{rep.status.upper():<5} {rep.id}  {_params_text(rep.params)}  "
            f"bound={rep.checked_bound}  {rep.elapsed_ms:.1f} ms")
    if rep.first_mismatch is not None:
        m = rep.first_mismatch
        line += f"\n      first mismatch at {m['monomial']}: lhs={m['lhs']} rhs={m['rhs']}"
    if rep.message:
        line += f"\n      {rep.message}"
    return line


def cmd_verify(args, out: IO[str]) -> int:
    if args.identity:
        fams = select(args.identity)
        if not fams:
            raise UsageError(f"no identity matches {args.identity}")
    else:
        fams = registry()
    try:
        suite = build_suite(fams, _profile(args))
    except ParameterError as exc:
        raise UsageError(str(exc)) from None
    if not suite:
        raise UsageError("the parameters select no instances")

    start = time.perf_counter()
    counts = {"pass": 0, "fail": 0, "error": 0}
    reports = []
    for rep in iter_verify(suite, args.workers):
        counts[rep.status] += 1
        if args.format == "json":
            reports.append(rep.to_dict())
            continue
        out.write(_report_line(rep) + "\n")
        if args.show and rep.lhs:
            out.write(f"      lhs = {rep.lhs}\n")
        out.flush()
    if args.format == "json":
        json.dump(reports, out, indent=2)
        out.write("\n")
    else:
        out.write(f"{len(suite)} instances: {counts['pass']} pass, {counts['fail']} fail, "
                  f"{counts['error']} error in {time.perf_counter() - start:.1f} s\n")
    return EXIT_OK if counts["pass"] == len(suite) else EXIT_FAIL


def _cell(item) -> str:
    text = str(item)
    return "∅" if text == "[]" else text


def _canonical(item) -> tuple:
    # partitions in reverse lexicographic order; 2-color pairs by (red, green)
    if isinstance(item, Partition):
        return tuple(item)
    return tuple(item.red), tuple(item.green)


def cmd_table(args, out: IO[str]) -> int:
    fam = lookup(args.identity)
    if fam is None:
        raise UsageError(f"unknown identity {args.identity!r}")
    if fam.table is None:
        tabular = ", ".join(f.id for f in registry() if f.table is not None)
        raise UsageError(f"{fam.id} has no table; tabulated families: {tabular}")
    params = {k: getattr(args, k) for k in ("N", "j", "n") if k in fam.params}
    try:
        inst = instantiate(fam.id, params)
    except ParameterError as exc:
        raise UsageError(str(exc)) from None
    left, right = ([_cell(x) for x in sorted(side, key=_canonical, reverse=True)]
                   for side in fam.table(inst.p))
    equal = len(left) == len(right)
    if args.format == "json":
        json.dump({"id": fam.id, "params": inst.p, "lhs": left, "rhs": right,
                   "counts": [len(left), len(right)], "equal": equal}, out, indent=2)
        out.write("\n")
    else:
        out.write(f"{fam.id}  {_params_text(inst.p)}\n{fam.statement}\n\n")
        w = max([len(x) for x in left] + [len("left")])
        out.write(f"{'left':<{w}}  right\n")
        for i in range(max(len(left), len(right))):
            a = left[i] if i < len(left) else ""
            b = right[i] if i < len(right) else ""
            out.write(f"{a:<{w}}  {b}\n")
        out.write(f"\ncounts: {len(left)} = {len(right)}" if equal
                  else f"\ncounts differ: {len(left)} != {len(right)}")
        out.write("\n")
    return EXIT_OK if equal else EXIT_FAIL


def cmd_bijection(args, out: IO[str]) -> int:
    try:
        pipe = pipeline(Partition.parse(args.partition), args.j, args.N)
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    if args.format == "json":
        t = pipe.transport
        json.dump({"pi": list(pipe.pi), "j": pipe.j, "N": pipe.N, "pi_o": list(pipe.odd),
                   "pi_d": list(pipe.distinct), "gamma": t.gamma, "E": t.E,
                   "largest": t.largest, "consistent": pipe.consistent}, out, indent=2)
        out.write("\n")
    else:
        out.write(pipe.render() + "\n")
    return EXIT_OK if pipe.consistent else EXIT_FAIL


COMMANDS = {"list": cmd_list, "verify": cmd_verify, "table": cmd_table, "bijection": cmd_bijection}


def main(argv: Iterable[str] | None = None) -> int:
    args = build_parser().parse_args(None if argv is None else list(argv))
    out = open(args.out, "w", encoding="utf-8") if args.out else sys.stdout
    try:
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        print(f"qschmidt {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    finally:
        if out is not sys.stdout:
            out.close()


if __name__ == "__main__":
    sys.exit(main())
