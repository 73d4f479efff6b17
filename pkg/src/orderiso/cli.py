"""Command-line interface: ``oi compose|inverse|chain|check|report``.

Exit codes: 0 pass, 1 a check reported a violation, 2 usage or parse
error, 3 the element cap was exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import checks
from .carrier import parse_carrier
from .congruence import all_congruences, collapse_chain, rees_quotient
from .errors import SizeError, UnsupportedError, UsageError
from .pariso import compose_all, format_element, inverse, parse_element
from .semigroup import BoundedSemigroup, all_ideals, eggbox

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3


def _emit(args, obj, text: str):
    if args.format == "json":
        print(json.dumps(obj, sort_keys=True, separators=(",", ":")))
    else:
        print(text)


def _semigroup(args) -> BoundedSemigroup:
    return BoundedSemigroup(parse_carrier(args.carrier), args.max_rank, cap=args.cap)


def cmd_compose(args) -> int:
    product = compose_all(*(parse_element(e) for e in args.elements))
    _emit(args, product.to_json(), format_element(product))
    return EXIT_OK


def cmd_inverse(args) -> int:
    inv = inverse(parse_element(args.element))
    _emit(args, inv.to_json(), format_element(inv))
    return EXIT_OK


def cmd_chain(args) -> int:
    chain = collapse_chain(parse_element(args.alpha), parse_element(args.beta))
    problems = chain.violations()
    obj = chain.to_json()
    obj["violations"] = problems
    lines = [f"start {format_element(chain.start)}"]
    for m, (iota, beta) in enumerate(chain.steps, start=1):
        lines.append(f"m={m}  iota={format_element(iota)}  beta={format_element(beta)}")
    lines.extend(f"VIOLATION {p}" for p in problems)
    _emit(args, obj, "\n".join(lines))
    return EXIT_FAIL if problems else EXIT_OK


def _format_result(res: dict) -> str:
    status = "PASS" if res["passed"] else "FAIL"
    details = ", ".join(
        f"{k}={v}" for k, v in res.items() if k not in ("check", "passed", "failures", "failure_count", "series")
    )
    lines = [f"{status} {res['check']}" + (f" ({details})" if details else "")]
    lines.extend(f"  - {f}" for f in res["failures"])
    return "\n".join(lines)


def cmd_check(args) -> int:
    S = _semigroup(args)
    names = checks.ALL_CHECKS if args.which == "all" else [args.which]
    options = {"seed": args.seed, "threads": args.threads, "samples": args.samples}
    status = EXIT_OK
    for name in names:
        if name != "series" and not S.carrier.is_finite:
            if args.which == "all":
                res = {"check": name, "passed": True, "skipped": "needs chain:<m>", "failures": [], "failure_count": 0}
                _emit(args, res, f"SKIP {name} (needs chain:<m>)")
                continue
        res = checks.run_check(name, S, **options)
        _emit(args, res, _format_result(res))
        if not res["passed"]:
            status = EXIT_FAIL
    return status


def _render_grid(grid) -> str:
    cells = [[format_element(c[0]) if len(c) == 1 else "{" + ",".join(map(format_element, c)) + "}" for c in row]
             for row in grid.cells]
    width = max(len(s) for row in cells for s in row)
    lines = [f"D-class rank {grid.rank}: {len(grid.rows)} x {len(grid.cols)}"]
    for row in cells:
        lines.append("  " + " ".join(s.ljust(width) for s in row))
    return "\n".join(lines)


def cmd_report(args) -> int:
    S = _semigroup(args)
    kind = args.kind
    if kind != "quotient" and args.k is not None:
        raise UsageError(f"report {kind} takes no rank argument")
    if kind == "eggbox":
        for grid in eggbox(S).classes:
            _emit(args, grid.to_json(), _render_grid(grid))
    elif kind == "ideals":
        for k, ideal in enumerate(all_ideals(S)):
            members = [format_element(a) for a in sorted(ideal)]
            _emit(args, {"ideal": k, "size": len(ideal), "elements": members}, f"ideal {k}: {len(ideal)} elements")
    elif kind == "congruences":
        for c in all_congruences(S, threads=args.threads):
            obj = c.to_json()
            _emit(args, obj, f"congruence: {c.num_blocks} blocks, sizes {c.block_sizes()[:5]}..., is_rees={obj['is_rees']}")
    elif kind == "quotient":
        if args.k is None:
            raise UsageError("report quotient needs a rank threshold k")
        q = rees_quotient(S, args.k)
        members = [q.format(a) for a in q.elements]
        _emit(
            args,
            {"quotient_by": args.k, "size": len(members), "elements": members},
            f"quotient by I_{args.k}: {len(members)} elements\n  " + " ".join(members),
        )
    return EXIT_OK


def _common(parser: argparse.ArgumentParser, defaults: bool):
    # SUPPRESS keeps a subcommand flag from clobbering one given before the subcommand
    d = (lambda v: v) if defaults else (lambda v: argparse.SUPPRESS)
    parser.add_argument("--carrier", default=d("chain:4"), help="chain:<m> or int (default chain:4)")
    parser.add_argument("--max-rank", type=int, default=d(2), help="rank bound n (default 2)")
    parser.add_argument("--format", choices=("text", "json"), default=d("text"))
    parser.add_argument("--seed", type=_u64, default=d(0))
    parser.add_argument("--cap", type=int, default=d(None), help="element cap (default $OI_CAP or 20000)")
    parser.add_argument("--threads", type=int, default=d(1))
    parser.add_argument("--samples", type=int, default=d(200), help="samples per series layer")


def _u64(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="oi", description=__doc__.splitlines()[0])
    _common(parser, True)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compose", help="multiply element literals left to right")
    p.add_argument("elements", nargs="+", metavar="ELEMENT")
    p.set_defaults(func=cmd_compose)

    p = sub.add_parser("inverse", help="invert an element literal")
    p.add_argument("element")
    p.set_defaults(func=cmd_inverse)

    p = sub.add_parser("chain", help="collapse chain for idempotents BETA < ALPHA")
    p.add_argument("alpha")
    p.add_argument("beta")
    p.set_defaults(func=cmd_chain)

    p = sub.add_parser("check", help="run theorem checks")
    p.add_argument("which", choices=["all"] + checks.ALL_CHECKS)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("report", help="structured dumps")
    p.add_argument("kind", choices=("eggbox", "ideals", "congruences", "quotient"))
    p.add_argument("k", nargs="?", type=int)
    p.set_defaults(func=cmd_report)

    for p in sub.choices.values():
        _common(p, False)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.cap is not None and args.cap < 1:
        parser.error("--cap must be positive")
    if args.threads < 1:
        parser.error("--threads must be positive")
    try:
        return args.func(args)
    except SizeError as exc:
        print(f"oi: size limit: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (UsageError, UnsupportedError) as exc:
        print(f"oi: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
