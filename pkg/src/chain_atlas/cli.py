"""Command-line interface: ``chain-atlas <subcommand> ...``.

Exit codes: 0 success, 2 usage or parse error, 3 enumeration limit exceeded,
4 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import experiments
from .core import (
    ChainError,
    EnumerationLimitError,
    Instance,
    enumerate_orderings,
    ordering_to_triplets,
    parse_instance,
    parse_ordering,
    triplets_cost,
)
from .penalty import format_decimal, nonessential_orderings, penalty_of_removal, penalty_nonessential_removed
from .solvers import best_essential, dp_solve, essential_aliases, essential_set
from .synthesis import synthesize, verify_uniquely_optimal

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_LIMIT = 3
EXIT_IO = 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _triplets_json(o) -> list[list[int]]:
    return [list(t) for t in sorted(ordering_to_triplets(o))]


def _table(headers: Sequence[str], rows: Sequence[Sequence[object]]) -> str:
    cells = [[str(h) for h in headers]] + [[str(c) for c in row] for row in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(headers))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)


def _emit(args, payload: dict, human: str) -> None:
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        print(human)


def _instance(text: str) -> Instance:
    return parse_instance(text)


def cmd_solve(args) -> int:
    inst = _instance(args.dims)
    res = dp_solve(inst)
    payload = {
        "dims": list(inst.dims),
        "n": inst.n,
        "optimal_cost": res.optimal_cost,
        "ordering": str(res.optimal_ordering),
        "triplets": _triplets_json(res.optimal_ordering),
        "method": res.method.value,
    }
    human = "\n".join(
        [
            f"dims      {inst}",
            f"cost      {res.optimal_cost}",
            f"ordering  {res.optimal_ordering}",
            "triplets  " + " ".join(str(t) for t in sorted(ordering_to_triplets(res.optimal_ordering))),
        ]
    )
    _emit(args, payload, human)
    return EXIT_OK


def cmd_enumerate(args) -> int:
    inst = _instance(args.dims) if args.dims else None
    n = inst.n if inst else args.n
    if n is None:
        raise ChainError("give --n or --dims")
    if inst and args.n is not None and args.n != inst.n:
        raise ChainError(f"--n {args.n} disagrees with --dims (n={inst.n})")
    orderings = enumerate_orderings(n, args.limit)
    rows = []
    items = []
    for idx, o in enumerate(orderings):
        item = {"index": idx, "ordering": str(o), "triplets": _triplets_json(o)}
        row = [idx, o]
        if inst:
            item["cost"] = triplets_cost(o.triplets, inst.dims)
            row.append(item["cost"])
        items.append(item)
        rows.append(row)
    headers = ["index", "ordering"] + (["cost"] if inst else [])
    payload = {"n": n, "count": len(orderings), "orderings": items}
    _emit(args, payload, _table(headers, rows) + f"\n{len(orderings)} orderings")
    return EXIT_OK


def cmd_essential(args) -> int:
    inst = _instance(args.dims) if args.dims else None
    n = inst.n if inst else args.n
    aliases = essential_aliases(n)
    best = best_essential(inst) if inst else None
    rows, items = [], []
    for h, o in essential_set(n):
        hs = aliases[o]
        item = {"h": h, "aliases": hs, "ordering": str(o), "triplets": _triplets_json(o)}
        row = [",".join(map(str, hs)), o]
        if inst:
            item["cost"] = triplets_cost(o.triplets, inst.dims)
            item["best"] = o == best.ordering
            row += [item["cost"], "*" if item["best"] else ""]
        items.append(item)
        rows.append(row)
    payload = {"n": n, "count": len(items), "orderings": items}
    headers = ["h", "ordering"] + (["cost", "best"] if inst else [])
    human = _table(headers, rows)
    if inst:
        rep = penalty_nonessential_removed(inst)
        payload.update(
            dims=list(inst.dims),
            best_h=best.h,
            best_cost=best.cost,
            optimal_cost=rep.optimal_cost,
            penalty=str(rep.penalty),
            penalty_decimal=rep.decimal,
        )
        human += (
            f"\nbest h={best.h} cost={best.cost} optimal={rep.optimal_cost} "
            f"penalty={rep.decimal}"
        )
    _emit(args, payload, human)
    return EXIT_OK


def cmd_penalty(args) -> int:
    inst = _instance(args.dims)
    if args.nonessential and args.remove:
        raise ChainError("--nonessential and --remove are mutually exclusive")
    if args.nonessential:
        if args.enumerate:
            rep = penalty_of_removal(
                inst, nonessential_orderings(inst.n, args.limit), "non-essential", args.limit
            )
        else:
            rep = penalty_nonessential_removed(inst)
    else:
        removed = [parse_ordering(t) for t in args.remove or []]
        rep = penalty_of_removal(inst, removed, limit=args.limit)
    payload = {
        "dims": list(inst.dims),
        "removed": rep.removed_description,
        "optimal_cost": rep.optimal_cost,
        "restricted_cost": rep.restricted_cost,
        "penalty": str(rep.penalty),
        "penalty_decimal": rep.decimal,
    }
    human = "\n".join(
        [
            f"removed          {rep.removed_description}",
            f"optimal_cost     {rep.optimal_cost}",
            f"restricted_cost  {rep.restricted_cost}",
            f"penalty          {rep.penalty} ({rep.decimal})",
        ]
    )
    _emit(args, payload, human)
    return EXIT_OK


def cmd_synthesize(args) -> int:
    o = parse_ordering(args.ordering)
    inst = synthesize(o)
    check = verify_uniquely_optimal(o, inst, method=args.method, limit=args.limit)
    payload = {
        "ordering": str(o),
        "dims": list(inst.dims),
        "verified": check.ok,
        "verification_method": check.method,
    }
    _emit(args, payload, f"{inst} verified={str(check.ok).lower()}")
    return EXIT_OK


def cmd_verify(args) -> int:
    o = parse_ordering(args.ordering)
    inst = _instance(args.dims)
    check = verify_uniquely_optimal(o, inst, method=args.method, limit=args.limit)
    payload = {
        "ordering": str(o),
        "dims": list(inst.dims),
        "uniquely_optimal": check.ok,
        "method": check.method,
    }
    _emit(args, payload, f"uniquely_optimal={str(check.ok).lower()} method={check.method}")
    return EXIT_OK


def cmd_experiment(args) -> int:
    cfg = experiments.ExperimentConfig(
        n=args.n,
        samples=args.samples,
        dim_min=args.min_dim,
        dim_max=args.max_dim,
        seed=args.seed,
        workers=args.workers,
    )
    records, summary = experiments.run_experiment(cfg)
    if args.out:
        experiments.write_csv(records, args.out)
    if args.summary:
        experiments.write_summary(summary, cfg, args.summary)
    payload = summary.to_json(cfg)
    p99 = "-" if summary.p99 is None else format_decimal(summary.p99)
    mean = "-" if summary.mean_nonzero_penalty is None else format_decimal(summary.mean_nonzero_penalty)
    human = (
        f"n={cfg.n} samples={cfg.samples} seed={cfg.seed} "
        f"fraction_nonzero={format_decimal(summary.fraction_nonzero)} "
        f"mean_nonzero={mean} p99={p99}"
    )
    _emit(args, payload, human)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="chain-atlas",
        description="Analyse matrix-chain parenthesisations.",
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit JSON instead of a table")
    limit = _Parser(add_help=False)
    limit.add_argument("--limit", type=int, default=None, help="enumeration limit on n (default 15)")
    method = _Parser(add_help=False)
    method.add_argument(
        "--method",
        choices=("auto", "brute-force", "chin"),
        default="auto",
        help="verification route (auto falls back to chin above the limit)",
    )

    p = sub.add_parser("solve", parents=[common], help="optimal ordering by dynamic programming")
    p.add_argument("--dims", required=True, help="dimensions, e.g. 10,100,5,50")
    p.set_defaults(handler=cmd_solve)

    p = sub.add_parser("enumerate", parents=[common, limit], help="list every ordering")
    p.add_argument("--n", type=int)
    p.add_argument("--dims")
    p.set_defaults(handler=cmd_enumerate)

    p = sub.add_parser("essential", parents=[common], help="the fan-out orderings")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--n", type=int)
    g.add_argument("--dims")
    p.set_defaults(handler=cmd_essential)

    p = sub.add_parser("penalty", parents=[common, limit], help="penalty of removing orderings")
    p.add_argument("--dims", required=True)
    p.add_argument("--remove", action="append", metavar="ORDERING", help="ordering to forbid (repeatable)")
    p.add_argument("--nonessential", action="store_true", help="forbid every non-fan-out ordering")
    p.add_argument(
        "--enumerate",
        action="store_true",
        help="with --nonessential, compute by full enumeration instead of the fan-out family",
    )
    p.set_defaults(handler=cmd_penalty)

    p = sub.add_parser("synthesize", parents=[common, limit, method], help="instance where an ordering is uniquely optimal")
    p.add_argument("--ordering", required=True)
    p.set_defaults(handler=cmd_synthesize)

    p = sub.add_parser("verify", parents=[common, limit, method], help="check unique optimality")
    p.add_argument("--ordering", required=True)
    p.add_argument("--dims", required=True)
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("experiment", parents=[common], help="sampling study of the fan-out penalty")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--min-dim", type=int, default=1)
    p.add_argument("--max-dim", type=int, default=1000)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", help="per-sample CSV path")
    p.add_argument("--summary", help="summary JSON path")
    p.set_defaults(handler=cmd_experiment)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except EnumerationLimitError as exc:
        print(f"chain-atlas: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except (ChainError, IndexError) as exc:
        print(f"chain-atlas: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"chain-atlas: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
