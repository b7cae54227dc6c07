"""Command-line front end.

Exit codes: 0 success, 2 bad input, 3 budget exceeded, 4 invariant breach.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from pathlib import Path
from typing import Sequence

from .cache import ENV_VAR, CacheMismatch, ResultCache, cached_game_number
from .engine import VARIANTS
from .formats import (
    RESULT_HEADER,
    ParseError,
    as_graph,
    as_tree,
    dump_winner_map,
    format_result_row,
    load_graph_file,
    load_product_file,
    product_of,
)
from .graphs import GraphError, ProductGraph, edge_retraction, find_isomorphism, hypercube, retraction_image, tree_product, verify_retraction
from .solver import DEFAULT_BUDGET, BudgetExceeded
from .strategies import StrategyError, build_strategy
from .verify import DEFAULT_MEMO_BUDGET, InvariantViolation, MemoBudgetExceeded, verify_scripted_strategy

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_BUDGET = 3
EXIT_INVARIANT = 4


def _cache_from(args) -> ResultCache | None:
    directory = args.cache or os.environ.get(ENV_VAR)
    return ResultCache(directory) if directory else None


def _load_game_graph(args):
    if args.product:
        return product_of(load_product_file(args.product)).graph
    return as_graph(load_graph_file(args.graph))


def cmd_solve(args) -> int:
    graph = _load_game_graph(args)
    cache = None if args.no_cache else _cache_from(args)
    cross = _cache_from(args) if args.no_cache else None
    value, rows = cached_game_number(
        graph, args.variant, args.kmax, cache or cross, args.budget, cross_check=args.no_cache
    )
    print(RESULT_HEADER)
    for r in rows:
        print(format_result_row(r.variant, r.graph_hash, r.k, "pursuer" if r.pursuers_win else "evader", r.states_explored))
    print(f"{args.variant}\t{value}")
    if args.dump:
        from .engine import GameSpec
        from .solver import solve

        k = value.value or args.kmax
        result = solve(GameSpec(graph, k, *VARIANTS[args.variant]), args.budget)
        Path(args.dump).write_text("\n".join(dump_winner_map(result)) + "\n")
    return EXIT_OK


TABLE_COLUMNS = ("c", "active", "aa", "af", "zombie")


def _predictions(n: int) -> dict[str, int]:
    return {
        "c": math.ceil((n + 1) / 2),
        "active": math.ceil(n / 2),
        "aa": math.ceil(2 * n / 3),
        "af": math.ceil(2 * n / 3),
        "zombie": math.ceil(2 * n / 3),
    }


def cmd_table(args) -> int:
    factor = as_graph(load_graph_file(args.factor))
    cache = _cache_from(args)
    header = ["n", "c", "c'", "c_aa", "c_af", "Z", "pred_c", "pred_c'", "pred_2n/3", "mismatch"]
    print("\t".join(header))
    for n in range(args.n_from, args.n_to + 1):
        graph = ProductGraph((factor,) * n).graph
        preds = _predictions(n)
        cells, mismatches = [], []
        for col in TABLE_COLUMNS:
            variant = "cop" if col == "c" else col
            try:
                value, _ = cached_game_number(graph, variant, args.kmax, cache, args.budget)
            except BudgetExceeded:
                cells.append("budget")
                continue
            cells.append(str(value))
            if value.value != preds[col]:
                mismatches.append(col)
        row = [str(n), *cells, str(preds["c"]), str(preds["active"]), str(preds["zombie"]), ",".join(mismatches) or "-"]
        print("\t".join(row))
    return EXIT_OK


def cmd_verify_strategy(args) -> int:
    factors = load_product_file(args.product)
    product = product_of(as_tree(f) for f in factors)
    strategy = build_strategy(product, args.strategy, args.zombies)
    result = verify_scripted_strategy(
        strategy, max_steps=args.max_steps, memo_budget=args.memo_budget, want_trace=bool(args.trace)
    )
    print(f"strategy\t{args.strategy}\tzombies\t{strategy.zombie_count}\tfactors\t{product.dimension}")
    if result.captured:
        print(f"Captured\tworst_case_rounds={result.worst_case_rounds}\tstates={result.states}")
    else:
        print(f"Escaped\treason={result.reason}\twitness_length={len(result.witness)}\tstates={result.states}")
    s = result.stats
    print(f"invariants\tmidpoints={s.midpoints}\tparity_checks={s.parity_checks}\treach_checks={s.reach_checks}")
    if args.trace:
        Path(args.trace).write_text("\n".join(result.trace) + "\n")
    return EXIT_OK


def _parse_edges(spec: str, count: int) -> list[tuple[int, int]]:
    pairs = []
    for item in spec.split(","):
        try:
            a, b = item.strip().split("-")
            pairs.append((int(a), int(b)))
        except ValueError:
            raise ParseError(f"bad edge item {item!r}; expected 'u-v'") from None
    if len(pairs) != count:
        raise ParseError(f"need {count} edges, got {len(pairs)}")
    return pairs


def cmd_retract_check(args) -> int:
    trees = [as_tree(f) for f in load_product_file(args.product)]
    edges = _parse_edges(args.edges, len(trees)) if args.edges else None
    try:
        r = edge_retraction(trees, edges)
    except GraphError as exc:
        raise ParseError(str(exc)) from None
    graph = tree_product(trees).graph
    image, _ = retraction_image(r)
    n = len(trees)
    checks = {
        "retraction": verify_retraction(graph, r),
        "image_size": image.vertex_count == 2**n,
        "image_regular": all(image.degree(v) == n for v in range(image.vertex_count)),
        "hypercube_isomorphism": find_isomorphism(image, hypercube(n)) is not None,
    }
    for name, ok in checks.items():
        print(f"{name}\t{'pass' if ok else 'fail'}")
    print(f"verdict\t{'pass' if all(checks.values()) else 'fail'}")
    return EXIT_OK if all(checks.values()) else EXIT_INVARIANT


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pursuit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="state-space budget per solve")
        p.add_argument("--cache", help=f"result cache directory (default: ${ENV_VAR})")

    p = sub.add_parser("solve", help="compute a game number")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--graph")
    src.add_argument("--product")
    p.add_argument("--variant", choices=sorted(VARIANTS), required=True)
    p.add_argument("--kmax", type=int, default=4)
    p.add_argument("--no-cache", action="store_true", help="recompute and cross-check any cached records")
    p.add_argument("--dump", help="write the full winner map at the final k")
    common(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("table", help="game numbers of n-fold powers of one factor")
    p.add_argument("--n-from", type=int, default=2)
    p.add_argument("--n-to", type=int, default=4)
    p.add_argument("--factor", required=True)
    p.add_argument("--kmax", type=int, default=4)
    common(p)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("verify-strategy", help="exhaustively check a scripted zombie strategy")
    p.add_argument("--product", required=True)
    p.add_argument("--strategy", choices=("pair", "lemma3", "composite", "home"), default="composite")
    p.add_argument("--zombies", type=int)
    p.add_argument("--trace", help="write a tab-separated trace of the worst line or the escape")
    p.add_argument("--max-steps", type=int)
    p.add_argument("--memo-budget", type=int, default=DEFAULT_MEMO_BUDGET)
    p.set_defaults(func=cmd_verify_strategy)

    p = sub.add_parser("retract-check", help="check the hypercube retraction of a tree product")
    p.add_argument("--product", required=True)
    p.add_argument("--edges", help="one 'u-v' per factor, comma separated (default: first edges)")
    p.set_defaults(func=cmd_retract_check)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, GraphError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (BudgetExceeded, MemoBudgetExceeded) as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (InvariantViolation, StrategyError, CacheMismatch) as exc:
        print(f"invariant breach: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
