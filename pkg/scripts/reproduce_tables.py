"""Game numbers of small tree products next to the closed-form predictions.

Prints one tab-separated table per factor family. Solver results are cached in
``--cache`` (default: $PURSUIT_CACHE, else no cache).
"""

import argparse
import math
import os
import time

from pursuit.cache import ResultCache, cached_game_number
from pursuit.graphs import TreeSpec, tree_product
from pursuit.solver import BudgetExceeded

COLUMNS = (("c", "cop"), ("c'", "active"), ("c_fa", "fa"), ("c_aa", "aa"), ("c_af", "af"), ("Z", "zombie"))


def predictions(n):
    return {"c": math.ceil((n + 1) / 2), "c'": math.ceil(n / 2), "c_aa": math.ceil(2 * n / 3),
            "c_af": math.ceil(2 * n / 3), "Z": math.ceil(2 * n / 3)}


def row(shape, cache, k_max, budget):
    prod = tree_product([TreeSpec.path(k) for k in shape])
    n = len(shape)
    pred = predictions(n)
    cells, off = [], []
    for label, variant in COLUMNS:
        try:
            v, _ = cached_game_number(prod.graph, variant, k_max, cache, budget)
        except BudgetExceeded:
            cells.append("budget")
            continue
        cells.append(str(v))
        if label in pred and v.value != pred[label]:
            off.append(f"{label}={v} vs {pred[label]}")
    name = "x".join(f"P{k}" for k in shape)
    return "\t".join([name, str(n), *cells, "; ".join(off) or "-"])


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--cache", default=os.environ.get("PURSUIT_CACHE"))
    ap.add_argument("--kmax", type=int, default=4)
    ap.add_argument("--budget", type=int, default=50_000_000)
    ap.add_argument("--max-n", type=int, default=4, help="largest hypercube dimension")
    args = ap.parse_args()
    cache = ResultCache(args.cache) if args.cache else None
    shapes = [(2,) * n for n in range(2, args.max_n + 1)]
    shapes += [(3, 2), (3, 3), (4, 2), (3, 2, 2), (3, 3, 2), (4, 3, 2)]
    print("\t".join(["product", "n", *(c for c, _ in COLUMNS), "differs from formula"]))
    for shape in shapes:
        t = time.perf_counter()
        print(row(shape, cache, args.kmax, args.budget), flush=True)
        if time.perf_counter() - t > 30:
            print(f"# {shape} took {time.perf_counter() - t:.0f}s")


if __name__ == "__main__":
    main()
