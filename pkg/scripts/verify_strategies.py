"""Exhaustively check the zombie strategies on a range of tree products.

For each product prints the verdict, worst-case rounds, midpoint states, the
invariant counters and the phases seen. ``--large`` adds Q8 and Q9, which
take minutes.
"""

import argparse
import itertools
import time

from pursuit.graphs import TreeSpec, tree_product
from pursuit.strategies import CompositeStrategy, PairStrategy, build_strategy, zombies_needed
from pursuit.verify import verify_scripted_strategy

P = TreeSpec.path
S3 = TreeSpec.star(3)


def products(large):
    for shape in itertools.product([2, 3], repeat=3):
        yield "pair", [P(k) for k in shape]
    fams = [
        [P(2)] * 4, [P(3), P(2), P(2), P(2)], [P(4), P(3), P(2), P(2)], [S3, P(3), P(2), P(2)],
        [P(2)] * 5, [P(3)] * 2 + [P(2)] * 3, [P(2)] * 6, [P(3)] + [P(2)] * 5, [P(2)] * 7,
    ]
    if large:
        fams += [[P(2)] * 8, [P(2)] * 9]
    for trees in fams:
        yield "composite", trees


def label(trees):
    return "x".join(("S3" if t == S3 else f"P{t.vertex_count}") for t in trees)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--large", action="store_true")
    ap.add_argument("--undermanned", action="store_true", help="also run one zombie fewer than needed")
    args = ap.parse_args()
    print("strategy\tproduct\tzombies\tverdict\tstates\tmidpoints\tparity\treach\tphases\tseconds")
    for kind, trees in products(args.large):
        prod = tree_product(trees)
        strat = PairStrategy(prod) if kind == "pair" else CompositeStrategy(prod)
        runs = [(kind, strat)]
        if args.undermanned and kind == "composite":
            runs.append(("home", build_strategy(prod, "composite", zombies_needed(len(trees)) - 1)))
        for name, s in runs:
            t = time.perf_counter()
            r = verify_scripted_strategy(s)
            st = r.stats
            verdict = f"Captured({r.worst_case_rounds})" if r.captured else f"Escaped({r.reason})"
            phases = ",".join(sorted(st.phase_midpoints))
            print(f"{name}\t{label(trees)}\t{s.zombie_count}\t{verdict}\t{r.states}\t{st.midpoints}\t"
                  f"{st.parity_checks}\t{st.reach_checks}\t{phases}\t{time.perf_counter() - t:.2f}", flush=True)


if __name__ == "__main__":
    main()
