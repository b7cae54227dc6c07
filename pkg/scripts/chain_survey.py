"""Six game numbers on every small connected graph, with the chain checked.

Prints a count of each value profile (fa, active, aa, af, ff, zombie) and
any graph whose profile breaks an ordering.
"""

import argparse
from collections import Counter

import networkx as nx

from pursuit.graphs import Graph
from pursuit.solver import CHAIN_VARIANTS, chain_check


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-vertices", type=int, default=6)
    ap.add_argument("--kmax", type=int, default=3)
    args = ap.parse_args()
    profiles = Counter()
    bad = []
    total = 0
    for g in nx.graph_atlas_g():
        n = g.number_of_nodes()
        if n < 2 or n > args.max_vertices or not nx.is_connected(g):
            continue
        total += 1
        report = chain_check(Graph.from_edges(n, g.edges()), args.kmax)
        profiles[tuple(str(report.values[v]) for v in CHAIN_VARIANTS)] += 1
        if not report.ok:
            bad.append((sorted(g.edges()), report.violations))
    print("\t".join([*CHAIN_VARIANTS, "graphs"]))
    for prof, count in sorted(profiles.items()):
        print("\t".join([*prof, str(count)]))
    print(f"# {total} graphs, {len(bad)} chain violations")
    for edges, v in bad:
        print(f"# violation {v} on {edges}")


if __name__ == "__main__":
    main()
