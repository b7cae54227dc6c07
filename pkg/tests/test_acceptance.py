"""Acceptance criteria, one test each.

Every test records a single ``criterion N: PASS|FAIL ...`` line. Under pytest
the lines are printed in the terminal summary; ``python tests/test_acceptance.py``
prints them directly.
"""

from __future__ import annotations

import itertools
import math
import sys
import time
from functools import lru_cache

import networkx as nx

from pursuit.engine import VARIANTS
from pursuit.graphs import Graph, TreeSpec, edge_retraction, find_isomorphism, hypercube, retraction_image, tree_product, verify_retraction
from pursuit.solver import Winner, chain_check, game_number, solve, wins_with
from pursuit.engine import GameSpec
from pursuit.strategies import CompositeStrategy, PairStrategy
from pursuit.verify import InvariantViolation, verify_scripted_strategy

RESULTS: dict[int, str] = {}

P2, P3, P4 = TreeSpec.path(2), TreeSpec.path(3), TreeSpec.path(4)


def q(n):
    return tree_product([P2] * n)


@lru_cache(maxsize=None)
def value(shape: tuple[int, ...], variant: str, k_max: int = 4) -> int | None:
    prod = tree_product([TreeSpec.path(k) for k in shape])
    return game_number(prod, *VARIANTS[variant], k_max).value


def record(n: int, ok: bool, detail: str) -> None:
    RESULTS[n] = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}"
    assert ok, RESULTS[n]


QN = {2: (2, 2), 3: (2, 2, 2), 4: (2, 2, 2, 2)}


def test_criterion_01_zombie_numbers():
    start = time.perf_counter()
    got = [value(QN[n], "zombie") for n in (2, 3, 4)]
    elapsed = time.perf_counter() - start
    record(1, got == [2, 2, 3] and elapsed < 60, f"Z(Q2, Q3, Q4) = {got}, expected [2, 2, 3]; {elapsed:.1f}s")


def test_criterion_02_lower_bounds():
    lost = []
    for n in (2, 3, 4):
        k = math.ceil(2 * n / 3) - 1
        ok, result = wins_with(q(n), *VARIANTS["zombie"], k)
        lost.append(not ok and result.optimal_placement() is None)
    record(2, all(lost), f"ceil(2n/3)-1 zombies lose on Q2, Q3, Q4: {lost}")


def test_criterion_03_cop_numbers():
    got = [value(QN[n], "cop") for n in (2, 3, 4)]
    p3p3 = value((3, 3), "cop")
    record(3, got == [2, 2, 3] and p3p3 == 2, f"c(Q2, Q3, Q4) = {got}, expected [2, 2, 3]; c(P3xP3) = {p3p3}, expected 2")


def test_criterion_04_active_game():
    got = [value(QN[n], "active") for n in (2, 3, 4)]
    record(4, got == [1, 2, 2], f"c'(Q2, Q3, Q4) = {got}, expected [1, 2, 2]")


def test_criterion_05_all_active():
    aa = [value(QN[n], "aa") for n in (2, 3, 4)]
    af = [value(QN[n], "af") for n in (2, 3, 4)]
    mixed = {}
    for shape in ((3, 2), (3, 3, 2)):
        mixed[shape] = (value(shape, "aa"), value(shape, "af"), value(shape, "zombie"))
    ok = aa == af == [2, 2, 3] and all(a == b == z for a, b, z in mixed.values())
    detail = f"c_aa(Qn) = {aa}, c_af(Qn) = {af}, expected [2, 2, 3]; (c_aa, c_af, Z) on P3xP2 = {mixed[(3, 2)]}, on P3xP3xP2 = {mixed[(3, 3, 2)]}"
    record(5, ok, detail)


def test_criterion_06_inequality_chain():
    graphs = 0
    violations = []
    for g in nx.graph_atlas_g():
        n = g.number_of_nodes()
        if n < 2 or n > 6 or not nx.is_connected(g):
            continue
        graphs += 1
        report = chain_check(Graph.from_edges(n, g.edges()), 3)
        violations += [(n, sorted(g.edges()), pair) for pair in report.violations]
    record(6, not violations and graphs == 142, f"{graphs} connected graphs on 2..6 vertices, {len(violations)} violations")


THREE_TREE = list(itertools.product([P2, P3], repeat=3))
CAPTURED_RUNS: list[tuple[str, object, object]] = []  # (label, strategy, result)


def _verify(label, strategy):
    result = verify_scripted_strategy(strategy)
    CAPTURED_RUNS.append((label, strategy, result))
    return result


def _label(trees):
    return "x".join(f"P{t.vertex_count}" for t in trees)


def test_criterion_07_pair_strategy():
    start = time.perf_counter()
    outcomes = {}
    for trees in THREE_TREE:
        try:
            outcomes[_label(trees)] = _verify(_label(trees), PairStrategy(tree_product(trees))).captured
        except InvariantViolation:
            outcomes[_label(trees)] = False
    elapsed = time.perf_counter() - start
    ok = all(outcomes.values()) and len(outcomes) == 8 and elapsed < 300
    record(7, ok, f"{sum(outcomes.values())}/8 three-tree products captured by two zombies; {elapsed:.1f}s")


def test_criterion_08_composite_strategy():
    cases = {"Q4": [P2] * 4, "P3xP2xP2xP2": [P3, P2, P2, P2]}
    parts = []
    ok = True
    for label, trees in cases.items():
        start = time.perf_counter()
        strat = CompositeStrategy(tree_product(trees))
        try:
            result = _verify(label, strat)
            good = result.captured and strat.zombie_count == 3
            parts.append(f"{label}: {result} with {strat.zombie_count} zombies, {time.perf_counter() - start:.1f}s")
        except InvariantViolation as exc:
            good = False
            parts.append(f"{label}: invariant breach {exc}")
        ok = ok and good and time.perf_counter() - start < 600
    record(8, ok, "; ".join(parts))


def _ensure_runs():
    if len(CAPTURED_RUNS) < 10:
        CAPTURED_RUNS.clear()
        for trees in THREE_TREE:
            _verify(_label(trees), PairStrategy(tree_product(trees)))
        _verify("Q4", CompositeStrategy(q(4)))
        _verify("P3xP2xP2xP2", CompositeStrategy(tree_product([P3, P2, P2, P2])))


def test_criterion_09_invariants_on_every_midpoint():
    try:
        _ensure_runs()
    except InvariantViolation as exc:
        record(9, False, f"invariant breach: {exc}")
    midpoints = sum(r.stats.midpoints for _, _, r in CAPTURED_RUNS)
    parity = sum(r.stats.parity_checks for _, _, r in CAPTURED_RUNS)
    reach = sum(r.stats.reach_checks for _, _, r in CAPTURED_RUNS)
    ok = len(CAPTURED_RUNS) == 10 and midpoints > 0 and parity > 0 and reach > 0
    record(9, ok, f"{midpoints} midpoints, {parity} parity checks, {reach} reach checks, 0 breaches")


def test_criterion_10_retraction():
    trees = [P4, P3, P2]
    r = edge_retraction(trees)
    image, _ = retraction_image(r)
    iso = find_isomorphism(image, hypercube(3))
    ok = verify_retraction(tree_product(trees).graph, r) and iso is not None
    # the isomorphism must carry edges to edges and non-edges to non-edges
    if iso is not None:
        h = hypercube(3)
        ok = ok and all(image.has_edge(u, v) == h.has_edge(iso[u], iso[v]) for u, v in itertools.combinations(range(8), 2))
    record(10, ok, f"P4xP3xP2 retraction valid, image of {image.vertex_count} vertices isomorphic to Q3: {iso is not None}")


def test_criterion_11_strategy_solver_consistency():
    _ensure_runs()
    contradictions = []
    checked = 0
    for label, strategy, result in CAPTURED_RUNS:
        if not result.captured:
            continue
        prod = strategy.product
        spec = GameSpec(prod.graph, strategy.zombie_count, *VARIANTS["zombie"])
        solved = solve(spec)
        start = tuple(sorted(prod.encode(z) for z in strategy.placement.zombies))
        checked += 1
        if solved.optimal_placement() is None or solved.placement_winner(start) is not Winner.PURSUER:
            contradictions.append(label)
    record(11, checked == 10 and not contradictions, f"{checked} captured runs checked against the solver, contradictions: {contradictions or 'none'}")


def main() -> int:
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_criterion_")]
    failed = 0
    for t in tests:
        try:
            t()
        except AssertionError:
            failed += 1
    for n in sorted(RESULTS):
        print(RESULTS[n])
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
