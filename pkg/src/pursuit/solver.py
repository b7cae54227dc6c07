"""Exact solving of pursuit games by backward induction.

States are ``(pursuer multiset, evader vertex, side to move)``. The pursuer
attractor is grown layer by layer from immediate captures, so the step
count recorded for each winning state is the optimal number of half-steps
to capture. Everything outside the attractor is an evader win.
"""

from __future__ import annotations

import enum
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable

from .engine import (
    EvaderRule,
    GameSpec,
    GameState,
    Phase,
    PursuerRule,
    evader_options,
    joint_pursuer_moves,
    joint_pursuer_predecessors,
    pursuer_multisets,
    pursuer_options,
    variant_name,
)
from .graphs import Graph, ProductGraph

DEFAULT_BUDGET = 50_000_000

PURSUER_TURN = 0
EVADER_TURN = 1


class Winner(enum.Enum):
    PURSUER = "pursuer"
    EVADER = "evader"


class BudgetExceeded(RuntimeError):
    def __init__(self, required: int, budget: int, pursuer_count: int | None = None):
        self.required = required
        self.budget = budget
        self.pursuer_count = pursuer_count
        where = f" at k={pursuer_count}" if pursuer_count is not None else ""
        super().__init__(f"state space of {required} states exceeds budget {budget}{where}")


def state_space_size(n: int, k: int) -> int:
    return math.comb(n + k - 1, k) * n * 2


@dataclass
class SolveResult:
    """Winner labelling of every mid-game state.

    Internally states are indexed densely; the mapping views below convert
    to :class:`GameState` keys on demand.
    """

    spec: GameSpec
    multisets: list[tuple[int, ...]]
    win: bytearray
    steps: list[int]
    policy: list[int]
    _index: dict[tuple[int, ...], int] = field(repr=False, default_factory=dict)

    @property
    def states_explored(self) -> int:
        return len(self.win)

    def _sid(self, pursuers: tuple[int, ...], evader: int, turn: int) -> int:
        n = self.spec.graph.vertex_count
        return (self._index[tuple(sorted(pursuers))] * n + evader) * 2 + turn

    def _state(self, sid: int) -> GameState:
        n = self.spec.graph.vertex_count
        rest, turn = divmod(sid, 2)
        m, e = divmod(rest, n)
        phase = Phase.PURSUERS_TO_MOVE if turn == PURSUER_TURN else Phase.EVADER_TO_MOVE
        return GameState(self.multisets[m], e, phase)

    def winner_of(self, state: GameState) -> Winner:
        if state.phase is Phase.CAPTURED:
            return Winner.PURSUER
        turn = PURSUER_TURN if state.phase is Phase.PURSUERS_TO_MOVE else EVADER_TURN
        return Winner.PURSUER if self.win[self._sid(state.pursuers, state.evader, turn)] else Winner.EVADER

    def steps_of(self, state: GameState) -> int | None:
        """Optimal half-steps to capture, or None for evader wins."""
        if state.phase is Phase.CAPTURED:
            return 0
        turn = PURSUER_TURN if state.phase is Phase.PURSUERS_TO_MOVE else EVADER_TURN
        sid = self._sid(state.pursuers, state.evader, turn)
        return self.steps[sid] if self.win[sid] else None

    def policy_of(self, state: GameState) -> GameState | None:
        """An optimal pursuer reply from a winning pursuers-to-move state."""
        if state.phase is not Phase.PURSUERS_TO_MOVE:
            return None
        sid = self._sid(state.pursuers, state.evader, PURSUER_TURN)
        if not self.win[sid]:
            return None
        target = self.policy[sid]
        if target < 0:
            e = state.evader
            move = min(m for m in joint_pursuer_moves(self.spec, state.pursuers, e) if e in m)
            return GameState(move, e, Phase.CAPTURED)
        return self._state(target)

    @property
    def winner(self) -> dict[GameState, Winner]:
        out = {self._state(s): (Winner.PURSUER if w else Winner.EVADER) for s, w in enumerate(self.win) if self._live(s)}
        for m in self.multisets:
            for e in set(m):
                out[GameState(m, e, Phase.CAPTURED)] = Winner.PURSUER
        return out

    @property
    def steps_to_capture(self) -> dict[GameState, int]:
        return {self._state(s): self.steps[s] for s, w in enumerate(self.win) if w and self._live(s)}

    def _live(self, sid: int) -> bool:
        n = self.spec.graph.vertex_count
        rest = sid // 2
        m, e = divmod(rest, n)
        return e not in self.multisets[m]

    def placement_winner(self, pursuers: tuple[int, ...]) -> Winner:
        """Outcome once the pursuers stand on ``pursuers`` and the evader picks a spot."""
        n = self.spec.graph.vertex_count
        for e in range(n):
            if e in pursuers:
                continue
            if not self.win[self._sid(pursuers, e, PURSUER_TURN)]:
                return Winner.EVADER
        return Winner.PURSUER

    def optimal_placement(self) -> tuple[int, ...] | None:
        """Lowest canonical pursuer placement that wins against every evader placement."""
        for m in self.multisets:
            if self.placement_winner(m) is Winner.PURSUER:
                return m
        return None


def solve(spec: GameSpec, budget: int = DEFAULT_BUDGET) -> SolveResult:
    g = spec.graph
    n, k = g.vertex_count, spec.pursuer_count
    required = state_space_size(n, k)
    if required > budget:
        raise BudgetExceeded(required, budget, k)

    multisets = list(pursuer_multisets(n, k))
    index = {m: i for i, m in enumerate(multisets)}
    total = len(multisets) * n * 2
    win = bytearray(total)
    steps = [0] * total
    policy = [-1] * total
    remaining = [0] * total
    queue: deque[int] = deque()

    def sid(mi: int, e: int, turn: int) -> int:
        return (mi * n + e) * 2 + turn

    # seed: immediate captures by the pursuers, and evaders with no safe reply
    for mi, m in enumerate(multisets):
        occupied = set(m)
        for e in range(n):
            if e in occupied:
                continue
            ps = sid(mi, e, PURSUER_TURN)
            if any(e in pursuer_options(spec, p, e) for p in m):
                win[ps] = 1
                steps[ps] = 1
                policy[ps] = -1
                queue.append(ps)
            es = sid(mi, e, EVADER_TURN)
            safe = sum(1 for w in evader_options(spec, e) if w not in occupied)
            remaining[es] = safe
            if safe == 0:
                win[es] = 1
                steps[es] = 1
                queue.append(es)

    while queue:
        s = queue.popleft()
        rest, turn = divmod(s, 2)
        mi, e = divmod(rest, n)
        m = multisets[mi]
        if turn == EVADER_TURN:
            for pred in joint_pursuer_predecessors(spec, m, e):
                if e in pred:
                    continue
                ps = sid(index[pred], e, PURSUER_TURN)
                if not win[ps]:
                    win[ps] = 1
                    steps[ps] = steps[s] + 1
                    policy[ps] = s
                    queue.append(ps)
        else:
            occupied = set(m)
            for e0 in evader_options(spec, e):
                # e0 -> e is legal exactly when e -> e0 is (neighbourhoods are symmetric)
                if e0 in occupied:
                    continue
                es = sid(mi, e0, EVADER_TURN)
                if win[es]:
                    continue
                remaining[es] -= 1
                if remaining[es] == 0:
                    win[es] = 1
                    steps[es] = steps[s] + 1
                    queue.append(es)

    return SolveResult(spec, multisets, win, steps, policy, index)


@dataclass(frozen=True)
class GameValue:
    pursuer_rule: PursuerRule
    evader_rule: EvaderRule
    graph_hash: str
    value: int | None
    k_max: int
    placement: tuple[int, ...] | None = None
    states_explored: int = 0

    @property
    def variant(self) -> str:
        return variant_name(self.pursuer_rule, self.evader_rule)

    @property
    def exceeds_bound(self) -> bool:
        return self.value is None

    def __str__(self) -> str:
        return str(self.value) if self.value is not None else f">{self.k_max}"


def _as_graph(graph: Graph | ProductGraph) -> Graph:
    return graph.graph if isinstance(graph, ProductGraph) else graph


def wins_with(
    graph: Graph | ProductGraph,
    pursuer_rule: PursuerRule,
    evader_rule: EvaderRule,
    k: int,
    budget: int = DEFAULT_BUDGET,
) -> tuple[bool, SolveResult]:
    spec = GameSpec(_as_graph(graph), k, pursuer_rule, evader_rule)
    result = solve(spec, budget)
    return result.optimal_placement() is not None, result


def game_number(
    graph: Graph | ProductGraph,
    pursuer_rule: PursuerRule,
    evader_rule: EvaderRule,
    k_max: int,
    budget: int = DEFAULT_BUDGET,
    k_min: int = 1,
) -> GameValue:
    """Least k <= k_max for which k pursuers win; ``value=None`` if none does."""
    if k_max < 1:
        raise ValueError("k_max must be at least 1")
    g = _as_graph(graph)
    explored = 0
    for k in range(k_min, k_max + 1):
        try:
            spec = GameSpec(g, k, pursuer_rule, evader_rule)
            result = solve(spec, budget)
        except BudgetExceeded as exc:
            raise BudgetExceeded(exc.required, exc.budget, k) from None
        explored += result.states_explored
        placement = result.optimal_placement()
        if placement is not None:
            return GameValue(pursuer_rule, evader_rule, g.content_hash(), k, k_max, placement, explored)
    return GameValue(pursuer_rule, evader_rule, g.content_hash(), None, k_max, None, explored)


# --- derived checks -------------------------------------------------------

CHAIN_VARIANTS = ("fa", "active", "aa", "af", "ff", "zombie")

# (smaller, larger) pairs that must satisfy smaller <= larger
CHAIN_INEQUALITIES = (
    ("fa", "active"),
    ("active", "aa"),
    ("aa", "af"),
    ("fa", "ff"),
    ("ff", "af"),
    ("af", "zombie"),
)


def _leq(a: GameValue, b: GameValue) -> bool | None:
    """a <= b, or None when both exceed the bound and nothing can be said."""
    if a.value is None and b.value is None:
        return None
    if a.value is None:
        return False
    if b.value is None:
        return True
    return a.value <= b.value


@dataclass
class ChainReport:
    values: dict[str, GameValue]
    checks: dict[tuple[str, str], bool | None]

    @property
    def ok(self) -> bool:
        return all(v is not False for v in self.checks.values())

    @property
    def violations(self) -> list[tuple[str, str]]:
        return [pair for pair, v in self.checks.items() if v is False]


def chain_check(graph: Graph | ProductGraph, k_max: int, budget: int = DEFAULT_BUDGET) -> ChainReport:
    from .engine import VARIANTS

    values = {name: game_number(graph, *VARIANTS[name], k_max, budget) for name in CHAIN_VARIANTS}
    checks = {(a, b): _leq(values[a], values[b]) for a, b in CHAIN_INEQUALITIES}
    return ChainReport(values, checks)


@dataclass
class MonotonicityReport:
    image_value: GameValue
    host_value: GameValue
    holds: bool | None


def retract_monotonicity_check(
    g: Graph,
    r,
    variant: tuple[PursuerRule, EvaderRule],
    k_max: int,
    budget: int = DEFAULT_BUDGET,
) -> MonotonicityReport:
    from .graphs import GraphError, retraction_image, verify_retraction

    if not verify_retraction(g, r):
        raise GraphError("not a retraction of the given graph")
    image, _ = retraction_image(r)
    image_value = game_number(image, *variant, k_max, budget)
    host_value = game_number(g, *variant, k_max, budget)
    return MonotonicityReport(image_value, host_value, _leq(image_value, host_value))


def iter_states(result: SolveResult) -> Iterable[GameState]:
    for s in range(result.states_explored):
        if result._live(s):
            yield result._state(s)
