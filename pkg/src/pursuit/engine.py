"""Move rules for the pursuit variants over explicit game states.

Pursuers are interchangeable here: positions are stored as a sorted tuple.
Capture is checked after every half-step, placements included.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .graphs import Graph, GraphError, ProductGraph, require_game_graph


class PursuerRule(enum.Enum):
    FLEXIBLE_ALL = "flexible"
    ACTIVE_SUBSET = "active-subset"
    ACTIVE_ALL = "active"
    ZOMBIE = "zombie"


class EvaderRule(enum.Enum):
    FLEXIBLE = "flexible"
    ACTIVE = "active"


class Phase(enum.Enum):
    PURSUERS_TO_PLACE = "pursuers-to-place"
    EVADER_TO_PLACE = "evader-to-place"
    PURSUERS_TO_MOVE = "pursuers-to-move"
    EVADER_TO_MOVE = "evader-to-move"
    CAPTURED = "captured"


class PhaseError(RuntimeError):
    pass


# Short names used by the CLI and in result tables.
VARIANTS: dict[str, tuple[PursuerRule, EvaderRule]] = {
    "cop": (PursuerRule.FLEXIBLE_ALL, EvaderRule.FLEXIBLE),
    "ff": (PursuerRule.FLEXIBLE_ALL, EvaderRule.FLEXIBLE),
    "fa": (PursuerRule.FLEXIBLE_ALL, EvaderRule.ACTIVE),
    "active": (PursuerRule.ACTIVE_SUBSET, EvaderRule.ACTIVE),
    "af": (PursuerRule.ACTIVE_ALL, EvaderRule.FLEXIBLE),
    "aa": (PursuerRule.ACTIVE_ALL, EvaderRule.ACTIVE),
    "zombie": (PursuerRule.ZOMBIE, EvaderRule.FLEXIBLE),
}


def variant_name(pursuer_rule: PursuerRule, evader_rule: EvaderRule) -> str:
    for name, v in VARIANTS.items():
        if v == (pursuer_rule, evader_rule) and name != "cop":
            return name
    return f"{pursuer_rule.value}/{evader_rule.value}"


@dataclass(frozen=True)
class GameSpec:
    graph: Graph
    pursuer_count: int
    pursuer_rule: PursuerRule
    evader_rule: EvaderRule

    def __post_init__(self) -> None:
        if isinstance(self.graph, ProductGraph):
            object.__setattr__(self, "graph", self.graph.graph)
        if self.pursuer_count < 1:
            raise GraphError("pursuer_count must be at least 1")
        require_game_graph(self.graph)

    @cached_property
    def distances(self) -> tuple[tuple[int, ...], ...]:
        return self.graph.distance_matrix

    @cached_property
    def closed_nbhd(self) -> tuple[tuple[int, ...], ...]:
        return tuple((v, *self.graph.neighbors(v)) for v in range(self.graph.vertex_count))

    @cached_property
    def geodesic_table(self) -> tuple[tuple[tuple[int, ...], ...], ...]:
        """``[p][e]`` -> neighbours of p one step closer to e (empty when p == e)."""
        d = self.distances
        adj = self.graph.adjacency
        return tuple(
            tuple(tuple(w for w in adj[p] if d[w][e] == d[p][e] - 1) for e in range(self.graph.vertex_count))
            for p in range(self.graph.vertex_count)
        )

    @cached_property
    def antigeodesic_table(self) -> tuple[tuple[tuple[int, ...], ...], ...]:
        """``[p][e]`` -> neighbours q of p with p one step closer to e than q."""
        d = self.distances
        adj = self.graph.adjacency
        return tuple(
            tuple(tuple(w for w in adj[p] if d[w][e] == d[p][e] + 1) for e in range(self.graph.vertex_count))
            for p in range(self.graph.vertex_count)
        )


@dataclass(frozen=True)
class GameState:
    pursuers: tuple[int, ...]
    evader: int | None
    phase: Phase

    def __post_init__(self) -> None:
        object.__setattr__(self, "pursuers", tuple(sorted(self.pursuers)))
        captured = self.evader is not None and self.evader in self.pursuers
        if captured != (self.phase is Phase.CAPTURED):
            raise PhaseError(f"phase {self.phase} inconsistent with positions {self.pursuers}, {self.evader}")

    @classmethod
    def initial(cls) -> GameState:
        return cls((), None, Phase.PURSUERS_TO_PLACE)


# --- per-pursuer option tables -------------------------------------------


def pursuer_options(spec: GameSpec, p: int, evader: int) -> tuple[int, ...]:
    """Positions one pursuer may occupy after its move (ignoring the joint constraint)."""
    rule = spec.pursuer_rule
    if rule is PursuerRule.ZOMBIE:
        return spec.geodesic_table[p][evader]
    if rule is PursuerRule.ACTIVE_ALL:
        return spec.graph.neighbors(p)
    return spec.closed_nbhd[p]


def joint_pursuer_moves(spec: GameSpec, pursuers: Sequence[int], evader: int) -> set[tuple[int, ...]]:
    options = [pursuer_options(spec, p, evader) for p in pursuers]
    combos = itertools.product(*options)
    if spec.pursuer_rule is PursuerRule.ACTIVE_SUBSET:
        # the all-stay combination is illegal, but a swap reaching the same multiset is not
        stay = tuple(pursuers)
        combos = (c for c in combos if c != stay)
    return {tuple(sorted(c)) for c in combos}


def joint_pursuer_predecessors(spec: GameSpec, pursuers: Sequence[int], evader: int) -> set[tuple[int, ...]]:
    """Multisets P with ``pursuers`` among ``joint_pursuer_moves(P, evader)``."""
    rule = spec.pursuer_rule
    if rule is PursuerRule.ZOMBIE:
        options = [spec.antigeodesic_table[p][evader] for p in pursuers]
    elif rule is PursuerRule.ACTIVE_ALL:
        options = [spec.graph.neighbors(p) for p in pursuers]
    else:
        options = [spec.closed_nbhd[p] for p in pursuers]
    combos = itertools.product(*options)
    if rule is PursuerRule.ACTIVE_SUBSET:
        stay = tuple(pursuers)
        combos = (c for c in combos if c != stay)
    return {tuple(sorted(c)) for c in combos}


def evader_options(spec: GameSpec, e: int) -> tuple[int, ...]:
    if spec.evader_rule is EvaderRule.ACTIVE:
        return spec.graph.neighbors(e)
    return spec.closed_nbhd[e]


# --- state-level successor functions -------------------------------------


def _expect(state: GameState, *phases: Phase) -> None:
    if state.phase not in phases:
        raise PhaseError(f"expected phase in {[p.value for p in phases]}, got {state.phase.value}")


def pursuer_successors(spec: GameSpec, state: GameState) -> set[GameState]:
    _expect(state, Phase.PURSUERS_TO_MOVE)
    e = state.evader
    out = set()
    for move in joint_pursuer_moves(spec, state.pursuers, e):
        phase = Phase.CAPTURED if e in move else Phase.EVADER_TO_MOVE
        out.add(GameState(move, e, phase))
    return out


def evader_successors(spec: GameSpec, state: GameState) -> set[GameState]:
    if state.phase is Phase.CAPTURED:
        return set()
    _expect(state, Phase.EVADER_TO_MOVE)
    out = set()
    for w in evader_options(spec, state.evader):
        phase = Phase.CAPTURED if w in state.pursuers else Phase.PURSUERS_TO_MOVE
        out.add(GameState(state.pursuers, w, phase))
    return out


def placement_successors(spec: GameSpec, state: GameState) -> set[GameState]:
    _expect(state, Phase.PURSUERS_TO_PLACE, Phase.EVADER_TO_PLACE)
    n = spec.graph.vertex_count
    if state.phase is Phase.PURSUERS_TO_PLACE:
        return {
            GameState(p, None, Phase.EVADER_TO_PLACE)
            for p in itertools.combinations_with_replacement(range(n), spec.pursuer_count)
        }
    out = set()
    for e in range(n):
        phase = Phase.CAPTURED if e in state.pursuers else Phase.PURSUERS_TO_MOVE
        out.add(GameState(state.pursuers, e, phase))
    return out


def successors(spec: GameSpec, state: GameState) -> set[GameState]:
    if state.phase is Phase.CAPTURED:
        return set()
    if state.phase in (Phase.PURSUERS_TO_PLACE, Phase.EVADER_TO_PLACE):
        return placement_successors(spec, state)
    if state.phase is Phase.PURSUERS_TO_MOVE:
        return pursuer_successors(spec, state)
    return evader_successors(spec, state)


def pursuer_multisets(n: int, k: int) -> Iterable[tuple[int, ...]]:
    return itertools.combinations_with_replacement(range(n), k)
