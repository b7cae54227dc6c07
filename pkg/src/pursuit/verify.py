"""Exhaustive adversarial check of a deterministic zombie strategy.

The zombies' behaviour is fixed, so the game collapses to a one-player
graph over round midpoints ``(zombies, survivor, strategy state)``. The
strategy captures iff no survivor line of play reaches a cycle; a revisited
midpoint on the current search path is an escape witness.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .strategies import Pos, ScriptedStrategy, StrategyError, StrategyState, ZombiePhase, reach

DEFAULT_MEMO_BUDGET = 5_000_000

Node = tuple[tuple[Pos, ...], Pos, StrategyState]


class MemoBudgetExceeded(RuntimeError):
    pass


class InvariantViolation(AssertionError):
    def __init__(self, message: str, trace: Sequence[Node] = ()):
        super().__init__(message)
        self.trace = list(trace)


@dataclass
class InvariantStats:
    midpoints: int = 0
    zombie_moves: int = 0
    parity_checks: int = 0
    reach_checks: int = 0
    shape_checks: int = 0
    shape_violations: int = 0
    shape_examples: list[tuple[tuple[int, ...], tuple[int, ...]]] = field(default_factory=list)
    # midpoints at which at least one zombie was in the given phase
    phase_midpoints: dict[str, int] = field(default_factory=dict)


@dataclass
class Captured:
    worst_case_rounds: int
    states: int
    stats: InvariantStats
    trace: list[str] = field(default_factory=list)

    captured = True

    def __str__(self) -> str:
        return f"Captured worst_case_rounds={self.worst_case_rounds} states={self.states}"


@dataclass
class Escaped:
    reason: str  # "cycle" or "max_steps"
    witness: list[Node]
    states: int
    stats: InvariantStats
    trace: list[str] = field(default_factory=list)

    captured = False

    def __str__(self) -> str:
        return f"Escaped reason={self.reason} witness_length={len(self.witness)} states={self.states}"


def _pos(p: Pos) -> str:
    return "".join(map(str, p)) if all(c < 10 for c in p) else ",".join(map(str, p))


def _fmt(zs: Sequence[Pos], s: Pos | None) -> str:
    return f"Z[{';'.join(map(_pos, zs))}] S[{'' if s is None else _pos(s)}]"


def _phase_label(state: StrategyState) -> str:
    roles = state.roles()
    return ",".join(roles[z].phase.value for z in sorted(roles))


class _Search:
    def __init__(self, strategy: ScriptedStrategy, check_invariants: bool, memo_budget: int):
        self.strategy = strategy
        self.product = strategy.product
        self.check = check_invariants
        self.memo_budget = memo_budget
        self.stats = InvariantStats()
        self.moves_cache: dict[Pos, tuple[Pos, ...]] = {}

    def survivor_moves(self, s: Pos) -> tuple[Pos, ...]:
        out = self.moves_cache.get(s)
        if out is None:
            out = (s, *self.product.neighbors(s))
            self.moves_cache[s] = out
        return out

    def zombie_round(self, state: StrategyState, zs: tuple[Pos, ...], s: Pos, trail) -> tuple[tuple[Pos, ...], StrategyState | None]:
        """Zombies move; returns new positions and the midpoint state (None on capture)."""
        try:
            moved = self.strategy.move(state, zs, s)
        except StrategyError as exc:
            raise InvariantViolation(f"strategy failure: {exc}", trail) from exc
        if self.check:
            d = self.product.distance
            for before, after in zip(zs, moved):
                self.stats.zombie_moves += 1
                if d(after, s) != d(before, s) - 1:
                    raise InvariantViolation(f"illegal zombie move {before}->{after} vs survivor {s}", trail)
        if s in moved:
            return moved, None
        try:
            mid = self.strategy.at_midpoint(state, moved, s)
        except StrategyError as exc:
            raise InvariantViolation(f"strategy failure: {exc}", trail) from exc
        if self.check:
            self.check_midpoint(mid, moved, s, trail)
        return moved, mid

    def check_midpoint(self, state: StrategyState, zs: tuple[Pos, ...], s: Pos, trail) -> None:
        st = self.stats
        st.midpoints += 1
        d = [self.product.distance(z, s) for z in zs]
        for i, j in self.strategy.parity_pairs(state):
            st.parity_checks += 1
            if (d[i] + d[j]) % 2 != 1:
                raise InvariantViolation(f"parity broken for pair ({i}, {j}) at {_fmt(zs, s)}", trail)
        roles = state.roles()
        for label in {r.phase.value for r in roles.values()}:
            st.phase_midpoints[label] = st.phase_midpoints.get(label, 0) + 1
        # pair-rule shape on three-tree endgames once both zombies have a zero entry
        seen = set()
        for z, role in roles.items():
            if role.phase is ZombiePhase.HOME_SWEEP or len(role.scan) != 3 or role.scan in seen:
                continue
            members = sorted(w for w, r in roles.items() if r.scan == role.scan and r.phase is role.phase)
            if len(members) != 2 or any(zs[w][c] != s[c] for w in members for c in role.watched):
                continue
            seen.add(role.scan)
            vecs = [tuple(self.product.oracle.tables[c][zs[w][c]][s[c]] for c in role.scan) for w in members]
            if all(0 in v for v in vecs):
                st.shape_checks += 1
                if not _pair_shape_ok(vecs[0], vecs[1]):
                    st.shape_violations += 1
                    if len(st.shape_examples) < 5:
                        st.shape_examples.append((vecs[0], vecs[1]))

    def check_reach(self, before: Node, after: Node, trail) -> None:
        zs0, s0, st0 = before
        zs1, s1, st1 = after
        r0, r1 = st0.roles(), st1.roles()
        for z, role in r0.items():
            if role.phase is not ZombiePhase.HOME_SWEEP or r1.get(z) != role:
                continue
            if any(zs0[z][c] != s0[c] for c in role.watched):
                continue
            self.stats.reach_checks += 1
            a = reach(None, zs0[z], s0, role.scan[0], role.scan).reach
            b = reach(None, zs1[z], s1, role.scan[0], role.scan).reach
            if b < a:
                raise InvariantViolation(f"reach of zombie {z} fell from {a} to {b}", trail)

    def children(self, node: Node, trail) -> Iterator[tuple[int, Node | None]]:
        """(rounds, next midpoint) per survivor reply; next is None when the round ends in capture."""
        zs, s, state = node
        for s1 in self.survivor_moves(s):
            if s1 in zs:
                yield 0, None
                continue
            moved, mid = self.zombie_round(state, zs, s1, trail)
            if mid is None:
                yield 1, None
                continue
            child = (moved, s1, mid)
            if self.check:
                self.check_reach(node, child, trail)
            yield 1, child


def _pair_shape_ok(left: tuple[int, ...], right: tuple[int, ...]) -> bool:
    ok_left = {(0, 1, 1), (0, 0, 1), (0, 0, 0)}
    ok_right = {(1, 1, 0), (1, 0, 0), (0, 0, 0)}
    if left in ok_left and right in ok_right:
        return True
    # the labelling of the two zombies is arbitrary in the claim
    return right in ok_left and left in ok_right


def verify_scripted_strategy(
    strategy: ScriptedStrategy,
    max_steps: int | None = None,
    memo_budget: int = DEFAULT_MEMO_BUDGET,
    check_invariants: bool = True,
    want_trace: bool = False,
) -> Captured | Escaped:
    """Play the strategy against every survivor behaviour.

    ``max_steps`` caps the depth (in rounds) of any single line of play;
    hitting it is reported as an escape with reason ``"max_steps"``.
    """
    search = _Search(strategy, check_invariants, memo_budget)
    product = strategy.product
    zs0, state0 = strategy.initial()
    value: dict[Node, int] = {}
    best_child: dict[Node, Node | None] = {}
    on_path: set[Node] = set()
    worst = 0
    worst_root: tuple[Pos, Node | None] | None = None

    for s0 in product.vertices:
        if s0 in zs0:
            continue
        trail: list[Node] = []
        moved, mid = search.zombie_round(state0, zs0, s0, trail)
        if mid is None:
            if worst < 1:
                worst, worst_root = 1, (s0, None)
            continue
        root: Node = (moved, s0, mid)
        if root not in value:
            result = _dfs(search, root, value, best_child, on_path, max_steps, memo_budget)
            if result is not None:
                reason, path = result
                trace = _trace_lines(strategy, zs0, s0, path)
                return Escaped(reason, path, len(value) + len(on_path), search.stats, trace)
        if 1 + value[root] > worst:
            worst, worst_root = 1 + value[root], (s0, root)

    trace: list[str] = []
    if want_trace and worst_root is not None:
        s0, root = worst_root
        path = []
        node = root
        while node is not None:
            path.append(node)
            node = best_child.get(node)
        trace = _trace_lines(strategy, zs0, s0, path, finish=True)
    return Captured(worst, len(value), search.stats, trace)


def _dfs(search: _Search, root: Node, value, best_child, on_path, max_steps, memo_budget):
    """Iterative post-order DFS; returns (reason, path) on escape, else None."""
    path: list[Node] = [root]
    on_path.add(root)
    iters = [search.children(root, path)]
    best = [0]
    best_child[root] = None
    while iters:
        node = path[-1]
        advanced = False
        for rounds, child in iters[-1]:
            if child is None:
                if rounds > best[-1]:
                    best[-1] = rounds
                    best_child[node] = None
                continue
            if child in on_path:
                return "cycle", [*path, child]
            known = value.get(child)
            if known is not None:
                if 1 + known > best[-1]:
                    best[-1] = 1 + known
                    best_child[node] = child
                continue
            if max_steps is not None and len(path) >= max_steps:
                return "max_steps", [*path, child]
            if len(value) + len(path) > memo_budget:
                raise MemoBudgetExceeded(f"more than {memo_budget} midpoint states")
            path.append(child)
            on_path.add(child)
            iters.append(search.children(child, path))
            best.append(0)
            best_child[child] = None
            advanced = True
            break
        if advanced:
            continue
        iters.pop()
        done = path.pop()
        on_path.discard(done)
        v = best.pop()
        value[done] = v
        if best:
            if 1 + v > best[-1]:
                best[-1] = 1 + v
                best_child[path[-1]] = done
    return None


def _trace_lines(
    strategy: ScriptedStrategy, zs0: tuple[Pos, ...], s0: Pos, path: Sequence[Node], finish: bool = False
) -> list[str]:
    """Tab-separated half-step trace: round, mover, before, action, after, phase.

    With ``finish`` the line of play is closed off by the capturing half-step.
    """
    lines = ["round\tmover\tpositions-before\taction\tpositions-after\tphase"]
    _, state0 = strategy.initial()
    lines.append(f"0\tzombies\t{_fmt((), None)}\tplace\t{_fmt(zs0, None)}\t{_phase_label(state0)}")
    lines.append(f"0\tsurvivor\t{_fmt(zs0, None)}\tplace\t{_fmt(zs0, s0)}\t{_phase_label(state0)}")
    prev_zs, prev_s, prev_state = zs0, s0, state0
    for rnd, (zs, s, state) in enumerate(path, start=1):
        if rnd > 1:
            lines.append(_survivor_line(rnd - 1, prev_zs, prev_s, s, prev_state))
        lines.append(f"{rnd}\tzombies\t{_fmt(prev_zs, s)}\tmove\t{_fmt(zs, s)}\t{_phase_label(state)}")
        prev_zs, prev_s, prev_state = zs, s, state
    if not finish:
        return lines
    rnd = len(path)
    if rnd == 0:
        moved = strategy.move(state0, zs0, s0)
        lines.append(f"1\tzombies\t{_fmt(zs0, s0)}\tcapture\t{_fmt(moved, s0)}\t{_phase_label(state0)}")
        return lines
    # prefer a reply the zombies answer with capture; otherwise the survivor walks into one
    replies = (prev_s, *strategy.product.neighbors(prev_s))
    for s1 in replies:
        if s1 not in prev_zs:
            moved = strategy.move(prev_state, prev_zs, s1)
            if s1 in moved:
                lines.append(_survivor_line(rnd, prev_zs, prev_s, s1, prev_state))
                lines.append(f"{rnd + 1}\tzombies\t{_fmt(prev_zs, s1)}\tcapture\t{_fmt(moved, s1)}\t{_phase_label(prev_state)}")
                return lines
    s1 = next(x for x in replies if x in prev_zs)
    lines.append(f"{rnd}\tsurvivor\t{_fmt(prev_zs, prev_s)}\tcaptured\t{_fmt(prev_zs, s1)}\t{_phase_label(prev_state)}")
    return lines


def _survivor_line(rnd: int, zs: tuple[Pos, ...], before: Pos, after: Pos, state: StrategyState) -> str:
    action = "pass" if after == before else "move"
    return f"{rnd}\tsurvivor\t{_fmt(zs, before)}\t{action}\t{_fmt(zs, after)}\t{_phase_label(state)}"
