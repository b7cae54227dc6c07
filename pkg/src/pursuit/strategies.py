"""Deterministic zombie strategies on Cartesian products of trees.

Three building blocks:

* the pair rule for two or three factors: each zombie steps in the
  coordinate where it is farthest from the survivor, one pair member
  breaking ties to the left and the other to the right;
* the home strategy: scan coordinates cyclically rightward from a home
  coordinate and step in the first one that disagrees with the survivor;
* the composite strategy for ``ceil(2n/3)`` zombies, built from teams that
  hand coordinates down to sub-teams as the survivor is cornered.

Coordinates are 0-based throughout. Every zombie of a team also *watches*
the coordinates the team does not own: while it disagrees with the
survivor in a watched coordinate it steps there first. Right after the
survivor moves in a watched coordinate this is exactly mimicking that move;
after a team hand-over it is the shadow chase that re-synchronises the
zombie with the survivor.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from typing import Sequence, Union

from .graphs import Graph, GraphError, ProductGraph

Pos = tuple[int, ...]


class StrategyError(RuntimeError):
    """A scripted strategy reached a state its rules do not cover."""


class TieBreak(enum.Enum):
    LEFTMOST = "leftmost"
    RIGHTMOST = "rightmost"


class ZombiePhase(enum.Enum):
    HOME_SWEEP = "HomeSweep"
    PAIR_ENDGAME = "PairEndgame"
    MIMIC_SUBPRODUCT = "MimicSubproduct"


def require_tree_factors(product: ProductGraph, allow_trivial: bool = False) -> None:
    for i, f in enumerate(product.factors):
        if f.vertex_count == 1 and allow_trivial:
            continue
        if f.vertex_count < 2 or len(f.edges) != f.vertex_count - 1 or not f.is_connected():
            raise GraphError(f"factor {i} is not a non-trivial tree")


def pad_product(product: ProductGraph) -> ProductGraph:
    """Append a one-vertex factor, turning a two-tree product into a three-tree one."""
    return ProductGraph((*product.factors, Graph(1, ())))


# --- per-coordinate primitives ---------------------------------------------


@dataclass(frozen=True)
class DistanceVector:
    entries: tuple[int, ...]

    @property
    def total(self) -> int:
        return sum(self.entries)


def distance_vector(product: ProductGraph, zombie: Sequence[int], survivor: Sequence[int]) -> DistanceVector:
    return DistanceVector(tuple(product.oracle.coordinate_distances(zombie, survivor)))


def step_toward(product: ProductGraph, pos: Pos, survivor: Sequence[int], coord: int) -> Pos:
    """One step in ``coord`` along the unique tree path toward the survivor."""
    table = product.oracle.tables[coord]
    a, b = pos[coord], survivor[coord]
    if a == b:
        raise StrategyError(f"no step toward the survivor exists in coordinate {coord}")
    for w in product.factors[coord].neighbors(a):
        if table[w][b] == table[a][b] - 1:
            return (*pos[:coord], w, *pos[coord + 1 :])
    raise StrategyError("factor is not connected")  # pragma: no cover


def _max_coordinate(dists: Sequence[int], coords: Sequence[int], tiebreak: TieBreak) -> int:
    best = max(dists[c] for c in coords)
    if best == 0:
        raise StrategyError("zombie already agrees with the survivor on these coordinates")
    ties = [c for c in coords if dists[c] == best]
    return ties[0] if tiebreak is TieBreak.LEFTMOST else ties[-1]


def three_tree_move(
    product: ProductGraph,
    zombie: Pos,
    survivor: Pos,
    tiebreak: TieBreak,
    coords: Sequence[int] | None = None,
) -> tuple[int, Pos]:
    """Step in the farthest coordinate; ties go leftmost or rightmost."""
    if tuple(zombie) == tuple(survivor):
        raise StrategyError("zombie and survivor coincide")
    if coords is None:
        coords = range(product.dimension)
    dists = product.oracle.coordinate_distances(zombie, survivor)
    c = _max_coordinate(dists, list(coords), tiebreak)
    return c, step_toward(product, tuple(zombie), survivor, c)


def _scan_order(coords: Sequence[int], home: int) -> tuple[int, ...]:
    i = coords.index(home)
    return (*coords[i:], *coords[:i])


def home_move(
    product: ProductGraph,
    zombie: Pos,
    survivor: Pos,
    home: int,
    coords: Sequence[int] | None = None,
) -> tuple[int, Pos]:
    """Step in the first disagreeing coordinate scanning rightward from ``home``."""
    if coords is None:
        coords = tuple(range(product.dimension))
    for c in _scan_order(tuple(coords), home):
        if zombie[c] != survivor[c]:
            return c, step_toward(product, tuple(zombie), survivor, c)
    raise StrategyError("zombie and survivor coincide on every scanned coordinate")


@dataclass(frozen=True)
class ReachInfo:
    reach: int
    within: tuple[int, ...]


def reach(
    product: ProductGraph | None,
    zombie: Sequence[int],
    survivor: Sequence[int],
    home: int,
    coords: Sequence[int] | None = None,
) -> ReachInfo:
    """Coordinates agreeing with the survivor from ``home`` rightward, cyclically."""
    if coords is None:
        coords = tuple(range(len(zombie)))
    within = []
    for c in _scan_order(tuple(coords), home):
        if zombie[c] != survivor[c]:
            break
        within.append(c)
    return ReachInfo(len(within), tuple(within))


def parity_signature(
    product: ProductGraph,
    zombies: Sequence[Pos],
    survivor: Pos,
    pairs: Sequence[tuple[int, int]],
) -> list[bool]:
    """For each pair, whether the two zombie-survivor distances sum to an odd number."""
    d = [product.distance(z, survivor) for z in zombies]
    return [(d[i] + d[j]) % 2 == 1 for i, j in pairs]


# --- teams ----------------------------------------------------------------


@dataclass(frozen=True)
class PairTeam:
    """Two zombies playing the farthest-coordinate rule on 2 or 3 coordinates."""

    coords: tuple[int, ...]
    left: int
    right: int


@dataclass(frozen=True)
class HomeTeam:
    """Zombies each running the plain home strategy over ``coords``."""

    coords: tuple[int, ...]
    homes: tuple[tuple[int, int], ...]  # (zombie, home coordinate)


class TeamPhase(enum.Enum):
    HOME_SWEEP = "HomeSweep"
    PAIR_ENDGAME = "PairEndgame"
    MIMIC_SUBPRODUCT = "MimicSubproduct"


@dataclass(frozen=True)
class SplitTeam:
    """2l zombies on m = 3l-1 or 3l coordinates, paired as (xs[i], ys[i]).

    Pairs start with home ``coords[3i]``. Once some pair both reach all but
    two coordinates, that pair keeps the leading block by mimicry and plays
    the pair rule on the trailing three; the other pairs re-home to the
    first of those three and, once all of them hold the trailing three,
    recurse on the leading block.
    """

    coords: tuple[int, ...]
    xs: tuple[int, ...]
    ys: tuple[int, ...]
    phase: TeamPhase = TeamPhase.HOME_SWEEP
    pair: int | None = None
    rotation: tuple[int, ...] = ()
    inner: Union[PairTeam, "SplitTeam", None] = None


@dataclass(frozen=True)
class SweepTeam:
    """2l+1 zombies on m = 3l+1 coordinates.

    ``xs[i]`` homes at ``coords[3i]``, ``ys[i]`` at ``coords[3i+1]`` and the
    extra zombie at the last coordinate. When some coordinate lies within
    reach of all of them, a sweeper holding all but one coordinate keeps its
    home strategy and the rest chase the survivor's shadow in the missing
    coordinate, then play a split team on the others.
    """

    coords: tuple[int, ...]
    xs: tuple[int, ...]
    ys: tuple[int, ...]
    extra: int
    phase: TeamPhase = TeamPhase.HOME_SWEEP
    sweeper: int | None = None
    rotation: tuple[int, ...] = ()
    inner: Union[PairTeam, SplitTeam, None] = None


Team = Union[PairTeam, HomeTeam, SplitTeam, SweepTeam]


def zombies_needed(n: int) -> int:
    return math.ceil(2 * n / 3)


def make_team(coords: Sequence[int], xs: Sequence[int], ys: Sequence[int]) -> PairTeam | SplitTeam:
    """Team for a product with ``len(coords)`` congruent to 0 or 2 mod 3."""
    coords = tuple(coords)
    m = len(coords)
    if m % 3 == 1:
        raise StrategyError(f"split teams need m = 0 or 2 mod 3, got {m}")
    if len(xs) != len(ys) or 2 * len(xs) != zombies_needed(m):
        raise StrategyError(f"{len(xs)}+{len(ys)} zombies cannot form a team on {m} coordinates")
    if m <= 3:
        return PairTeam(coords, xs[0], ys[0])
    return SplitTeam(coords, tuple(xs), tuple(ys))


@dataclass(frozen=True)
class ZombieRole:
    """Per-zombie view of a strategy state: what rule it plays and over what."""

    phase: ZombiePhase
    scan: tuple[int, ...]  # home scan order, or the pair-rule coordinates
    watched: tuple[int, ...]

    @property
    def home(self) -> int | None:
        return self.scan[0] if self.phase is ZombiePhase.HOME_SWEEP else None


def _differs(z: Pos, s: Pos, coords: Sequence[int]) -> int | None:
    for c in coords:
        if z[c] != s[c]:
            return c
    return None


def _settled(z: Pos, s: Pos, watched: Sequence[int]) -> bool:
    return _differs(z, s, watched) is None


def _team_roles(team: Team, watched: tuple[int, ...], out: dict[int, ZombieRole], mimic: bool = False) -> None:
    if isinstance(team, PairTeam):
        phase = ZombiePhase.MIMIC_SUBPRODUCT if mimic else ZombiePhase.PAIR_ENDGAME
        for z in (team.left, team.right):
            out[z] = ZombieRole(phase, team.coords, watched)
    elif isinstance(team, HomeTeam):
        for z, h in team.homes:
            out[z] = ZombieRole(ZombiePhase.HOME_SWEEP, _scan_order(team.coords, h), watched)
    elif isinstance(team, SplitTeam):
        if team.phase is TeamPhase.HOME_SWEEP:
            for i, (x, y) in enumerate(zip(team.xs, team.ys)):
                scan = _scan_order(team.coords, team.coords[3 * i])
                out[x] = out[y] = ZombieRole(ZombiePhase.HOME_SWEEP, scan, watched)
            return
        r = team.rotation
        pair = PairTeam(r[-3:], team.xs[team.pair], team.ys[team.pair])
        _team_roles(pair, watched + r[:-3], out)
        others = [z for i, zs in enumerate(zip(team.xs, team.ys)) if i != team.pair for z in zs]
        if team.phase is TeamPhase.PAIR_ENDGAME:
            scan = _scan_order(r, r[-3])
            for z in others:
                out[z] = ZombieRole(ZombiePhase.HOME_SWEEP, scan, watched)
        else:
            _team_roles(team.inner, watched + r[-3:], out, mimic=True)
    elif isinstance(team, SweepTeam):
        if team.phase is TeamPhase.HOME_SWEEP:
            for z, h in _sweep_homes(team):
                out[z] = ZombieRole(ZombiePhase.HOME_SWEEP, _scan_order(team.coords, h), watched)
            return
        out[team.sweeper] = ZombieRole(ZombiePhase.HOME_SWEEP, team.rotation, watched)
        _team_roles(team.inner, watched + team.rotation[-1:], out, mimic=True)
    else:  # pragma: no cover
        raise TypeError(team)


def _sweep_homes(team: SweepTeam) -> list[tuple[int, int]]:
    homes = [(x, team.coords[3 * i]) for i, x in enumerate(team.xs)]
    homes += [(y, team.coords[3 * i + 1]) for i, y in enumerate(team.ys)]
    homes.append((team.extra, team.coords[-1]))
    return homes


def _choose_coordinate(role: ZombieRole, z: Pos, s: Pos, dists: Sequence[int], tiebreak: TieBreak | None) -> int:
    c = _differs(z, s, role.watched)
    if c is not None:
        return c
    if role.phase is ZombiePhase.HOME_SWEEP:
        c = _differs(z, s, role.scan)
        if c is None:
            raise StrategyError("home-sweeping zombie agrees with the survivor everywhere")
        return c
    return _max_coordinate(dists, role.scan, tiebreak)


def _tiebreaks(team: Team, out: dict[int, TieBreak]) -> None:
    if isinstance(team, PairTeam):
        out[team.left] = TieBreak.LEFTMOST
        out[team.right] = TieBreak.RIGHTMOST
    elif isinstance(team, SplitTeam) and team.phase is not TeamPhase.HOME_SWEEP:
        out[team.xs[team.pair]] = TieBreak.LEFTMOST
        out[team.ys[team.pair]] = TieBreak.RIGHTMOST
        if team.inner is not None:
            _tiebreaks(team.inner, out)
    elif isinstance(team, SweepTeam) and team.inner is not None:
        _tiebreaks(team.inner, out)


def _team_update(team: Team, watched: tuple[int, ...], zs: Sequence[Pos], s: Pos) -> Team:
    """Fire any phase trigger that holds at this round midpoint."""
    if isinstance(team, (PairTeam, HomeTeam)):
        return team
    m = len(team.coords)
    if isinstance(team, SplitTeam):
        if team.phase is TeamPhase.HOME_SWEEP:
            for i, (x, y) in enumerate(zip(team.xs, team.ys)):
                scan = _scan_order(team.coords, team.coords[3 * i])
                if all(
                    _settled(zs[z], s, watched) and reach(None, zs[z], s, scan[0], scan).reach >= m - 2
                    for z in (x, y)
                ):
                    return replace(team, phase=TeamPhase.PAIR_ENDGAME, pair=i, rotation=scan)
            return team
        r = team.rotation
        if team.phase is TeamPhase.PAIR_ENDGAME:
            scan = _scan_order(r, r[-3])
            rest = [i for i in range(len(team.xs)) if i != team.pair]
            others = [z for i in rest for z in (team.xs[i], team.ys[i])]
            if all(_settled(zs[z], s, watched) and reach(None, zs[z], s, scan[0], scan).reach >= 3 for z in others):
                inner = make_team(r[:-3], [team.xs[i] for i in rest], [team.ys[i] for i in rest])
                return replace(team, phase=TeamPhase.MIMIC_SUBPRODUCT, inner=inner)
            return team
        inner = _team_update(team.inner, watched + r[-3:], zs, s)
        return team if inner is team.inner else replace(team, inner=inner)
    if isinstance(team, SweepTeam):
        if team.phase is TeamPhase.HOME_SWEEP:
            homes = _sweep_homes(team)
            sets = []
            for z, h in homes:
                info = reach(None, zs[z], s, h, team.coords) if _settled(zs[z], s, watched) else ReachInfo(0, ())
                sets.append((z, h, info))
            common = set(team.coords)
            for _, _, info in sets:
                common &= set(info.within)
            if not common:
                return team
            # the sweeper is the zombie homed next after the common coordinate
            pos = {c: i for i, c in enumerate(team.coords)}
            w = min(common, key=pos.__getitem__)
            by_offset = sorted(sets, key=lambda t: (pos[t[1]] - pos[w] - 1) % m)
            sweeper, home, info = by_offset[0]
            if info.reach != m - 1:
                raise StrategyError(
                    f"common reach {sorted(common)} but zombie {sweeper} homed at {home} has reach {info.reach}"
                )
            rotation = _scan_order(team.coords, home)
            xs = [z for z in (*team.xs, team.extra) if z != sweeper]
            ys = [z for z in team.ys if z != sweeper]
            inner = make_team(rotation[:-1], xs, ys)
            return replace(team, phase=TeamPhase.MIMIC_SUBPRODUCT, sweeper=sweeper, rotation=rotation, inner=inner)
        inner = _team_update(team.inner, watched + team.rotation[-1:], zs, s)
        return team if inner is team.inner else replace(team, inner=inner)
    raise TypeError(team)  # pragma: no cover


# --- strategy state and the scripted strategies -----------------------------


@dataclass(frozen=True)
class StrategyState:
    team: Team
    case: str = ""

    @property
    def phase(self) -> TeamPhase:
        t = self.team
        if isinstance(t, (SplitTeam, SweepTeam)):
            return t.phase
        return TeamPhase.PAIR_ENDGAME if isinstance(t, PairTeam) else TeamPhase.HOME_SWEEP

    @property
    def designated_pair(self) -> tuple[int, int] | None:
        t = self.team
        if isinstance(t, SplitTeam) and t.pair is not None:
            return (t.xs[t.pair], t.ys[t.pair])
        if isinstance(t, PairTeam):
            return (t.left, t.right)
        return None

    @property
    def renumbering(self) -> tuple[int, ...]:
        t = self.team
        return getattr(t, "rotation", ()) or ()

    def roles(self) -> dict[int, ZombieRole]:
        out: dict[int, ZombieRole] = {}
        _team_roles(self.team, (), out)
        return out

    def home_assignment(self) -> dict[int, int]:
        return {z: r.home for z, r in self.roles().items() if r.home is not None}


@dataclass(frozen=True)
class Placement:
    zombies: tuple[Pos, ...]
    homes: tuple[int, ...]
    case: str
    on_x: tuple[bool, ...]


def initial_placement(product: ProductGraph, n: int | None = None) -> Placement:
    """Starting positions and homes for ``ceil(2n/3)`` zombies.

    x and y are the endpoints of the first edge of the first factor, with
    every other coordinate at vertex 0. Zombie order follows the proofs:
    for n = 0, 2 mod 3 the first half stand on x, the second half on y; for
    n = 1 mod 3 the first l and the last stand on x, the middle l on y.
    """
    n = product.dimension if n is None else n
    if n < 2:
        raise GraphError("initial_placement needs at least two factors")
    a, b = product.factors[0].edges[0]
    x = (a, *([0] * (n - 1)))
    y = (b, *([0] * (n - 1)))
    k = zombies_needed(n)
    if n % 3 == 1:
        ell = (n - 1) // 3
        homes = [3 * i for i in range(ell)] + [3 * i + 1 for i in range(ell)] + [n - 1]
        on_x = [True] * ell + [False] * ell + [True]
        case = "n=1 mod 3"
    else:
        ell = k // 2
        homes = [3 * i for i in range(ell)] * 2
        on_x = [True] * ell + [False] * ell
        case = f"n={n % 3} mod 3"
    zombies = tuple(x if ox else y for ox in on_x)
    return Placement(zombies, tuple(homes), case, tuple(on_x))


class ScriptedStrategy:
    """Deterministic zombie strategy driven by a :class:`StrategyState`."""

    name = "scripted"

    def __init__(self, product: ProductGraph, placement: Placement, team: Team):
        self.product = product
        self.placement = placement
        self._initial = StrategyState(team, placement.case)

    @property
    def zombie_count(self) -> int:
        return len(self.placement.zombies)

    def initial(self) -> tuple[tuple[Pos, ...], StrategyState]:
        return self.placement.zombies, self._initial

    def parity_pairs(self, state: StrategyState) -> list[tuple[int, int]]:
        """Every (x-started, y-started) zombie pair; these sums must stay odd."""
        xs = [i for i, ox in enumerate(self.placement.on_x) if ox]
        ys = [i for i, ox in enumerate(self.placement.on_x) if not ox]
        return [(i, j) for i in xs for j in ys]

    def move(self, state: StrategyState, zombies: Sequence[Pos], survivor: Pos) -> tuple[Pos, ...]:
        """Joint zombie move for the current round."""
        roles = state.roles()
        ties: dict[int, TieBreak] = {}
        _tiebreaks(state.team, ties)
        out = []
        for z, pos in enumerate(zombies):
            if pos == survivor:
                raise StrategyError("asked to move after capture")
            dists = self.product.oracle.coordinate_distances(pos, survivor)
            c = _choose_coordinate(roles[z], pos, survivor, dists, ties.get(z))
            out.append(step_toward(self.product, pos, survivor, c))
        return tuple(out)

    def at_midpoint(self, state: StrategyState, zombies: Sequence[Pos], survivor: Pos) -> StrategyState:
        team = _team_update(state.team, (), zombies, survivor)
        return state if team is state.team else replace(state, team=team)

    def step(self, state: StrategyState, zombies: Sequence[Pos], survivor: Pos) -> tuple[tuple[Pos, ...], StrategyState]:
        moved = self.move(state, zombies, survivor)
        if survivor in moved:
            return moved, state
        return moved, self.at_midpoint(state, moved, survivor)


def composite_strategy_step(
    strategy: ScriptedStrategy, state: StrategyState, zombies: Sequence[Pos], survivor: Pos
) -> tuple[tuple[Pos, ...], StrategyState]:
    return strategy.step(state, zombies, survivor)


class PairStrategy(ScriptedStrategy):
    """Two zombies on adjacent vertices playing the pair rule on a 2- or 3-tree product."""

    name = "pair"

    def __init__(self, product: ProductGraph):
        if product.dimension not in (2, 3):
            raise GraphError("the pair strategy needs a product of two or three trees")
        require_tree_factors(product, allow_trivial=True)
        placement = initial_placement(product)
        super().__init__(product, placement, PairTeam(tuple(range(product.dimension)), 0, 1))


class HomeStrategy(ScriptedStrategy):
    """Every zombie plays the home strategy from fixed homes; no hand-overs."""

    name = "home"

    def __init__(self, product: ProductGraph, homes: Sequence[int], on_x: Sequence[bool] | None = None):
        require_tree_factors(product)
        n = product.dimension
        if on_x is None:
            on_x = [i % 2 == 0 for i in range(len(homes))]
        a, b = product.factors[0].edges[0]
        x = (a, *([0] * (n - 1)))
        y = (b, *([0] * (n - 1)))
        placement = Placement(tuple(x if ox else y for ox in on_x), tuple(homes), "home", tuple(on_x))
        team = HomeTeam(tuple(range(n)), tuple(enumerate(homes)))
        super().__init__(product, placement, team)


class CompositeStrategy(ScriptedStrategy):
    """The ``ceil(2n/3)``-zombie strategy for any product of n >= 2 trees."""

    name = "composite"

    def __init__(self, product: ProductGraph):
        require_tree_factors(product)
        n = product.dimension
        placement = initial_placement(product)
        coords = tuple(range(n))
        k = len(placement.zombies)
        if n in (2, 3):
            team: Team = PairTeam(coords, 0, 1)
        elif n % 3 == 1:
            ell = (n - 1) // 3
            team = SweepTeam(coords, tuple(range(ell)), tuple(range(ell, 2 * ell)), 2 * ell)
        else:
            team = make_team(coords, tuple(range(k // 2)), tuple(range(k // 2, k)))
        super().__init__(product, placement, team)


def build_strategy(product: ProductGraph, name: str, zombies: int | None = None) -> ScriptedStrategy:
    """Strategy by CLI name. Too few zombies for the composite falls back to home sweeps."""
    n = product.dimension
    if name in ("pair", "lemma3"):
        if zombies not in (None, 2):
            raise ValueError("the pair strategy uses exactly two zombies")
        if n == 2:
            return PairStrategy(pad_product(product))
        return PairStrategy(product)
    if name == "composite":
        need = zombies_needed(n)
        if zombies is None or zombies == need:
            return CompositeStrategy(product)
        if zombies > need:
            raise ValueError(f"the composite strategy uses {need} zombies on {n} factors")
        homes = list(initial_placement(product).homes[:zombies])
        return HomeStrategy(product, homes)
    if name == "home":
        k = zombies or zombies_needed(n)
        return HomeStrategy(product, [(3 * (i // 2)) % n for i in range(k)])
    raise ValueError(f"unknown strategy {name!r}")
