"""On-disk cache of per-k solver outcomes.

Records are JSON files named by the SHA-256 of ``(canonical graph, variant,
k)``. Writes go through a temporary file and ``os.replace`` so concurrent
invocations never observe a half-written record.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from dataclasses import asdict, dataclass
from pathlib import Path

from .engine import VARIANTS, GameSpec
from .graphs import Graph
from .solver import DEFAULT_BUDGET, BudgetExceeded, GameValue, solve

ENV_VAR = "PURSUIT_CACHE"


@dataclass(frozen=True)
class Outcome:
    variant: str
    graph_hash: str
    k: int
    pursuers_win: bool
    placement: list[int] | None
    states_explored: int


class CacheMismatch(RuntimeError):
    pass


class ResultCache:
    def __init__(self, directory: str | Path):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)

    @staticmethod
    def key(graph: Graph, variant: str, k: int) -> str:
        payload = f"{graph.canonical_form()}|{variant}|{k}"
        return hashlib.sha256(payload.encode()).hexdigest()

    def _path(self, key: str) -> Path:
        return self.directory / f"{key}.json"

    def get(self, graph: Graph, variant: str, k: int) -> Outcome | None:
        path = self._path(self.key(graph, variant, k))
        try:
            data = json.loads(path.read_text())
        except FileNotFoundError:
            return None
        return Outcome(**data)

    def put(self, graph: Graph, outcome: Outcome) -> None:
        path = self._path(self.key(graph, outcome.variant, outcome.k))
        fd, tmp = tempfile.mkstemp(dir=self.directory, suffix=".tmp")
        try:
            with os.fdopen(fd, "w") as fh:
                json.dump(asdict(outcome), fh, sort_keys=True)
            os.replace(tmp, path)
        except BaseException:
            Path(tmp).unlink(missing_ok=True)
            raise


def solve_outcome(graph: Graph, variant: str, k: int, budget: int = DEFAULT_BUDGET) -> Outcome:
    spec = GameSpec(graph, k, *VARIANTS[variant])
    result = solve(spec, budget)
    placement = result.optimal_placement()
    return Outcome(
        variant,
        graph.content_hash(),
        k,
        placement is not None,
        list(placement) if placement is not None else None,
        result.states_explored,
    )


def cached_game_number(
    graph: Graph,
    variant: str,
    k_max: int,
    cache: ResultCache | None = None,
    budget: int = DEFAULT_BUDGET,
    cross_check: bool = False,
) -> tuple[GameValue, list[Outcome]]:
    """Per-k outcomes up to the first pursuer win, read from or written to ``cache``.

    With ``cross_check`` every outcome is recomputed and compared against any
    cached record; a disagreement raises :class:`CacheMismatch`.
    """
    rows = []
    for k in range(1, k_max + 1):
        hit = cache.get(graph, variant, k) if cache is not None else None
        if hit is None or cross_check:
            try:
                fresh = solve_outcome(graph, variant, k, budget)
            except BudgetExceeded as exc:
                raise BudgetExceeded(exc.required, exc.budget, k) from None
            if hit is not None and hit != fresh:
                raise CacheMismatch(f"cached record for {variant} k={k} differs from recomputation")
            if cache is not None and hit is None:
                cache.put(graph, fresh)
            hit = fresh
        rows.append(hit)
        if hit.pursuers_win:
            break
    rule = VARIANTS[variant]
    last = rows[-1]
    value = last.k if last.pursuers_win else None
    placement = tuple(last.placement) if last.placement is not None else None
    explored = sum(r.states_explored for r in rows)
    return GameValue(*rule, graph.content_hash(), value, k_max, placement, explored), rows
