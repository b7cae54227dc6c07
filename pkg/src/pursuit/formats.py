"""Text formats for trees, graphs, product specs and solver output.

Tree file:     ``tree <vertex_count> <parent_1> ... <parent_{n-1}>``
Graph file:    ``graph <vertex_count>`` then one ``u v`` edge per line
Product spec:  one factor per line, either a path to a tree/graph file
               (relative to the product file) or an inline ``tree ...`` line

Blank lines and ``#`` comments are ignored everywhere.
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterable, Union

from .graphs import Graph, GraphError, ProductGraph, TreeSpec

Factor = Union[TreeSpec, Graph]


class ParseError(ValueError):
    def __init__(self, message: str, path: str | Path | None = None, line: int | None = None):
        where = ""
        if path is not None:
            where += f"{path}"
        if line is not None:
            where += f":{line}"
        super().__init__(f"{where}: {message}" if where else message)
        self.path = path
        self.line = line


def _content_lines(text: str) -> list[tuple[int, str]]:
    out = []
    for i, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append((i, line))
    return out


def parse_tree_line(line: str, lineno: int | None = None, path: str | Path | None = None) -> TreeSpec:
    parts = line.split()
    if not parts or parts[0] != "tree":
        raise ParseError("expected 'tree <vertex_count> <parents...>'", path, lineno)
    try:
        nums = [int(p) for p in parts[1:]]
    except ValueError:
        raise ParseError("tree fields must be integers", path, lineno) from None
    if not nums:
        raise ParseError("missing vertex count", path, lineno)
    n, parents = nums[0], nums[1:]
    if len(parents) != n - 1:
        raise ParseError(f"tree on {n} vertices needs {n - 1} parents, got {len(parents)}", path, lineno)
    try:
        return TreeSpec.from_parents(parents)
    except GraphError as exc:
        raise ParseError(str(exc), path, lineno) from None


def parse_graph_text(text: str, path: str | Path | None = None) -> Factor:
    """Parse a tree or graph file body; trees come back as :class:`TreeSpec`."""
    lines = _content_lines(text)
    if not lines:
        raise ParseError("empty file", path)
    lineno, header = lines[0]
    if header.startswith("tree"):
        if len(lines) > 1:
            raise ParseError("unexpected content after tree line", path, lines[1][0])
        return parse_tree_line(header, lineno, path)
    parts = header.split()
    if parts[0] != "graph" or len(parts) != 2:
        raise ParseError("expected header 'graph <vertex_count>' or a tree line", path, lineno)
    try:
        n = int(parts[1])
    except ValueError:
        raise ParseError("vertex count must be an integer", path, lineno) from None
    edges = []
    for lineno, line in lines[1:]:
        fields = line.split()
        if len(fields) != 2:
            raise ParseError("edge lines need exactly two vertex ids", path, lineno)
        try:
            u, v = int(fields[0]), int(fields[1])
        except ValueError:
            raise ParseError("vertex ids must be integers", path, lineno) from None
        if not (0 <= u < n and 0 <= v < n):
            raise ParseError(f"edge ({u}, {v}) out of range", path, lineno)
        edges.append((u, v))
    try:
        return Graph.from_edges(n, edges)
    except GraphError as exc:
        raise ParseError(str(exc), path) from None


def load_graph_file(path: str | Path) -> Factor:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"cannot read: {exc.strerror}", path) from None
    return parse_graph_text(text, path)


def load_product_file(path: str | Path) -> list[Factor]:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"cannot read: {exc.strerror}", path) from None
    factors: list[Factor] = []
    for lineno, line in _content_lines(text):
        if line.startswith("tree"):
            factors.append(parse_tree_line(line, lineno, path))
            continue
        ref = Path(line)
        if not ref.is_absolute():
            ref = path.parent / ref
        if not ref.exists():
            raise ParseError(f"factor file {line!r} not found", path, lineno)
        factors.append(load_graph_file(ref))
    if not factors:
        raise ParseError("product file lists no factors", path)
    return factors


def as_graph(f: Factor) -> Graph:
    return f.graph if isinstance(f, TreeSpec) else f


def as_tree(f: Factor) -> TreeSpec:
    if isinstance(f, TreeSpec):
        return f
    if len(f.edges) != f.vertex_count - 1 or not f.is_connected():
        raise GraphError("factor is not a tree")
    return TreeSpec.from_edges(f.vertex_count, f.edges)


def product_of(factors: Iterable[Factor]) -> ProductGraph:
    return ProductGraph(tuple(as_graph(f) for f in factors))


def format_tree(tree: TreeSpec) -> str:
    return " ".join(["tree", str(tree.vertex_count), *map(str, tree.parent[1:])]) + "\n"


def format_graph(graph: Graph) -> str:
    lines = [f"graph {graph.vertex_count}"]
    lines += [f"{u} {v}" for u, v in graph.edges]
    return "\n".join(lines) + "\n"


RESULT_HEADER = "variant\tgraph-hash\tk\twinner-at-optimal-placement\tstates-explored"


def format_result_row(variant: str, graph_hash: str, k: int, winner: str, states: int) -> str:
    return f"{variant}\t{graph_hash}\t{k}\t{winner}\t{states}"


def dump_winner_map(result) -> Iterable[str]:
    """``pursuers<TAB>evader<TAB>to-move<TAB>winner<TAB>steps`` per live state."""
    from .solver import iter_states

    yield "pursuers\tevader\tto-move\twinner\tsteps"
    for state in iter_states(result):
        steps = result.steps_of(state)
        side = "pursuers" if state.phase.value == "pursuers-to-move" else "evader"
        winner = "pursuer" if steps is not None else "evader"
        yield f"{','.join(map(str, state.pursuers))}\t{state.evader}\t{side}\t{winner}\t{'' if steps is None else steps}"
