"""Simple graphs, trees, Cartesian products and the hypercube retraction.

Vertices are dense integer ids ``0..n-1``. Product vertices are coordinate
tuples ``(x_1, ..., x_k)`` encoded row-major: the last coordinate varies
fastest, so ``index = sum(x_i * stride_i)`` with ``stride_k = 1``.
"""

from __future__ import annotations

import hashlib
import itertools
import math
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

UNREACHABLE = -1


class GraphError(ValueError):
    """Raised for malformed or unsuitable graph inputs."""


@dataclass(frozen=True)
class Graph:
    vertex_count: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        if self.vertex_count < 0:
            raise GraphError("vertex_count must be non-negative")
        normalized = set()
        for u, v in self.edges:
            if not (0 <= u < self.vertex_count and 0 <= v < self.vertex_count):
                raise GraphError(f"edge ({u}, {v}) out of range for {self.vertex_count} vertices")
            if u == v:
                raise GraphError(f"self-loop at {u}")
            e = (min(u, v), max(u, v))
            if e in normalized:
                raise GraphError(f"repeated edge {e}")
            normalized.add(e)
        object.__setattr__(self, "edges", tuple(sorted(normalized)))

    @classmethod
    def from_edges(cls, vertex_count: int, edges: Iterable[tuple[int, int]]) -> Graph:
        return cls(vertex_count, tuple((int(u), int(v)) for u, v in edges))

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        adj: list[list[int]] = [[] for _ in range(self.vertex_count)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return tuple(tuple(sorted(a)) for a in adj)

    @cached_property
    def edge_set(self) -> frozenset[tuple[int, int]]:
        return frozenset(self.edges)

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v]

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edge_set

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    @cached_property
    def distance_matrix(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(bfs_distances(self, s)) for s in range(self.vertex_count))

    def is_connected(self) -> bool:
        if self.vertex_count == 0:
            return False
        return UNREACHABLE not in bfs_distances(self, 0)

    def canonical_form(self) -> str:
        body = ",".join(f"{u}-{v}" for u, v in self.edges)
        return f"{self.vertex_count};{body}"

    def content_hash(self) -> str:
        return hashlib.sha256(self.canonical_form().encode()).hexdigest()[:16]

    def induced_subgraph(self, vertices: Iterable[int]) -> tuple[Graph, tuple[int, ...]]:
        """Induced subgraph relabelled densely; also returns new-id -> old-id."""
        order = tuple(sorted(set(vertices)))
        index = {v: i for i, v in enumerate(order)}
        edges = [(index[u], index[v]) for u, v in self.edges if u in index and v in index]
        return Graph.from_edges(len(order), edges), order


def require_game_graph(graph: Graph) -> None:
    """Games are only defined here on connected graphs with at least one edge."""
    if graph.vertex_count < 2:
        raise GraphError("game graphs must have at least 2 vertices")
    if not graph.is_connected():
        raise GraphError("game graphs must be connected")


def bfs_distances(graph: Graph, source: int) -> list[int]:
    if not 0 <= source < graph.vertex_count:
        raise GraphError(f"source {source} out of range")
    dist = [UNREACHABLE] * graph.vertex_count
    dist[source] = 0
    queue = deque([source])
    adj = graph.adjacency
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if dist[w] == UNREACHABLE:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def geodesic_moves(graph: Graph, distances: Sequence[Sequence[int]], source: int, target: int) -> set[int]:
    """Neighbours of ``source`` exactly one step closer to ``target``."""
    here = distances[source][target]
    if here == 0:
        raise GraphError("source equals target: the pursuit is already over")
    return {w for w in graph.neighbors(source) if distances[w][target] == here - 1}


# --- named graphs ---------------------------------------------------------


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def hypercube(n: int) -> Graph:
    """Q_n on bit-vectors; vertex v is adjacent to v ^ (1 << i)."""
    size = 1 << n
    return Graph.from_edges(size, [(v, v ^ (1 << i)) for v in range(size) for i in range(n) if v < v ^ (1 << i)])


# --- trees ----------------------------------------------------------------


@dataclass(frozen=True)
class TreeSpec:
    """A non-trivial tree as a parent array; ``parent[0]`` is ``-1``."""

    vertex_count: int
    parent: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.vertex_count < 2:
            raise GraphError("trees must be non-trivial (at least 2 vertices)")
        if len(self.parent) != self.vertex_count or self.parent[0] != -1:
            raise GraphError("parent array must have length vertex_count with parent[0] = -1")
        for i in range(1, self.vertex_count):
            if not 0 <= self.parent[i] < i:
                raise GraphError(f"parent[{i}] = {self.parent[i]} must lie in [0, {i})")

    @classmethod
    def from_parents(cls, parents: Sequence[int]) -> TreeSpec:
        """Build from ``parent_1..parent_{n-1}``; relabels by BFS if not already ordered."""
        n = len(parents) + 1
        if all(0 <= p < i for i, p in enumerate(parents, start=1)):
            return cls(n, (-1, *parents))
        return cls.from_edges(n, [(p, i) for i, p in enumerate(parents, start=1)])

    @classmethod
    def from_edges(cls, vertex_count: int, edges: Iterable[tuple[int, int]]) -> TreeSpec:
        g = Graph.from_edges(vertex_count, edges)
        if len(g.edges) != vertex_count - 1 or not g.is_connected():
            raise GraphError("edges do not form a tree")
        order = [0]
        label = {0: 0}
        parent = [-1]
        queue = deque([0])
        while queue:
            u = queue.popleft()
            for w in g.neighbors(u):
                if w not in label:
                    label[w] = len(order)
                    order.append(w)
                    parent.append(label[u])
                    queue.append(w)
        return cls(vertex_count, tuple(parent))

    @classmethod
    def path(cls, n: int) -> TreeSpec:
        return cls(n, (-1, *range(n - 1)))

    @classmethod
    def star(cls, leaves: int) -> TreeSpec:
        return cls(leaves + 1, (-1, *([0] * leaves)))

    @cached_property
    def graph(self) -> Graph:
        return Graph.from_edges(self.vertex_count, [(self.parent[i], i) for i in range(1, self.vertex_count)])

    def first_edge(self) -> tuple[int, int]:
        return (0, 1)


def proper_two_coloring(tree: TreeSpec) -> list[int]:
    color = [0] * tree.vertex_count
    for i in range(1, tree.vertex_count):
        color[i] = 1 - color[tree.parent[i]]
    return color


# --- Cartesian products ---------------------------------------------------


@dataclass(frozen=True)
class DistanceOracle:
    tables: tuple[tuple[tuple[int, ...], ...], ...]

    @classmethod
    def for_factors(cls, factors: Sequence[Graph]) -> DistanceOracle:
        return cls(tuple(f.distance_matrix for f in factors))

    def coordinate_distances(self, u: Sequence[int], v: Sequence[int]) -> list[int]:
        if len(u) != len(self.tables) or len(v) != len(self.tables):
            raise GraphError("tuple length does not match factor count")
        out = []
        for table, a, b in zip(self.tables, u, v):
            if not (0 <= a < len(table) and 0 <= b < len(table)):
                raise GraphError(f"coordinate out of range: {a}, {b}")
            out.append(table[a][b])
        return out


def product_distance(oracle: DistanceOracle, u: Sequence[int], v: Sequence[int]) -> int:
    return sum(oracle.coordinate_distances(u, v))


@dataclass(frozen=True)
class ProductGraph:
    factors: tuple[Graph, ...]

    def __post_init__(self) -> None:
        if not self.factors:
            raise GraphError("a product needs at least one factor")
        if any(f.vertex_count == 0 for f in self.factors):
            raise GraphError("product factors must be non-empty")

    @property
    def dimension(self) -> int:
        return len(self.factors)

    @cached_property
    def shape(self) -> tuple[int, ...]:
        return tuple(f.vertex_count for f in self.factors)

    @cached_property
    def strides(self) -> tuple[int, ...]:
        strides = [1] * self.dimension
        for i in range(self.dimension - 2, -1, -1):
            strides[i] = strides[i + 1] * self.shape[i + 1]
        return tuple(strides)

    @property
    def vertex_count(self) -> int:
        return math.prod(self.shape)

    def encode(self, x: Sequence[int]) -> int:
        if len(x) != self.dimension or any(not 0 <= c < s for c, s in zip(x, self.shape)):
            raise GraphError(f"invalid product vertex {tuple(x)}")
        return sum(c * s for c, s in zip(x, self.strides))

    def decode(self, index: int) -> tuple[int, ...]:
        if not 0 <= index < self.vertex_count:
            raise GraphError(f"product index {index} out of range")
        out = []
        for s in self.strides:
            c, index = divmod(index, s)
            out.append(c)
        return tuple(out)

    @cached_property
    def vertices(self) -> tuple[tuple[int, ...], ...]:
        return tuple(itertools.product(*(range(s) for s in self.shape)))

    @cached_property
    def oracle(self) -> DistanceOracle:
        return DistanceOracle.for_factors(self.factors)

    @cached_property
    def graph(self) -> Graph:
        edges = []
        for x in self.vertices:
            base = self.encode(x)
            for i, f in enumerate(self.factors):
                for w in f.neighbors(x[i]):
                    if w > x[i]:
                        edges.append((base, base + (w - x[i]) * self.strides[i]))
        return Graph.from_edges(self.vertex_count, edges)

    @cached_property
    def distance_matrix(self) -> tuple[tuple[int, ...], ...]:
        verts = self.vertices
        return tuple(tuple(product_distance(self.oracle, u, v) for v in verts) for u in verts)

    def distance(self, u: Sequence[int], v: Sequence[int]) -> int:
        return product_distance(self.oracle, u, v)

    def neighbors(self, x: Sequence[int]) -> list[tuple[int, ...]]:
        out = []
        for i, f in enumerate(self.factors):
            for w in f.neighbors(x[i]):
                out.append((*x[:i], w, *x[i + 1 :]))
        return out

    def content_hash(self) -> str:
        return self.graph.content_hash()


def cartesian_product(factors: Sequence[Graph]) -> ProductGraph:
    return ProductGraph(tuple(factors))


def tree_product(trees: Sequence[TreeSpec]) -> ProductGraph:
    return ProductGraph(tuple(t.graph for t in trees))


# --- retractions ----------------------------------------------------------


@dataclass(frozen=True)
class Retraction:
    domain: Graph
    image_vertices: frozenset[int]
    mapping: tuple[int, ...]


def verify_retraction(graph: Graph, r: Retraction) -> bool:
    if len(r.mapping) != graph.vertex_count:
        return False
    if any(r.mapping[v] != v for v in r.image_vertices):
        return False
    if any(m not in r.image_vertices for m in r.mapping):
        return False
    # homomorphism into the induced image: edges stay edges, never collapse
    return all(graph.has_edge(r.mapping[u], r.mapping[v]) for u, v in graph.edges)


def edge_retraction(trees: Sequence[TreeSpec], chosen_edges: Sequence[tuple[int, int]] | None = None) -> Retraction:
    """Coordinate-wise colour-class map of a tree product onto an embedded Q_n.

    Each tree is folded onto its chosen edge ``(x_i, y_i)`` by sending every
    vertex to the endpoint in the same class of the proper 2-colouring.
    """
    if chosen_edges is None:
        chosen_edges = [t.first_edge() for t in trees]
    if len(chosen_edges) != len(trees):
        raise GraphError("need one chosen edge per tree")
    folds = []
    for t, (x, y) in zip(trees, chosen_edges):
        if not t.graph.has_edge(x, y):
            raise GraphError(f"({x}, {y}) is not an edge of the tree")
        color = proper_two_coloring(t)
        by_color = {color[x]: x, color[y]: y}
        folds.append([by_color[c] for c in color])
    product = tree_product(trees)
    mapping = tuple(product.encode([f[c] for f, c in zip(folds, x)]) for x in product.vertices)
    image = frozenset(product.encode(x) for x in itertools.product(*({x, y} for x, y in chosen_edges)))
    return Retraction(product.graph, image, mapping)


def find_isomorphism(g: Graph, h: Graph) -> dict[int, int] | None:
    """Backtracking search for an isomorphism ``g -> h``; small graphs only."""
    if g.vertex_count != h.vertex_count or len(g.edges) != len(h.edges):
        return None
    if sorted(map(g.degree, range(g.vertex_count))) != sorted(map(h.degree, range(h.vertex_count))):
        return None
    # visit g in BFS order so each new vertex has a mapped neighbour to anchor it
    order: list[int] = []
    seen: set[int] = set()
    for root in range(g.vertex_count):
        if root in seen:
            continue
        seen.add(root)
        queue = deque([root])
        while queue:
            u = queue.popleft()
            order.append(u)
            for w in g.neighbors(u):
                if w not in seen:
                    seen.add(w)
                    queue.append(w)

    mapping: dict[int, int] = {}
    used: set[int] = set()

    def extend(pos: int) -> bool:
        if pos == len(order):
            return True
        u = order[pos]
        mapped_nbrs = [mapping[w] for w in g.neighbors(u) if w in mapping]
        candidates = h.neighbors(mapped_nbrs[0]) if mapped_nbrs else range(h.vertex_count)
        for c in candidates:
            if c in used or h.degree(c) != g.degree(u):
                continue
            if any(not h.has_edge(c, m) for m in mapped_nbrs):
                continue
            # non-edges must stay non-edges
            if any(h.has_edge(c, mapping[w]) for w in mapping if not g.has_edge(u, w)):
                continue
            mapping[u] = c
            used.add(c)
            if extend(pos + 1):
                return True
            del mapping[u]
            used.discard(c)
        return False

    return dict(mapping) if extend(0) else None


def retraction_image(r: Retraction) -> tuple[Graph, tuple[int, ...]]:
    return r.domain.induced_subgraph(r.image_vertices)
