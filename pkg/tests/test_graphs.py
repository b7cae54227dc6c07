import itertools
from collections import deque

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pursuit.graphs import (
    UNREACHABLE,
    Graph,
    GraphError,
    ProductGraph,
    Retraction,
    TreeSpec,
    bfs_distances,
    cartesian_product,
    cycle_graph,
    edge_retraction,
    find_isomorphism,
    geodesic_moves,
    hypercube,
    path_graph,
    product_distance,
    proper_two_coloring,
    retraction_image,
    tree_product,
    verify_retraction,
)


# --- strategies for hypothesis ---------------------------------------------

@st.composite
def trees(draw, min_size=2, max_size=12):
    n = draw(st.integers(min_size, max_size))
    parents = [draw(st.integers(0, i - 1)) for i in range(1, n)]
    return TreeSpec.from_parents(parents)


@st.composite
def connected_graphs(draw, min_size=1, max_size=5):
    n = draw(st.integers(min_size, max_size))
    if n == 1:
        return Graph(1, ())
    t = draw(trees(n, n))
    extra = draw(st.sets(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=4))
    edges = set(t.graph.edges) | {(min(a, b), max(a, b)) for a, b in extra if a != b}
    return Graph.from_edges(n, edges)


def naive_bfs(graph, s):
    dist = {s: 0}
    q = deque([s])
    while q:
        u = q.popleft()
        for v in range(graph.vertex_count):
            if graph.has_edge(u, v) and v not in dist:
                dist[v] = dist[u] + 1
                q.append(v)
    return dist


# --- Graph ---------------------------------------------------------------

def test_edges_are_normalised():
    g = Graph.from_edges(3, [(2, 1), (0, 1)])
    assert g.edges == ((0, 1), (1, 2))
    assert g.neighbors(1) == (0, 2)


@pytest.mark.parametrize("edges", [[(0, 0)], [(0, 1), (1, 0)], [(0, 3)]])
def test_rejects_non_simple_or_out_of_range(edges):
    with pytest.raises(GraphError):
        Graph.from_edges(3, edges)


def test_canonical_form_ignores_edge_order():
    a = Graph.from_edges(4, [(0, 1), (2, 3), (1, 2)])
    b = Graph.from_edges(4, [(3, 2), (1, 0), (2, 1)])
    assert a.canonical_form() == b.canonical_form() == "4;0-1,1-2,2-3"
    assert a.content_hash() == b.content_hash()


# --- bfs_distances -----------------------------------------------------------

def test_bfs_on_path():
    assert bfs_distances(path_graph(4), 0) == [0, 1, 2, 3]


def test_bfs_on_cycle():
    assert bfs_distances(cycle_graph(5), 0) == [0, 1, 2, 2, 1]


def test_bfs_marks_unreachable():
    g = Graph.from_edges(3, [(0, 1)])
    assert bfs_distances(g, 0) == [0, 1, UNREACHABLE]


def test_bfs_rejects_bad_source():
    with pytest.raises(GraphError):
        bfs_distances(path_graph(3), 3)


@given(connected_graphs(max_size=7), st.data())
def test_bfs_source_zero_and_matches_naive(g, data):
    s = data.draw(st.integers(0, g.vertex_count - 1))
    d = bfs_distances(g, s)
    assert d[s] == 0
    assert {v: x for v, x in enumerate(d)} == naive_bfs(g, s)


# --- products --------------------------------------------------------------

def test_p2_square_is_c4():
    prod = cartesian_product([path_graph(2), path_graph(2)])
    assert find_isomorphism(prod.graph, cycle_graph(4)) is not None


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_power_of_p2_is_hypercube(n):
    prod = cartesian_product([path_graph(2)] * n)
    assert find_isomorphism(prod.graph, hypercube(n)) is not None


def test_single_factor_product_is_the_factor():
    g = cycle_graph(5)
    assert cartesian_product([g]).graph == g


def test_empty_product_rejected():
    with pytest.raises(GraphError):
        cartesian_product([])


def test_codec_is_row_major():
    prod = ProductGraph((path_graph(2), path_graph(3)))
    assert [prod.decode(i) for i in range(6)] == [(0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (1, 2)]
    assert all(prod.encode(prod.decode(i)) == i for i in range(6))


def test_product_distance_examples():
    p33 = tree_product([TreeSpec.path(3)] * 2)
    assert product_distance(p33.oracle, (0, 0), (2, 1)) == 3
    assert product_distance(p33.oracle, (1, 2), (1, 2)) == 0
    q3 = cartesian_product([path_graph(2)] * 3)
    for u, v in itertools.product(q3.vertices, repeat=2):
        assert product_distance(q3.oracle, u, v) == sum(a != b for a, b in zip(u, v))


def test_product_distance_range_checked():
    p = tree_product([TreeSpec.path(3)] * 2)
    with pytest.raises(GraphError):
        product_distance(p.oracle, (0, 3), (0, 0))


@settings(max_examples=40, deadline=None)
@given(st.lists(connected_graphs(max_size=5), min_size=1, max_size=3))
def test_product_distance_equals_bfs_on_flat_product(factors):
    prod = ProductGraph(tuple(factors))
    flat = prod.graph
    for i in range(flat.vertex_count):
        d = bfs_distances(flat, i)
        for j in range(flat.vertex_count):
            assert prod.distance(prod.decode(i), prod.decode(j)) == d[j]


@settings(max_examples=30, deadline=None)
@given(st.lists(connected_graphs(max_size=4), min_size=1, max_size=3))
def test_product_adjacency_rule(factors):
    prod = ProductGraph(tuple(factors))
    for u, v in itertools.combinations(prod.vertices, 2):
        diff = [i for i in range(len(u)) if u[i] != v[i]]
        expected = len(diff) == 1 and factors[diff[0]].has_edge(u[diff[0]], v[diff[0]])
        assert prod.graph.has_edge(prod.encode(u), prod.encode(v)) == expected


# --- geodesic_moves ----------------------------------------------------------

def test_geodesic_examples():
    p4, c4, c5 = path_graph(4), cycle_graph(4), cycle_graph(5)
    assert geodesic_moves(p4, p4.distance_matrix, 0, 3) == {1}
    assert geodesic_moves(c4, c4.distance_matrix, 0, 2) == {1, 3}
    assert geodesic_moves(c5, c5.distance_matrix, 0, 2) == {1}


def test_geodesic_rejects_equal_endpoints():
    g = path_graph(3)
    with pytest.raises(GraphError):
        geodesic_moves(g, g.distance_matrix, 1, 1)


@given(connected_graphs(min_size=2, max_size=7), st.data())
def test_geodesic_moves_nonempty_and_strictly_closer(g, data):
    a = data.draw(st.integers(0, g.vertex_count - 1))
    b = data.draw(st.integers(0, g.vertex_count - 1).filter(lambda x: x != a))
    d = g.distance_matrix
    moves = geodesic_moves(g, d, a, b)
    assert moves
    assert moves == {w for w in g.neighbors(a) if d[w][b] == d[a][b] - 1}


# --- trees and colouring ---------------------------------------------------

def test_tree_requires_two_vertices():
    with pytest.raises(GraphError):
        TreeSpec.from_parents([])


def test_tree_from_unordered_edges_is_bfs_normalised():
    t = TreeSpec.from_edges(4, [(3, 2), (2, 0), (0, 1)])
    assert all(t.parent[i] < i for i in range(1, 4))
    assert find_isomorphism(t.graph, Graph.from_edges(4, [(3, 2), (2, 0), (0, 1)])) is not None


def test_coloring_examples():
    assert proper_two_coloring(TreeSpec.path(2)) == [0, 1]
    assert proper_two_coloring(TreeSpec.path(4)) == [0, 1, 0, 1]
    assert proper_two_coloring(TreeSpec.star(3)) == [0, 1, 1, 1]


@given(trees())
def test_coloring_is_proper_with_root_zero(t):
    c = proper_two_coloring(t)
    assert c[0] == 0
    assert all(c[u] != c[v] for u, v in t.graph.edges)


@given(trees())
def test_tree_invariants(t):
    assert len(t.graph.edges) == t.vertex_count - 1
    assert t.graph.is_connected()
    assert t.parent[0] == -1 and all(t.parent[i] < i for i in range(1, t.vertex_count))


# --- retractions -------------------------------------------------------------

def test_retraction_identity_on_hypercube():
    r = edge_retraction([TreeSpec.path(2)] * 3)
    assert r.mapping == tuple(range(8))
    assert verify_retraction(r.domain, r)


def test_retraction_single_p3():
    r = edge_retraction([TreeSpec.path(3)], [(0, 1)])
    assert r.mapping == (0, 1, 0)


def test_retraction_p3_square_is_coordinate_parity():
    trees_ = [TreeSpec.path(3)] * 2
    r = edge_retraction(trees_, [(0, 1), (0, 1)])
    prod = tree_product(trees_)
    for v in range(9):
        x = prod.decode(v)
        assert prod.decode(r.mapping[v]) == tuple(c % 2 for c in x)
    # homomorphism checked independently of verify_retraction
    for u, v in prod.graph.edges:
        assert prod.graph.has_edge(r.mapping[u], r.mapping[v])
    image, _ = retraction_image(r)
    assert find_isomorphism(image, cycle_graph(4)) is not None


def test_retraction_rejects_non_edge():
    with pytest.raises(GraphError):
        edge_retraction([TreeSpec.path(3)], [(0, 2)])


def test_verify_retraction_rejects_collapse():
    c4 = cycle_graph(4)
    r = Retraction(c4, frozenset({0, 2, 3}), (0, 0, 2, 3))
    assert not verify_retraction(c4, r)


def test_verify_retraction_identity():
    g = cycle_graph(5)
    assert verify_retraction(g, Retraction(g, frozenset(range(5)), tuple(range(5))))


@settings(max_examples=30, deadline=None)
@given(st.lists(trees(max_size=4), min_size=1, max_size=4), st.data())
def test_edge_retraction_properties(ts, data):
    edges = [data.draw(st.sampled_from(t.graph.edges)) for t in ts]
    r = edge_retraction(ts, edges)
    assert verify_retraction(r.domain, r)
    image, _ = retraction_image(r)
    n = len(ts)
    assert image.vertex_count == 2**n
    assert all(image.degree(v) == n for v in range(image.vertex_count))
    assert find_isomorphism(image, hypercube(n)) is not None


# --- isomorphism search, cross-checked against networkx ---------------------

def _to_nx(g):
    h = nx.Graph()
    h.add_nodes_from(range(g.vertex_count))
    h.add_edges_from(g.edges)
    return h


@settings(max_examples=60, deadline=None)
@given(connected_graphs(max_size=6), connected_graphs(max_size=6))
def test_isomorphism_agrees_with_networkx(g, h):
    found = find_isomorphism(g, h)
    assert (found is not None) == nx.is_isomorphic(_to_nx(g), _to_nx(h))
    if found is not None:
        assert sorted(found.values()) == list(range(h.vertex_count))
        assert all(h.has_edge(found[u], found[v]) for u, v in g.edges)
