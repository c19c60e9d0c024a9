"""Graph construction, validation, and canonical relabeling."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from byzgather.errors import GraphError
from byzgather.graph import (
    PortLabeledGraph,
    canonical_form,
    center_graph,
    cycle_graph,
    induced_subgraph,
    random_connected_graph,
)

PATH3 = {"n": 3, "adj": [[[1, 0]], [[0, 0], [2, 0]], [[1, 1]]]}


def relabel(g, perm):
    """Rebuild g with node v renamed perm[v]; port order is preserved."""
    rows = [None] * g.node_count
    for v, row in enumerate(g.adjacency):
        rows[perm[v]] = tuple((perm[w], q) for w, q in row)
    return PortLabeledGraph(g.node_count, tuple(rows))


def test_from_literal_roundtrip():
    g = PortLabeledGraph.from_literal(PATH3)
    assert g.node_count == 3
    assert g.to_literal() == PATH3


def test_rejects_self_loop():
    with pytest.raises(GraphError, match="self-loop"):
        PortLabeledGraph.from_literal({"n": 2, "adj": [[[0, 0]], []]})


def test_rejects_asymmetric_ports():
    bad = {"n": 2, "adj": [[[1, 0]], [[0, 1], [0, 0]]]}
    with pytest.raises(GraphError, match="asymmetric"):
        PortLabeledGraph.from_literal(bad)


def test_rejects_dangling_port_reference():
    bad = {"n": 2, "adj": [[[1, 3]], [[0, 0]]]}
    with pytest.raises(GraphError):
        PortLabeledGraph.from_literal(bad)


def test_rejects_disconnected():
    bad = {"n": 4, "adj": [[[1, 0]], [[0, 0]], [[3, 0]], [[2, 0]]]}
    with pytest.raises(GraphError, match="connect"):
        PortLabeledGraph.from_literal(bad)


def test_single_node_graph():
    g = PortLabeledGraph.from_literal({"n": 1, "adj": [[]]})
    assert g.radius() == 0
    assert g.center_nodes() == frozenset({0})
    assert g.edges() == frozenset()


def test_cycle_graph_shape():
    g = cycle_graph(6)
    assert g.node_count == 6
    assert all(g.degree(v) == 2 for v in range(6))
    # port 0 walks clockwise, port 1 anticlockwise
    for v in range(6):
        assert g.adjacency[v][0] == ((v + 1) % 6, 1)
        assert g.adjacency[v][1] == ((v - 1) % 6, 0)
    assert g.radius() == 3


def test_cycle_graph_minimum_size():
    with pytest.raises(GraphError):
        cycle_graph(2)


def test_distances_and_radius_path():
    g = PortLabeledGraph.from_literal(PATH3)
    assert list(g.distances_from(0)) == [0, 1, 2]
    assert g.radius() == 1
    assert g.center_nodes() == frozenset({1})


def test_random_connected_graph_is_deterministic():
    a = random_connected_graph(7, 0.25, seed=42)
    b = random_connected_graph(7, 0.25, seed=42)
    assert a == b
    c = random_connected_graph(7, 0.25, seed=43)
    assert a != c


def test_random_connected_graph_valid_range():
    for seed in range(30):
        n = random.Random(seed).randint(1, 9)
        g = random_connected_graph(n, 0.3, seed=seed)
        assert g.node_count == n
        # constructor validates symmetry/connectivity; reaching here is the test
        assert max(g.distances_from(0)) < n


def test_induced_subgraph_keeps_internal_edges_only():
    g = cycle_graph(5)
    nodes, edges = induced_subgraph(g, {0, 1, 2})
    assert nodes == frozenset({0, 1, 2})
    assert edges == frozenset({(0, 1), (1, 2)})


def test_canonical_form_path_is_observer_free():
    g = PortLabeledGraph.from_literal(PATH3)
    nodes = frozenset(range(3))
    edges = g.edges()
    c = canonical_form(g, nodes, edges)
    assert c.node_count == 3
    assert sorted(c.node_map) == [0, 1, 2]


def test_canonical_form_separates_path_from_triangle():
    tri = {"n": 3, "adj": [[[1, 0], [2, 0]], [[0, 0], [2, 1]], [[0, 1], [1, 1]]]}
    g_tri = PortLabeledGraph.from_literal(tri)
    g_path = PortLabeledGraph.from_literal(PATH3)
    c_tri = canonical_form(g_tri, frozenset(range(3)), g_tri.edges())
    c_path = canonical_form(g_path, frozenset(range(3)), g_path.edges())
    assert c_tri != c_path


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000), st.integers(2, 8), st.integers(0, 10_000))
def test_canonical_form_invariant_under_relabeling(seed, n, perm_seed):
    """The canonical code may not depend on how nodes happen to be numbered."""
    g = random_connected_graph(n, 0.3, seed=seed)
    perm = list(range(n))
    random.Random(perm_seed).shuffle(perm)
    h = relabel(g, perm)
    cg = canonical_form(g, frozenset(range(n)), g.edges())
    ch = canonical_form(h, frozenset(range(n)), h.edges())
    assert cg == ch
    # full maps need not correspond pointwise (ties between automorphic
    # starts break by source index), but each must be a bijection
    assert sorted(cg.node_map.values()) == list(range(n))
    assert sorted(ch.node_map.values()) == list(range(n))


def test_center_graph_of_path():
    g = PortLabeledGraph.from_literal(PATH3)
    nodes, edges = center_graph(g)
    assert nodes == frozenset({1})
    assert edges == frozenset()


def test_canonical_step_follows_ports():
    g = cycle_graph(4)
    c = canonical_form(g, frozenset(range(4)), g.edges())
    v = c.node_map[0]
    w, entry = c.step(v, 0)
    assert w == c.node_map[1]
    assert entry == 1
