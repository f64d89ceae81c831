"""Tests for walks and cycles"""

import networkx as nx
import pytest
from qcalib import (
    build_topology,
    close_cycle,
    edge_list_from_walk,
    incidence_and_weights,
    is_simple_cycle,
    is_walk,
    walk_attribute,
)
from qcalib.utils import adjacency_list_from_edge_list, bounding_box_diagonal

# pylint: disable=redefined-outer-name


@pytest.fixture(scope="function")
def square_with_tail() -> nx.Graph:
    """A 4-cycle 0-1-2-3 with a chord 0-2 and a tail 3-4"""
    G = nx.Graph()
    for u, v in [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2), (3, 4)]:
        G.add_edge(u, v, edge=10 * u + v)
    return G


def test_edge_list_from_walk():
    """Consecutive vertices give the edges in order"""
    assert not edge_list_from_walk([])
    assert not edge_list_from_walk([0])
    assert edge_list_from_walk([0, 1, 3, 1, 2]) == [(0, 1), (1, 3), (3, 1), (1, 2)]


@pytest.mark.parametrize(
    "walk,expected",
    [([0, 1, 2, 0, 3], True), ([], True), ([4], True), ([1, 3], False), ([0, 1, 4], False)],
)
def test_is_walk(square_with_tail, walk, expected):
    """Walks follow the edges of the graph"""
    assert is_walk(square_with_tail, walk) == expected


@pytest.mark.parametrize(
    "cycle,expected",
    [
        ([0, 1, 2, 0], True),
        ([0, 1, 2, 3, 0], True),
        ([0, 1, 2, 3], False),
        ([0, 1, 0], False),
        ([0, 1, 2, 0, 3, 2, 0], False),
        ([1, 3, 2, 1], False),
    ],
)
def test_is_simple_cycle(square_with_tail, cycle, expected):
    """Simple cycles are closed, have three edges or more and repeat no vertex"""
    assert is_simple_cycle(square_with_tail, cycle) == expected


def test_close_cycle():
    """The first vertex is appended once"""
    assert close_cycle([]) == []
    assert close_cycle([2, 3, 0]) == [2, 3, 0, 2]
    assert close_cycle([2, 3, 0, 2]) == [2, 3, 0, 2]


def test_walk_attribute(square_with_tail):
    """Edge attributes are read along the walk"""
    assert walk_attribute(square_with_tail, [4, 3, 0, 2], "edge") == [34, 30, 2]
    assert not walk_attribute(square_with_tail, [4], "edge")
    with pytest.raises(KeyError):
        walk_attribute(square_with_tail, [1, 3], "edge")


def test_cycles_of_the_dual_graph(octahedron):
    """Every cycle found in the dual of a polyhedron is simple and carries primal edges"""
    dual = incidence_and_weights(build_topology(octahedron)).dual_graph()
    for cycle in nx.cycle_basis(dual):
        closed = close_cycle(cycle)
        assert is_simple_cycle(dual, closed)
        edges = walk_attribute(dual, closed, "edge")
        assert len(set(edges)) == len(cycle)
        assert all(0 <= edge < 12 for edge in edges)


def test_adjacency_list_from_edge_list():
    """Every edge appears in the lists of both endpoints"""
    adj = adjacency_list_from_edge_list([(0, 1), (1, 2), (0, 2), (2, 5)])
    assert adj[2] == [1, 0, 5]
    assert adj[5] == [2]
    assert sorted(adj) == [0, 1, 2, 5]


def test_bounding_box_diagonal(octahedron):
    """The box of the octahedron is a cube of side two"""
    assert bounding_box_diagonal(octahedron.positions) == pytest.approx(2.0 * 3**0.5)
    assert bounding_box_diagonal(octahedron.positions[:0]) == 0.0
