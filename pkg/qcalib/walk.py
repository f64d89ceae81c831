"""Walks and cycles in a graph, used to certify cycle conditions on the dual graph"""

from typing import List

import networkx as nx

from .types import EdgeList, VertexList


def edge_list_from_walk(walk: VertexList) -> EdgeList:
    """Get ordered list of edges from an ordered list of vertices

    Args:
        walk: Ordered list of vertices that represent a walk in the graph

    Returns:
        List of edges in the same order as the walk
    """
    return list(zip(walk[:-1], walk[1:]))


def is_walk(G: nx.Graph, walk: VertexList) -> bool:
    """Is the walk a sequence of adjacent vertices in the graph?

    Args:
        G: input graph
        walk: Ordered sequence of vertices

    Returns:
        True if all vertices are adjacent in the graph
    """
    return all(G.has_edge(u, v) for u, v in edge_list_from_walk(walk))


def is_simple_cycle(G: nx.Graph, cycle: VertexList) -> bool:
    """Is the cycle simple in the graph?

    Args:
        G: input graph
        cycle: Ordered sequence of vertices, first and last vertex equal

    Returns:
        True if the cycle is closed, visits no vertex twice and has at least three edges
    """
    cycle_length = len(cycle)
    if cycle_length < 4:
        return False
    return (
        is_walk(G, cycle)
        and cycle_length == len(set(cycle)) + 1
        and cycle[0] == cycle[-1]
    )


def close_cycle(cycle: VertexList) -> VertexList:
    """Append the first vertex of a cycle, as returned by networkx, to its end"""
    if not cycle or cycle[0] == cycle[-1]:
        return list(cycle)
    return list(cycle) + [cycle[0]]


def walk_attribute(G: nx.Graph, walk: VertexList, attribute: str) -> List:
    """Values of an edge attribute along a walk"""
    return [G.edges[u, v][attribute] for u, v in edge_list_from_walk(walk)]
