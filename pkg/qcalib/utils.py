"""Small helpers shared by the mesh and graph modules"""

import numpy as np
import numpy.typing as npt

from .types import AdjList, EdgeList


def adjacency_list_from_edge_list(edge_list: EdgeList) -> AdjList:
    """Return a symmetric adjacency list from a list of undirected edges

    Args:
        edge_list: List of tuples representing edges

    Returns:
        Adjacency list where v is in adj[u] if and only if u is in adj[v]
    """
    adj_list: AdjList = {}
    for u, v in edge_list:
        adj_list.setdefault(u, []).append(v)
        adj_list.setdefault(v, []).append(u)
    return adj_list


def bounding_box_diagonal(positions: npt.NDArray[np.float64]) -> float:
    """Length of the diagonal of the axis aligned bounding box of some points"""
    if len(positions) == 0:
        return 0.0
    return float(np.linalg.norm(positions.max(axis=0) - positions.min(axis=0)))
