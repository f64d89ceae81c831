"""Circumcircles of triangles and the intersection angles of neighbouring circumcircles

The angle beta of an interior edge (i, j) is measured at the shared vertex v_i
between the tangents of the circumcircles of the faces (i, j, k) and (j, i, l).
Each tangent follows the orientation of its face. Coinciding circles have beta = 0.
"""

from pathlib import Path
from typing import Tuple

import numpy as np
import numpy.typing as npt
import pandas as pd
import pydantic

from .exception import (
    DegenerateTriangleException,
    GraphStructureException,
    VertexAtCenterException,
)
from .mesh import (
    DEGENERACY_THRESHOLD,
    EdgeRecord,
    MeshTopology,
    TriangleMesh,
    triangle_quality,
)

# pylint: disable=too-few-public-methods


class Circumcircle(pydantic.BaseModel):
    """Circle through the three corners of a triangle, oriented by the triangle"""

    center: npt.NDArray[np.float64]
    radius: float
    normal: npt.NDArray[np.float64]

    model_config = {"arbitrary_types_allowed": True, "frozen": True}

    def tangent_at(self, point: npt.ArrayLike) -> npt.NDArray[np.float64]:
        """Tangent of the oriented circle at a point on the circle"""
        return np.cross(self.normal, np.asarray(point, dtype=np.float64) - self.center)


def _squared_norms(vectors: np.ndarray) -> np.ndarray:
    return np.einsum("...i,...i->...", vectors, vectors)


def circumcircle(p: npt.ArrayLike, q: npt.ArrayLike, r: npt.ArrayLike) -> Circumcircle:
    """Circumcircle of the triangle (p, q, r)

    Args:
        p: First corner
        q: Second corner
        r: Third corner

    Returns:
        Circle with normal (q - p) x (r - p), normalized

    Raises:
        DegenerateTriangleException: If the triangle area is below
            the degeneracy threshold times its longest edge squared
    """
    corners = np.array([p, q, r], dtype=np.float64)
    quality = triangle_quality(corners, np.array([[0, 1, 2]]))[0]
    if quality < DEGENERACY_THRESHOLD:
        raise DegenerateTriangleException(f"Triangle {corners.tolist()} is degenerate")
    u = corners[1] - corners[0]
    w = corners[2] - corners[0]
    n = np.cross(u, w)
    offset = np.cross(_squared_norms(u) * w - _squared_norms(w) * u, n) / (
        2.0 * _squared_norms(n)
    )
    return Circumcircle(
        center=corners[0] + offset,
        radius=float(np.linalg.norm(offset)),
        normal=n / np.linalg.norm(n),
    )


def _angle_between(t1: np.ndarray, t2: np.ndarray) -> np.ndarray:
    return np.arctan2(
        np.linalg.norm(np.cross(t1, t2), axis=-1), np.einsum("...i,...i->...", t1, t2)
    )


def beta(edge: EdgeRecord, positions: npt.ArrayLike) -> float:
    """Intersection angle of the circumcircles of the two faces of an interior edge

    Args:
        edge: Interior edge with faces (i, j, k) and (j, i, l)
        positions: Vertex positions

    Returns:
        Angle in [0, pi] between the circle tangents at v_i

    Raises:
        GraphStructureException: If the edge is on the boundary
        DegenerateTriangleException: If either face is degenerate
    """
    if edge.boundary:
        raise GraphStructureException(f"Boundary edge {edge.endpoints} has no angle")
    points = np.asarray(positions, dtype=np.float64)
    first = circumcircle(points[edge.i], points[edge.j], points[edge.k])
    second = circumcircle(points[edge.j], points[edge.i], points[edge.l])
    return float(
        _angle_between(first.tangent_at(points[edge.i]), second.tangent_at(points[edge.i]))
    )


def edge_tangents(
    positions: npt.NDArray[np.float64], quadruples: npt.NDArray[np.int64]
) -> Tuple[np.ndarray, np.ndarray]:
    """Unnormalized circle tangents at v_i for rows (i, j, k, l)

    For a face (i, b, c) with u = v_b - v_i and w = v_c - v_i the tangent
    of its circumcircle at v_i is a positive multiple of |w|^2 u - |u|^2 w.

    Returns:
        Tangents of the circles of (i, j, k) and of (j, i, l), one row per edge
    """
    i, j, k, l = quadruples.T
    u1 = positions[j] - positions[i]
    w1 = positions[k] - positions[i]
    u2 = positions[l] - positions[i]
    w2 = u1
    t1 = _squared_norms(w1)[:, np.newaxis] * u1 - _squared_norms(u1)[:, np.newaxis] * w1
    t2 = _squared_norms(w2)[:, np.newaxis] * u2 - _squared_norms(u2)[:, np.newaxis] * w2
    return t1, t2


class AngleVector(pydantic.BaseModel):
    """Intersection angle of every interior edge, in radians"""

    values: npt.NDArray[np.float64]
    quadruples: npt.NDArray[np.int64]
    edge_indices: npt.NDArray[np.int64]

    model_config = {"arbitrary_types_allowed": True, "frozen": True}

    def __len__(self) -> int:
        return len(self.values)

    def min(self) -> float:
        """Smallest angle, or nan without interior edges"""
        return float(self.values.min()) if len(self) else float("nan")

    def max(self) -> float:
        """Largest angle, or nan without interior edges"""
        return float(self.values.max()) if len(self) else float("nan")

    def vertex_sums(self, num_vertices: int) -> npt.NDArray[np.float64]:
        """Sum of the angles of the interior edges incident with each vertex"""
        endpoints = self.quadruples[:, :2].reshape(-1)
        return np.bincount(
            endpoints, weights=np.repeat(self.values, 2), minlength=num_vertices
        )

    def sorted_over_pi(self) -> npt.NDArray[np.float64]:
        """Angles divided by pi in ascending order"""
        return np.sort(self.values) / np.pi

    def to_dataframe(self) -> pd.DataFrame:
        """One row per interior edge with its vertices, beta and beta / pi"""
        frame = pd.DataFrame(self.quadruples, columns=["i", "j", "k", "l"])
        frame.insert(0, "edge", self.edge_indices)
        frame["beta"] = self.values
        frame["beta_over_pi"] = self.values / np.pi
        return frame

    def to_csv(self, path: Path) -> None:
        """Write the data frame of angles as CSV"""
        self.to_dataframe().to_csv(path, index=False)


def check_interior_faces(mesh: TriangleMesh, topology: MeshTopology) -> None:
    """Raise if a face incident with an interior edge is degenerate

    Raises:
        DegenerateTriangleException: Listing the degenerate faces and their interior edges
    """
    quality = triangle_quality(mesh.positions, mesh.faces)
    bad_faces = np.flatnonzero(quality < DEGENERACY_THRESHOLD)
    if len(bad_faces) == 0:
        return
    pairs = topology.interior_face_pairs
    bad_rows = np.flatnonzero(np.isin(pairs, bad_faces).any(axis=1))
    if len(bad_rows) == 0:
        return
    bad_edges = topology.interior_edges[bad_rows].tolist()
    message = f"{len(bad_faces)} degenerate faces, first at face {bad_faces[0]}"
    message += f", affecting edges {bad_edges[:10]}"
    raise DegenerateTriangleException(message, faces=bad_faces.tolist(), edges=bad_edges)


def angle_vector(mesh: TriangleMesh, topology: MeshTopology) -> AngleVector:
    """Intersection angles of all interior edges

    Args:
        mesh: Triangle mesh
        topology: Topology of the mesh

    Returns:
        One angle per interior edge, in the order of `topology.interior_edges`

    Raises:
        DegenerateTriangleException: If a face of an interior edge is degenerate
    """
    check_interior_faces(mesh, topology)
    quadruples = topology.interior_quadruples
    t1, t2 = edge_tangents(mesh.positions, quadruples)
    values = _angle_between(t1, t2)
    values.setflags(write=False)
    return AngleVector(
        values=values, quadruples=quadruples, edge_indices=topology.interior_edges
    )


def sphere_inversion(
    positions: npt.ArrayLike, center: npt.ArrayLike, radius: float
) -> npt.NDArray[np.float64]:
    """Invert points in a sphere: p -> center + radius^2 (p - center) / |p - center|^2

    Args:
        positions: Points to invert
        center: Center of the sphere
        radius: Radius of the sphere

    Returns:
        Inverted points

    Raises:
        VertexAtCenterException: If a point coincides with the center
    """
    points = np.asarray(positions, dtype=np.float64)
    offsets = points - np.asarray(center, dtype=np.float64)
    squared = _squared_norms(offsets)
    if np.any(squared <= (1e-12 * radius) ** 2):
        index = int(np.argmin(squared))
        raise VertexAtCenterException(f"Vertex {index} is at the center of inversion")
    return np.asarray(center, dtype=np.float64) + radius**2 * offsets / squared[..., np.newaxis]
