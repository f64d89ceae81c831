"""Incremental convex hull of points in 3-space"""

import logging
from typing import Dict, List, Set, Tuple

import numpy as np
import numpy.typing as npt

from .exception import DegeneratePointSetException
from .mesh import TriangleMesh
from .types import Edge, Face
from .utils import bounding_box_diagonal

logger = logging.getLogger(__name__)

# orientation determinants within this fraction of the cubed point scale count as zero
ORIENTATION_TOLERANCE = 1e-12


def _initial_tetrahedron(points: npt.NDArray[np.float64], scale: float) -> List[int]:
    first = int(np.lexsort(points.T[::-1])[0])
    distances = np.linalg.norm(points - points[first], axis=1)
    second = int(np.argmax(distances))
    if distances[second] <= ORIENTATION_TOLERANCE * scale:
        raise DegeneratePointSetException("All points coincide")

    direction = points[second] - points[first]
    areas = np.linalg.norm(np.cross(direction, points - points[first]), axis=1)
    third = int(np.argmax(areas))
    if areas[third] <= ORIENTATION_TOLERANCE * scale**2:
        raise DegeneratePointSetException("All points are collinear")

    normal = np.cross(direction, points[third] - points[first])
    volumes = (points - points[first]) @ normal
    fourth = int(np.argmax(np.abs(volumes)))
    if abs(volumes[fourth]) <= ORIENTATION_TOLERANCE * scale**3:
        raise DegeneratePointSetException("All points are coplanar")

    # the fourth point must lie on the inner side of the first face
    if volumes[fourth] > 0:
        second, third = third, second
    return [first, second, third, fourth]


def convex_hull(points: npt.ArrayLike) -> TriangleMesh:
    """Triangulated boundary of the convex hull of a point set

    Points are inserted one at a time. A face is visible from a new point
    when the point lies strictly outside its plane, up to a tolerance relative
    to the size of the point set. Points inside or on the current hull are skipped.

    Args:
        points: At least four points that are not all coplanar

    Returns:
        Outward oriented mesh of the hull. Hull vertices keep the relative
        order of the input points.

    Raises:
        DegeneratePointSetException: If there are fewer than four points
            or the points are coplanar
    """
    points = np.asarray(points, dtype=np.float64).reshape(-1, 3)
    if len(points) < 4:
        raise DegeneratePointSetException(
            f"A hull needs at least four points, got {len(points)}"
        )
    scale = bounding_box_diagonal(points)
    tolerance = ORIENTATION_TOLERANCE * scale**3

    a, b, c, d = _initial_tetrahedron(points, scale)
    faces: List[Face] = [(a, b, c), (a, d, b), (b, d, c), (a, c, d)]
    alive: List[bool] = [True] * 4

    def face_planes(new_faces: List[Face]) -> Tuple[np.ndarray, np.ndarray]:
        corners = points[np.array(new_faces)]
        normals = np.cross(corners[:, 1] - corners[:, 0], corners[:, 2] - corners[:, 0])
        offsets = np.einsum("ij,ij->i", normals, corners[:, 0])
        return normals, offsets

    normals, offsets = face_planes(faces)
    skipped = 0
    for p in range(len(points)):
        if p in (a, b, c, d):
            continue
        heights = normals @ points[p] - offsets
        visible = np.flatnonzero((heights > tolerance) & np.array(alive))
        if len(visible) == 0:
            skipped += 1
            continue

        visible_edges: Set[Edge] = set()
        for f in visible:
            u, v, w = faces[f]
            visible_edges.update(((u, v), (v, w), (w, u)))
            alive[f] = False
        horizon = [(u, v) for u, v in visible_edges if (v, u) not in visible_edges]
        # sort for a deterministic face order
        new_faces = [(u, v, p) for u, v in sorted(horizon)]
        new_normals, new_offsets = face_planes(new_faces)
        faces.extend(new_faces)
        alive.extend([True] * len(new_faces))
        normals = np.concatenate([normals, new_normals])
        offsets = np.concatenate([offsets, new_offsets])

    hull_faces = [face for face, keep in zip(faces, alive) if keep]
    used = sorted(set(np.array(hull_faces).reshape(-1).tolist()))
    reindex: Dict[int, int] = {old: new for new, old in enumerate(used)}
    logger.debug(
        "Convex hull of %s points has %s vertices and %s faces, %s points skipped",
        len(points),
        len(used),
        len(hull_faces),
        skipped,
    )
    return TriangleMesh(
        positions=points[used],
        faces=[tuple(reindex[v] for v in face) for face in hull_faces],
    )
