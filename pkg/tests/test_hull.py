"""Tests for the convex hull"""

import numpy as np
import pytest
from qcalib import (
    DegeneratePointSetException,
    build_topology,
    convex_hull,
    is_convex_position,
)


def _signed_volume(mesh) -> float:
    corners = mesh.positions[mesh.faces]
    return float(
        np.einsum("ij,ij->i", corners[:, 0], np.cross(corners[:, 1], corners[:, 2])).sum() / 6.0
    )


@pytest.mark.parametrize("count", [4, 10, 40, 120])
def test_hull_of_sphere_points(rng, count):
    """Every point on a sphere is a hull vertex and the hull is a closed convex polyhedron"""
    points = rng.standard_normal((count, 3))
    points /= np.linalg.norm(points, axis=1)[:, np.newaxis]
    mesh = convex_hull(points)
    topology = build_topology(mesh)
    assert mesh.num_vertices == count
    assert mesh.num_faces == 2 * count - 4
    assert topology.is_closed
    assert topology.euler_characteristic == 2
    assert np.array_equal(mesh.positions, points)
    assert _signed_volume(mesh) > 0.0
    assert is_convex_position(mesh)


def test_interior_points_are_skipped():
    """Interior points are dropped and hull vertices keep their input order"""
    points = np.array(
        [
            [0.1, 0.2, -0.1],
            [1.0, 0.0, 0.0],
            [-1.0, 0.0, 0.0],
            [0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0],
            [0.0, -1.0, 0.0],
            [0.0, 0.0, 1.0],
            [0.0, 0.0, -1.0],
        ]
    )
    mesh = convex_hull(points)
    assert mesh.num_vertices == 6
    assert mesh.num_faces == 8
    assert np.array_equal(mesh.positions, points[[1, 2, 4, 5, 6, 7]])
    assert _signed_volume(mesh) == pytest.approx(4.0 / 3.0)


def test_hull_volume_of_cube_corners_with_jitter(rng):
    """Slightly jittered cube corners give a hull of volume close to 8"""
    corners = np.array(
        [[x, y, z] for x in (-1.0, 1.0) for y in (-1.0, 1.0) for z in (-1.0, 1.0)]
    )
    points = corners + 1e-3 * rng.standard_normal(corners.shape)
    mesh = convex_hull(points)
    assert mesh.num_vertices == 8
    assert _signed_volume(mesh) == pytest.approx(8.0, rel=1e-2)


@pytest.mark.parametrize(
    "points",
    [
        np.zeros((3, 3)),
        np.zeros((5, 3)),
        np.array([[0.0, 0.0, 0.0], [1.0, 1.0, 1.0], [2.0, 2.0, 2.0], [3.0, 3.0, 3.0]]),
        np.array([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [1.0, 1.0, 0.0]]),
    ],
)
def test_degenerate_point_sets(points):
    """Too few, coincident, collinear or coplanar points have no hull"""
    with pytest.raises(DegeneratePointSetException):
        convex_hull(points)


@pytest.mark.parametrize("seed", range(100))
def test_hull_is_convex_for_random_clouds(seed):
    """Hulls of random clouds with interior points pass the convexity check"""
    rng = np.random.default_rng(seed)
    points = rng.standard_normal((6 + seed % 40, 3))
    mesh = convex_hull(points)
    topology = build_topology(mesh)
    assert topology.is_closed
    assert topology.euler_characteristic == 2
    assert _signed_volume(mesh) > 0.0
    assert is_convex_position(mesh)
