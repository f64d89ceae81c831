"""Tests for circumcircles and intersection angles"""

import math

import numpy as np
import pytest
from qcalib import (
    DegenerateTriangleException,
    EdgeRecord,
    GraphStructureException,
    TriangleMesh,
    VertexAtCenterException,
    angle_vector,
    beta,
    build_topology,
    circumcircle,
    generate_random_inscribed,
    sphere_inversion,
)


def test_circumcircle_of_right_triangle():
    """The hypotenuse of a right triangle is a diameter of its circumcircle"""
    circle = circumcircle([0.0, 0.0, 0.0], [2.0, 0.0, 0.0], [0.0, 2.0, 0.0])
    assert np.allclose(circle.center, [1.0, 1.0, 0.0])
    assert circle.radius == pytest.approx(math.sqrt(2.0))
    assert np.allclose(circle.normal, [0.0, 0.0, 1.0])
    assert np.allclose(circle.tangent_at([0.0, 0.0, 0.0]), [1.0, -1.0, 0.0])


def test_circumcircle_is_equidistant(rng):
    """Corners of a random triangle are at equal distance from the center"""
    corners = rng.standard_normal((3, 3))
    circle = circumcircle(*corners)
    distances = np.linalg.norm(corners - circle.center, axis=1)
    assert np.allclose(distances, circle.radius)
    assert abs(np.dot(circle.center - corners[0], circle.normal)) < 1e-12


def test_circumcircle_degenerate():
    """Collinear corners have no circumcircle"""
    with pytest.raises(DegenerateTriangleException):
        circumcircle([0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [2.0, 0.0, 0.0])


def test_regular_solid_angles(regular_solid):
    """All angles of the regular solids are equal"""
    angles = angle_vector(regular_solid.mesh, regular_solid.topology)
    assert len(angles) == regular_solid.num_edges
    assert np.allclose(angles.values, regular_solid.angle, atol=1e-9)
    sums = angles.vertex_sums(regular_solid.num_vertices)
    assert np.allclose(sums, 2.0 * math.pi, atol=1e-9)


def test_beta_of_kite():
    """Circles of radius 1 and 5/4 whose centers are 3/4 apart"""
    positions = np.array(
        [
            [0.0, 0.0, 0.0],
            [2.0, 0.0, 0.0],
            [1.0, 1.0, 0.0],
            [1.0, -0.5, 0.0],
        ]
    )
    edge = EdgeRecord(i=0, j=1, k=2, l=3, f1=0, f2=1)
    assert beta(edge, positions) == pytest.approx(math.acos(0.8), abs=1e-12)
    # a rigid motion does not change the angle
    rotation = np.array([[0.0, 0.0, 1.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])
    moved = positions @ rotation.T + np.array([0.3, -2.0, 5.0])
    assert beta(edge, moved) == pytest.approx(math.acos(0.8), abs=1e-12)


def _corner_angle(apex, first, second) -> float:
    u = np.asarray(first) - np.asarray(apex)
    v = np.asarray(second) - np.asarray(apex)
    return math.acos(np.dot(u, v) / (np.linalg.norm(u) * np.linalg.norm(v)))


def test_beta_of_symmetric_kite():
    """In a planar convex quadrilateral beta is pi minus the angles opposite the edge"""
    positions = np.array(
        [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.5, 1.0, 0.0], [0.5, -1.0, 0.0]]
    )
    first, second, top, bottom = positions
    alpha_k = _corner_angle(top, first, second)
    alpha_l = _corner_angle(bottom, first, second)
    assert alpha_k == pytest.approx(math.acos(0.6))
    edge = EdgeRecord(i=0, j=1, k=2, l=3, f1=0, f2=1)
    value = beta(edge, positions)
    assert value == pytest.approx(math.pi - alpha_k - alpha_l, abs=1e-12)
    assert value == pytest.approx(1.2870, abs=1e-4)


def test_beta_zero_for_cocircular():
    """Four points on a circle give coinciding circles"""
    positions = np.array(
        [[1.0, 0.0, 0.0], [-1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, -1.0, 0.0]]
    )
    edge = EdgeRecord(i=0, j=1, k=2, l=3, f1=0, f2=1)
    assert beta(edge, positions) == pytest.approx(0.0, abs=1e-12)


def test_beta_of_boundary_edge():
    """A boundary edge has no angle"""
    edge = EdgeRecord(i=0, j=1, k=2, f1=0)
    with pytest.raises(GraphStructureException):
        beta(edge, np.eye(3))


def test_beta_matches_vectorized(icosahedron, rng):
    """The single edge evaluation agrees with the angle vector"""
    mesh = icosahedron.with_positions(
        icosahedron.positions + 0.05 * rng.standard_normal(icosahedron.positions.shape)
    )
    topology = build_topology(mesh)
    angles = angle_vector(mesh, topology)
    for value, index in zip(angles.values, angles.edge_indices):
        assert beta(topology.edges[index], mesh.positions) == pytest.approx(value, abs=1e-12)


def test_angle_vector_dataframe(octahedron):
    """One row per interior edge with beta / pi"""
    angles = angle_vector(octahedron, build_topology(octahedron))
    frame = angles.to_dataframe()
    assert list(frame.columns) == ["edge", "i", "j", "k", "l", "beta", "beta_over_pi"]
    assert len(frame) == 12
    assert np.allclose(frame["beta_over_pi"], 0.5)
    assert np.allclose(angles.sorted_over_pi(), 0.5)


def test_degenerate_interior_face():
    """A collinear face next to an interior edge is reported with the edge"""
    mesh = TriangleMesh(
        positions=[[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [2.0, 0.0, 0.0], [0.5, -1.0, 0.0]],
        faces=[(0, 1, 2), (1, 0, 3)],
    )
    topology = build_topology(mesh)
    with pytest.raises(DegenerateTriangleException) as error:
        angle_vector(mesh, topology)
    assert error.value.faces == [0]
    assert error.value.edges == [0]


def test_sphere_inversion_is_involution(rng):
    """Inverting twice gives back the points"""
    points = rng.standard_normal((20, 3))
    center = np.array([3.0, 0.5, -1.0])
    once = sphere_inversion(points, center, 2.0)
    twice = sphere_inversion(once, center, 2.0)
    assert np.allclose(twice, points)


def test_sphere_inversion_at_center():
    """A vertex at the center of the inversion has no image"""
    with pytest.raises(VertexAtCenterException):
        sphere_inversion(np.zeros((2, 3)), [0.0, 0.0, 0.0], 1.0)


@pytest.mark.parametrize("seed", range(10))
def test_angles_are_mobius_invariant(seed):
    """Angles are unchanged by sphere inversions whose center is off the mesh"""
    mesh = generate_random_inscribed(20, semiaxes=(1.0, 1.5, 2.0), seed=seed)
    topology = build_topology(mesh)
    angles = angle_vector(mesh, topology).values
    generator = np.random.default_rng(seed=100 + seed)
    for _ in range(10):
        direction = generator.standard_normal(3)
        center = 4.0 * direction / np.linalg.norm(direction)
        radius = generator.uniform(0.5, 3.0)
        inverted = mesh.with_positions(sphere_inversion(mesh.positions, center, radius))
        assert np.allclose(angle_vector(inverted, topology).values, angles, atol=1e-8)
