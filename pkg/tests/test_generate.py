"""Tests for mesh generators"""

import numpy as np
import pytest
from qcalib import (
    build_topology,
    generate_disk,
    generate_random_inscribed,
    generate_random_triangulation,
    generate_stacked,
    generate_torus,
    perturb_positions,
    torus_faces,
    torus_vertex,
)


def test_regular_solids_are_inscribed(regular_solid):
    """Vertices of the regular solids lie on the unit sphere"""
    radii = np.linalg.norm(regular_solid.mesh.positions, axis=1)
    assert np.allclose(radii, 1.0, atol=1e-12)


def test_torus_positions():
    """Vertex a * n + b lies at major angle 2 pi a / m and minor angle 2 pi b / n"""
    mesh = generate_torus(3.0, 1.0, 8, 6, staggered=False)
    assert mesh.num_vertices == 48
    vertex = torus_vertex(2, 3, 6)
    u = 2.0 * np.pi * 2 / 8
    v = 2.0 * np.pi * 3 / 6
    expected = [(3.0 + np.cos(v)) * np.cos(u), (3.0 + np.cos(v)) * np.sin(u), np.sin(v)]
    assert np.allclose(mesh.positions[vertex], expected)
    assert np.array_equal(mesh.faces, np.array(torus_faces(8, 6, staggered=False)))


def test_staggered_torus_positions():
    """Parallels of odd b are turned by half a major step"""
    mesh = generate_torus(3.0, 1.0, 8, 6)
    for b, u in [(2, 2.0 * np.pi * 2 / 8), (3, 2.0 * np.pi * 2.5 / 8)]:
        v = 2.0 * np.pi * b / 6
        expected = [(3.0 + np.cos(v)) * np.cos(u), (3.0 + np.cos(v)) * np.sin(u), np.sin(v)]
        assert np.allclose(mesh.positions[torus_vertex(2, b, 6)], expected)
    assert np.array_equal(mesh.faces, np.array(torus_faces(8, 6)))


def test_staggered_faces_alternate():
    """Quads of even b are split along one diagonal and quads of odd b along the other"""
    faces = torus_faces(4, 4)
    p, q, s, t = (torus_vertex(a, b, 4) for a, b in [(0, 0), (1, 0), (1, 1), (0, 1)])
    assert faces[0:2] == [(p, q, t), (q, s, t)]
    p, q, s, t = (torus_vertex(a, b, 4) for a, b in [(0, 1), (1, 1), (1, 2), (0, 2)])
    assert faces[2:4] == [(p, q, s), (p, s, t)]
    assert torus_faces(4, 4, staggered=False)[2:4] == [(p, q, t), (q, s, t)]


@pytest.mark.parametrize("staggered", [True, False])
def test_torus_is_closed(staggered):
    """Both splittings give a closed surface of genus one with 3 m n edges"""
    mesh = generate_torus(2.0, 1.0, 10, 8, staggered=staggered)
    topology = build_topology(mesh)
    assert topology.num_edges == 3 * 10 * 8
    assert not topology.boundary_vertices
    assert mesh.num_vertices - topology.num_edges + mesh.num_faces == 0


def test_odd_parallels_need_aligned_grid():
    """A staggered grid needs an even number of minor steps"""
    with pytest.raises(ValueError):
        generate_torus(2.0, 1.0, 8, 7)
    assert generate_torus(2.0, 1.0, 8, 7, staggered=False).num_vertices == 56


@pytest.mark.parametrize(
    "R,r,m,n",
    [(1.0, 2.0, 8, 8), (2.0, 0.0, 8, 8), (2.0, 1.0, 2, 8), (2.0, 1.0, 8, 2)],
)
def test_torus_invalid(R, r, m, n):
    """Radii must satisfy R > r > 0 and grids need three steps each way"""
    with pytest.raises(ValueError):
        generate_torus(R, r, m, n)


def test_random_inscribed_is_deterministic():
    """The same seed gives the same hull"""
    first = generate_random_inscribed(50, semiaxes=(1.0, 1.0, 2.0), seed=7)
    second = generate_random_inscribed(50, semiaxes=(1.0, 1.0, 2.0), seed=7)
    third = generate_random_inscribed(50, semiaxes=(1.0, 1.0, 2.0), seed=8)
    assert np.array_equal(first.positions, second.positions)
    assert np.array_equal(first.faces, second.faces)
    assert not np.array_equal(first.positions, third.positions)


def test_random_inscribed_on_ellipsoid():
    """Points lie on the ellipsoid with the given semiaxes"""
    axes = np.array([1.0, 1.0, 2.0])
    mesh = generate_random_inscribed(50, semiaxes=axes, seed=7)
    assert mesh.num_vertices == 50
    assert np.allclose(np.linalg.norm(mesh.positions / axes, axis=1), 1.0)


@pytest.mark.parametrize("count,semiaxes", [(3, (1.0, 1.0, 1.0)), (10, (1.0, 0.0, 1.0))])
def test_random_inscribed_invalid(count, semiaxes):
    """Too few points or a flat ellipsoid are rejected"""
    with pytest.raises(ValueError):
        generate_random_inscribed(count, semiaxes=semiaxes)


def test_disk_is_flat_without_bump():
    """The disk lies in the xy-plane with its boundary on the unit circle"""
    mesh = generate_disk(3, 8)
    topology = build_topology(mesh)
    assert mesh.num_vertices == 25
    assert np.allclose(mesh.positions[:, 2], 0.0)
    boundary = sorted(topology.boundary_vertices)
    assert np.allclose(np.linalg.norm(mesh.positions[boundary], axis=1), 1.0)
    normals = np.cross(
        mesh.positions[mesh.faces[:, 1]] - mesh.positions[mesh.faces[:, 0]],
        mesh.positions[mesh.faces[:, 2]] - mesh.positions[mesh.faces[:, 0]],
    )
    assert np.all(normals[:, 2] > 0.0)


@pytest.mark.parametrize("count", [4, 5, 9, 16])
def test_stacked_polyhedron(count):
    """Stacked polyhedra are closed spheres with 2 count - 4 faces"""
    mesh = generate_stacked(count, seed=count)
    topology = build_topology(mesh)
    assert mesh.num_vertices == count
    assert mesh.num_faces == 2 * count - 4
    assert topology.euler_characteristic == 2


@pytest.mark.parametrize("seed", range(5))
def test_random_triangulation(seed):
    """Random flips keep a closed sphere with minimum valence three"""
    mesh = generate_random_triangulation(12, 30, seed=seed)
    topology = build_topology(mesh)
    assert topology.is_closed
    assert topology.euler_characteristic == 2
    assert topology.valences.min() >= 3
    assert np.allclose(np.linalg.norm(mesh.positions, axis=1), 1.0)


def test_perturb_positions(icosahedron):
    """Perturbation keeps the faces and moves vertices by a bounded amount"""
    moved = perturb_positions(icosahedron, 1e-3, seed=3)
    assert np.array_equal(moved.faces, icosahedron.faces)
    offsets = np.linalg.norm(moved.positions - icosahedron.positions, axis=1)
    assert 0.0 < offsets.max() < 0.1
    again = perturb_positions(icosahedron, 1e-3, seed=3)
    assert np.array_equal(moved.positions, again.positions)
