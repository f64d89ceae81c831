"""Fixtures for testing"""

import math
from pathlib import Path
from typing import Callable

import numpy as np
import pytest
from qcalib import (
    GraphData,
    MeshTopology,
    TriangleMesh,
    build_topology,
    generate_disk,
    generate_icosahedron,
    generate_octahedron,
    generate_random_inscribed,
    generate_tetrahedron,
    generate_torus,
    incidence_and_weights,
    perturb_positions,
    save_obj,
)

# pylint: disable=redefined-outer-name

# name, generator, number of vertices, edges, faces, angle, lambda, c, c_w
REGULAR_SOLIDS = {
    "tetra": (
        generate_tetrahedron,
        4,
        6,
        4,
        2.0 * math.pi / 3.0,
        math.pi / 3.0,
        8.0 * math.pi**2 / 3.0,
        16.0 * math.pi**2,
    ),
    "octa": (
        generate_octahedron,
        6,
        12,
        8,
        math.pi / 2.0,
        math.pi / 4.0,
        3.0 * math.pi**2,
        24.0 * math.pi**2,
    ),
    "icosa": (
        generate_icosahedron,
        12,
        30,
        20,
        2.0 * math.pi / 5.0,
        math.pi / 5.0,
        24.0 * math.pi**2 / 5.0,
        48.0 * math.pi**2,
    ),
}


class RegularSolid:
    """A regular solid together with its exact values"""

    def __init__(self, name: str):
        (
            generator,
            self.num_vertices,
            self.num_edges,
            self.num_faces,
            self.angle,
            self.lambda_value,
            self.c,
            self.c_w,
        ) = REGULAR_SOLIDS[name]
        self.name = name
        self.mesh: TriangleMesh = generator()
        self.topology: MeshTopology = build_topology(self.mesh)
        self.graph: GraphData = incidence_and_weights(self.topology)


@pytest.fixture(scope="function", params=list(REGULAR_SOLIDS))
def regular_solid(request) -> RegularSolid:
    """Loop through the tetrahedron, octahedron and icosahedron"""
    return RegularSolid(request.param)


@pytest.fixture(scope="function")
def tetrahedron() -> TriangleMesh:
    """Regular tetrahedron inscribed in the unit sphere"""
    return generate_tetrahedron()


@pytest.fixture(scope="function")
def octahedron() -> TriangleMesh:
    """Regular octahedron inscribed in the unit sphere"""
    return generate_octahedron()


@pytest.fixture(scope="function")
def icosahedron() -> TriangleMesh:
    """Regular icosahedron inscribed in the unit sphere"""
    return generate_icosahedron()


@pytest.fixture(scope="function")
def torus() -> TriangleMesh:
    """Torus of revolution with radii 2 and 1 on a 16 by 16 grid"""
    return generate_torus(2.0, 1.0, 16, 16)


@pytest.fixture(scope="function")
def disk() -> TriangleMesh:
    """Curved disk with boundary"""
    return generate_disk(4, 12, bump=0.3)


@pytest.fixture(scope="function")
def ellipsoid_hull() -> TriangleMesh:
    """Convex hull of 50 random points on an ellipsoid"""
    return generate_random_inscribed(50, semiaxes=(1.0, 1.0, 2.0), seed=7)


@pytest.fixture(scope="function")
def perturbed_mesh() -> Callable[[int], TriangleMesh]:
    """Factory of randomly perturbed octahedra and icosahedra"""

    def factory(seed: int) -> TriangleMesh:
        base = generate_icosahedron() if seed % 2 == 0 else generate_octahedron()
        return perturb_positions(base, 0.03, seed=seed)

    return factory


@pytest.fixture(scope="function")
def obj_path(tmp_path: Path) -> Callable[[TriangleMesh, str], Path]:
    """Factory that writes a mesh to an OBJ file in a temporary directory"""

    def factory(mesh: TriangleMesh, name: str = "mesh.obj") -> Path:
        path = tmp_path / name
        save_obj(mesh, path)
        return path

    return factory


@pytest.fixture(scope="function")
def rng() -> np.random.Generator:
    """Seeded random number generator"""
    return np.random.default_rng(seed=2024)
