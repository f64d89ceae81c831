"""Generate triangle meshes: regular solids, tori, disks and random polyhedra"""

import math
from typing import List, Sequence

import numpy as np

from .exception import GraphStructureException
from .hull import convex_hull
from .mesh import TriangleMesh, build_topology, flip_edge
from .types import Face, Vertex

GOLDEN_RATIO = (1.0 + math.sqrt(5.0)) / 2.0


def _on_unit_sphere(points: Sequence[Sequence[float]]) -> np.ndarray:
    points = np.asarray(points, dtype=np.float64)
    return points / np.linalg.norm(points, axis=1)[:, np.newaxis]


def generate_tetrahedron() -> TriangleMesh:
    """Regular tetrahedron inscribed in the unit sphere"""
    corners = [(1, 1, 1), (1, -1, -1), (-1, 1, -1), (-1, -1, 1)]
    return convex_hull(_on_unit_sphere(corners))


def generate_octahedron() -> TriangleMesh:
    """Regular octahedron inscribed in the unit sphere"""
    corners = [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)]
    return convex_hull(_on_unit_sphere(corners))


def generate_icosahedron() -> TriangleMesh:
    """Regular icosahedron inscribed in the unit sphere"""
    phi = GOLDEN_RATIO
    corners = []
    for s in (1, -1):
        for t in (phi, -phi):
            corners.extend([(0, s, t), (s, t, 0), (t, 0, s)])
    return convex_hull(_on_unit_sphere(corners))


def torus_vertex(a: int, b: int, n: int) -> Vertex:
    """Index of the vertex in major step a and minor step b of a generated torus"""
    return a * n + b


def torus_faces(m: int, n: int, staggered: bool = True) -> List[Face]:
    """Faces of the m by n torus grid, two per quad

    The quad (a, b), (a + 1, b), (a + 1, b + 1), (a, b + 1) is split along its
    (a, b + 1) to (a + 1, b) diagonal. Staggered grids split the quads of odd b
    along the other diagonal, so the diagonals of neighbouring parallels alternate.
    """
    faces: List[Face] = []
    for a in range(m):
        for b in range(n):
            p = torus_vertex(a, b, n)
            q = torus_vertex((a + 1) % m, b, n)
            s = torus_vertex((a + 1) % m, (b + 1) % n, n)
            t = torus_vertex(a, (b + 1) % n, n)
            if staggered and b % 2 == 1:
                faces.append((p, q, s))
                faces.append((p, s, t))
            else:
                faces.append((p, q, t))
                faces.append((q, s, t))
    return faces


def generate_torus(R: float, r: float, m: int, n: int, staggered: bool = True) -> TriangleMesh:
    """Triangulated torus of revolution around the z-axis

    Vertex a * n + b sits at major angle 2 pi a / m and minor angle 2 pi b / n.
    In a staggered grid the parallels of odd b are turned by half a major step and
    the quad diagonals alternate between parallels, so every triangle is isosceles
    and the grid can relax towards near equilateral triangles. With a single
    diagonal direction the grid is a sheared lattice that cannot close up around
    a torus of revolution without right angled triangles.

    Args:
        R: Major radius
        r: Minor radius
        m: Number of steps around the z-axis
        n: Number of steps around each minor circle, even for staggered grids
        staggered: Alternate the diagonals and offset the odd parallels

    Returns:
        Closed, outward oriented mesh of genus one with m * n vertices

    Raises:
        ValueError: If R > r > 0 or m, n >= 3 does not hold, or a staggered grid has odd n
    """
    if not R > r > 0:
        raise ValueError(f"Radii must satisfy R > r > 0, got R={R}, r={r}")
    if m < 3 or n < 3:
        raise ValueError(f"Grid counts must be at least 3, got m={m}, n={n}")
    if staggered and n % 2:
        raise ValueError(f"A staggered torus needs an even number of minor steps, got n={n}")
    v = 2.0 * np.pi * np.arange(n) / n
    offsets = 0.5 * (np.arange(n) % 2) if staggered else np.zeros(n)
    uu = 2.0 * np.pi * (np.arange(m)[:, np.newaxis] + offsets[np.newaxis, :]) / m
    vv = np.broadcast_to(v, (m, n))
    positions = np.stack(
        [
            (R + r * np.cos(vv)) * np.cos(uu),
            (R + r * np.cos(vv)) * np.sin(uu),
            r * np.sin(vv),
        ],
        axis=-1,
    ).reshape(-1, 3)
    return TriangleMesh(positions=positions, faces=torus_faces(m, n, staggered=staggered))


def generate_random_inscribed(
    count: int, semiaxes: Sequence[float] = (1.0, 1.0, 1.0), seed: int = 0
) -> TriangleMesh:
    """Convex hull of random points on an ellipsoid

    Points are drawn uniformly on the unit sphere by normalizing
    standard normal vectors, then scaled by the semiaxes.

    Args:
        count: Number of points, at least 4
        semiaxes: Semiaxes of the ellipsoid along x, y and z
        seed: Seed of the random number generator

    Returns:
        Outward oriented hull mesh

    Raises:
        ValueError: If count < 4 or a semiaxis is not positive
        DegeneratePointSetException: If the sample happens to be coplanar
    """
    if count < 4:
        raise ValueError(f"At least 4 points are needed, got {count}")
    axes = np.asarray(semiaxes, dtype=np.float64)
    if axes.shape != (3,) or np.any(axes <= 0):
        raise ValueError(f"Semiaxes must be three positive numbers, got {semiaxes}")
    generator = np.random.default_rng(seed=seed)
    points = _on_unit_sphere(generator.standard_normal((count, 3)))
    return convex_hull(points * axes)


def generate_disk(rings: int, sectors: int, bump: float = 0.0) -> TriangleMesh:
    """Triangulated unit disk in the xy-plane with a polar grid

    Vertex 0 is the center. Ring r (1 <= r <= rings) has `sectors` vertices at radius r / rings.
    The outermost ring is the boundary.

    Args:
        rings: Number of rings around the center
        sectors: Number of vertices per ring
        bump: Height of the paraboloid z = bump * (1 - x^2 - y^2) the vertices are lifted to

    Returns:
        Mesh with boundary, oriented counterclockwise when viewed from +z

    Raises:
        ValueError: If rings < 1 or sectors < 3
    """
    if rings < 1 or sectors < 3:
        raise ValueError(f"Need rings >= 1 and sectors >= 3, got {rings}, {sectors}")

    def index(ring: int, sector: int) -> Vertex:
        return 1 + (ring - 1) * sectors + sector % sectors

    positions = [(0.0, 0.0, bump)]
    for ring in range(1, rings + 1):
        radius = ring / rings
        for sector in range(sectors):
            angle = 2.0 * math.pi * sector / sectors
            height = bump * (1.0 - radius**2)
            positions.append((radius * math.cos(angle), radius * math.sin(angle), height))
    faces: List[Face] = [(0, index(1, s), index(1, s + 1)) for s in range(sectors)]
    for ring in range(1, rings):
        for s in range(sectors):
            faces.append((index(ring, s), index(ring + 1, s), index(ring + 1, s + 1)))
            faces.append((index(ring, s), index(ring + 1, s + 1), index(ring, s + 1)))
    return TriangleMesh(positions=positions, faces=faces)


def generate_stacked(count: int, seed: int = 0) -> TriangleMesh:
    """Stacked polyhedron: a tetrahedron with vertices repeatedly inserted into random faces

    Each new vertex is placed above the centroid of the face it splits.

    Args:
        count: Total number of vertices, at least 4
        seed: Seed of the random number generator

    Returns:
        Closed mesh of genus zero with `count` vertices

    Raises:
        ValueError: If count < 4
    """
    if count < 4:
        raise ValueError(f"A stacked polyhedron has at least 4 vertices, got {count}")
    generator = np.random.default_rng(seed=seed)
    tetrahedron = generate_tetrahedron()
    positions = tetrahedron.positions.tolist()
    faces: List[Face] = [tuple(face) for face in tetrahedron.faces.tolist()]
    while len(positions) < count:
        f = int(generator.integers(len(faces)))
        a, b, c = faces[f]
        corners = np.array([positions[a], positions[b], positions[c]])
        normal = np.cross(corners[1] - corners[0], corners[2] - corners[0])
        area = 0.5 * np.linalg.norm(normal)
        height = 0.5 * math.sqrt(area)
        apex = corners.mean(axis=0) + height * normal / np.linalg.norm(normal)
        p = len(positions)
        positions.append(apex.tolist())
        faces[f] = (a, b, p)
        faces.extend([(b, c, p), (c, a, p)])
    return TriangleMesh(positions=positions, faces=faces)


def generate_random_triangulation(count: int, flips: int, seed: int = 0) -> TriangleMesh:
    """Random simplicial polyhedron: hull of random sphere points followed by random edge flips

    A flip is admissible when both endpoints keep valence at least 3
    and the new edge does not already exist. Positions are left on the sphere,
    so the result is inscribed but in general no longer convex.

    Args:
        count: Number of vertices, at least 4
        flips: Number of random flips to attempt
        seed: Seed of the random number generator

    Returns:
        Closed mesh of genus zero
    """
    mesh = generate_random_inscribed(count, seed=seed)
    generator = np.random.default_rng(seed=seed + 1)
    for _ in range(flips):
        topology = build_topology(mesh)
        edge_index = int(generator.integers(topology.num_edges))
        edge = topology.edges[edge_index]
        if min(topology.valences[edge.i], topology.valences[edge.j]) <= 3:
            continue
        try:
            mesh = flip_edge(mesh, topology, edge_index)
        except GraphStructureException:
            continue
    return mesh


def perturb_positions(mesh: TriangleMesh, scale: float, seed: int = 0) -> TriangleMesh:
    """Move every vertex by a random normal offset

    Args:
        mesh: Triangle mesh
        scale: Standard deviation of the offset relative to the bounding box diagonal
        seed: Seed of the random number generator

    Returns:
        Mesh with the same faces and perturbed positions
    """
    generator = np.random.default_rng(seed=seed)
    offset = generator.standard_normal(mesh.positions.shape)
    return mesh.with_positions(
        mesh.positions + scale * mesh.bounding_box_diagonal() * offset
    )
