"""Geometric verdicts on realizations: sphere fit, convexity, Delaunay property and torus radii"""

import logging
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
import numpy.typing as npt
import pydantic
from scipy import linalg

from .circle import angle_vector
from .energy import energy_W, energy_W2, energy_W2w
from .exception import (
    BoundaryPresentException,
    DegeneratePointSetException,
    DegenerateTriangleException,
    GridStructureException,
)
from .generate import torus_faces
from .mesh import GraphData, MeshTopology, TriangleMesh, degenerate_faces, incidence_and_weights

logger = logging.getLogger(__name__)

# a mesh is inscribed when the relative deviation of its sphere fit is below this
INSCRIBED_TOLERANCE = 1e-4

# signed distances up to this fraction of the bounding box diagonal count as inside
CONVEXITY_TOLERANCE = 1e-9

# pylint: disable=too-few-public-methods


class SphereFit(pydantic.BaseModel):
    """Least squares sphere through a point set"""

    center: npt.NDArray[np.float64]
    radius: float
    deviation: float

    model_config = {"arbitrary_types_allowed": True}


def fit_sphere(positions: npt.ArrayLike) -> SphereFit:
    """Algebraic least squares sphere fit

    Minimizes the sum of (|p|^2 - 2 c.p - k)^2 over the center c and k = r^2 - |c|^2.
    The deviation is the largest geometric error | |p - c| - r | / r.

    Args:
        positions: At least four points that are not coplanar

    Returns:
        Center, radius and maximum relative deviation

    Raises:
        DegeneratePointSetException: If the points are too few or coplanar
    """
    points = np.asarray(positions, dtype=np.float64)
    if len(points) < 4:
        raise DegeneratePointSetException(f"A sphere fit needs 4 points, got {len(points)}")
    centered = points - points.mean(axis=0)
    singular_values = linalg.svdvals(centered)
    if singular_values[-1] <= 1e-12 * singular_values[0]:
        raise DegeneratePointSetException("Points are coplanar")
    design = np.hstack([2.0 * points, np.ones((len(points), 1))])
    solution, *_ = linalg.lstsq(design, np.einsum("ij,ij->i", points, points))
    center = solution[:3]
    radius_squared = solution[3] + center @ center
    if radius_squared <= 0.0:
        raise DegeneratePointSetException("Sphere fit has no real radius")
    radius = float(np.sqrt(radius_squared))
    deviation = float(np.max(np.abs(np.linalg.norm(points - center, axis=1) - radius)) / radius)
    return SphereFit(center=center, radius=radius, deviation=deviation)


def convexity_violations(
    mesh: TriangleMesh, tolerance: float = CONVEXITY_TOLERANCE
) -> List[int]:
    """Faces that have a vertex strictly on their outer side

    Args:
        mesh: Closed, outward oriented mesh
        tolerance: Signed distances up to this fraction of the bounding box diagonal are allowed

    Returns:
        Indices of the violating faces

    Raises:
        DegenerateTriangleException: If a face is degenerate
    """
    bad = degenerate_faces(mesh)
    if bad:
        raise DegenerateTriangleException(f"Faces {bad[:10]} are degenerate", faces=bad)
    corners = mesh.positions[mesh.faces]
    normals = np.cross(corners[:, 1] - corners[:, 0], corners[:, 2] - corners[:, 0])
    normals /= np.linalg.norm(normals, axis=1)[:, np.newaxis]
    heights = normals @ mesh.positions.T - np.einsum("ij,ij->i", normals, corners[:, 0])[
        :, np.newaxis
    ]
    limit = tolerance * mesh.bounding_box_diagonal()
    return np.flatnonzero((heights > limit).any(axis=1)).tolist()


def is_convex_position(mesh: TriangleMesh, tolerance: float = CONVEXITY_TOLERANCE) -> bool:
    """True if every vertex lies on the inner side of every face plane

    Raises:
        DegenerateTriangleException: If a face is degenerate
    """
    return not convexity_violations(mesh, tolerance)


class DelaunayCheck(pydantic.BaseModel):
    """Whether a closed mesh is a Delaunay triangulation of a sphere"""

    delaunay: bool
    inscribed: bool
    convex: bool
    sphere: SphereFit
    violating_faces: List[int]

    def __bool__(self) -> bool:
        return self.delaunay


def is_delaunay_on_sphere(
    mesh: TriangleMesh, topology: MeshTopology, tolerance: float = INSCRIBED_TOLERANCE
) -> DelaunayCheck:
    """An inscribed triangulation is Delaunay on its sphere exactly when it is convex

    Args:
        mesh: Closed mesh
        topology: Topology of the mesh
        tolerance: Largest relative sphere fit deviation of an inscribed mesh

    Returns:
        Check that is truthy if the mesh is inscribed and convex,
        listing the faces that violate convexity

    Raises:
        BoundaryPresentException: If the mesh has boundary
        DegenerateTriangleException: If a face is degenerate
        DegeneratePointSetException: If the vertices are coplanar
    """
    if not topology.is_closed:
        raise BoundaryPresentException("The Delaunay check needs a closed mesh")
    sphere = fit_sphere(mesh.positions)
    violating = convexity_violations(mesh)
    inscribed = sphere.deviation < tolerance
    convex = not violating
    return DelaunayCheck(
        delaunay=inscribed and convex,
        inscribed=inscribed,
        convex=convex,
        sphere=sphere,
        violating_faces=violating,
    )


def _fit_circle(points: np.ndarray) -> Tuple[np.ndarray, np.ndarray, float]:
    """Least squares circle in the best fitting plane: center, unit normal and radius"""
    mean = points.mean(axis=0)
    _, _, basis = linalg.svd(points - mean)
    planar = (points - mean) @ basis[:2].T
    design = np.hstack([2.0 * planar, np.ones((len(points), 1))])
    solution, *_ = linalg.lstsq(design, np.einsum("ij,ij->i", planar, planar))
    radius = float(np.sqrt(solution[2] + solution[:2] @ solution[:2]))
    center = mean + solution[:2] @ basis[:2]
    return center, basis[2], radius


def torus_radii_ratio(mesh: TriangleMesh, m: int, n: int) -> float:
    """Ratio of the major to the minor radius of a mesh with generated torus connectivity

    The centroids of the minor loops are fitted by a circle whose radius is the
    major radius. In a staggered grid the even and the odd vertices of a loop sit
    on two meridians and give one centroid each. The minor radius is the mean
    distance of the vertices to the fitted circle.

    Args:
        mesh: Mesh with the connectivity of `generate_torus` for counts m and n
        m: Number of minor loops
        n: Number of vertices per minor loop

    Returns:
        Major radius divided by minor radius

    Raises:
        GridStructureException: If the connectivity is not the m by n torus grid
    """
    if mesh.num_vertices != m * n:
        raise GridStructureException(f"Mesh does not have the connectivity of a {m}x{n} torus")
    staggered = n % 2 == 0 and np.array_equal(mesh.faces, np.array(torus_faces(m, n)))
    if not staggered and not np.array_equal(
        mesh.faces, np.array(torus_faces(m, n, staggered=False))
    ):
        raise GridStructureException(f"Mesh does not have the connectivity of a {m}x{n} torus")
    loops = mesh.positions.reshape(m, n, 3)
    if staggered:
        centroids = np.concatenate([loops[:, 0::2].mean(axis=1), loops[:, 1::2].mean(axis=1)])
    else:
        centroids = loops.mean(axis=1)
    center, normal, major = _fit_circle(centroids)
    offsets = mesh.positions - center
    heights = offsets @ normal
    in_plane = np.linalg.norm(offsets - np.outer(heights, normal), axis=1)
    minor = float(np.mean(np.hypot(in_plane - major, heights)))
    return major / minor


class DiagnosticsReport(pydantic.BaseModel):
    """Readouts of a realization, missing values are None with the reason in errors"""

    energy_w: Optional[float] = None
    energy_w2: Optional[float] = None
    energy_w2w: Optional[float] = None
    sphere_center: Optional[List[float]] = None
    sphere_radius: Optional[float] = None
    sphere_dev: Optional[float] = None
    inscribed_tolerance: float = INSCRIBED_TOLERANCE
    convex: Optional[bool] = None
    inscribed: Optional[bool] = None
    delaunay: Optional[bool] = None
    beta_min: Optional[float] = None
    beta_max: Optional[float] = None
    beta_quartiles: Optional[List[float]] = None
    torus_ratio: Optional[float] = None
    errors: Dict[str, str] = {}

    def to_record(self) -> Dict[str, Any]:
        """Machine readable record with stable keys"""
        return self.model_dump()

    def to_text(self) -> str:
        """One readout per line as key: value"""
        return "\n".join(f"{key}: {value}" for key, value in self.to_record().items())


def report(
    mesh: TriangleMesh,
    topology: MeshTopology,
    graph: Optional[GraphData] = None,
    torus_grid: Optional[Tuple[int, int]] = None,
    inscribed_tolerance: float = INSCRIBED_TOLERANCE,
) -> DiagnosticsReport:
    """Collect every readout that is defined for the mesh

    A failing readout does not stop the report; its error message is recorded instead.

    Args:
        mesh: Triangle mesh
        topology: Topology of the mesh
        graph: Graph data of a closed mesh, computed when needed and not given
        torus_grid: Counts (m, n) if the mesh has generated torus connectivity
        inscribed_tolerance: Largest relative sphere fit deviation of an inscribed mesh

    Returns:
        Report with energies, sphere fit, convexity, Delaunay verdict, angle statistics
        and the torus ratio where defined
    """
    readouts: Dict[str, Any] = {"inscribed_tolerance": inscribed_tolerance}
    errors: Dict[str, str] = {}

    try:
        readouts["energy_w"] = energy_W(mesh, topology).value
        angles = angle_vector(mesh, topology)
        if len(angles):
            readouts["beta_min"] = angles.min()
            readouts["beta_max"] = angles.max()
            readouts["beta_quartiles"] = np.quantile(angles.values, [0.25, 0.5, 0.75]).tolist()
    except DegenerateTriangleException as error:
        errors["energy_w"] = str(error)

    if topology.is_closed:
        try:
            graph = graph if graph is not None else incidence_and_weights(topology)
            readouts["energy_w2"] = energy_W2(mesh, topology, graph).value
            readouts["energy_w2w"] = energy_W2w(mesh, topology, graph).value
        except (ArithmeticError, ValueError) as error:
            errors["energy_w2"] = str(error)
    else:
        errors["energy_w2"] = "mesh has boundary, normalization constants are undefined"

    try:
        sphere = fit_sphere(mesh.positions)
        readouts["sphere_center"] = sphere.center.tolist()
        readouts["sphere_radius"] = sphere.radius
        readouts["sphere_dev"] = sphere.deviation
        readouts["inscribed"] = sphere.deviation < inscribed_tolerance
    except DegeneratePointSetException as error:
        errors["sphere"] = str(error)

    if topology.is_closed:
        try:
            readouts["convex"] = is_convex_position(mesh)
        except DegenerateTriangleException as error:
            errors["convex"] = str(error)
        if readouts.get("inscribed") is not None and readouts.get("convex") is not None:
            readouts["delaunay"] = readouts["inscribed"] and readouts["convex"]
    else:
        errors["convex"] = "mesh has boundary"

    if torus_grid is not None:
        try:
            readouts["torus_ratio"] = torus_radii_ratio(mesh, *torus_grid)
        except GridStructureException as error:
            errors["torus_ratio"] = str(error)

    for key, message in errors.items():
        logger.debug("Readout %s unavailable: %s", key, message)
    return DiagnosticsReport(errors=errors, **readouts)
