"""The discrete conformal Willmore energy W and the quadratic circle-angles functionals

* W = sum of beta over interior edges - pi * (number of interior vertices)
* W2 = sum of beta^2 - c
* W2w = sum of (n_i + n_j) beta^2 - c_w

The constants c and c_w only depend on the edge graph and are defined for closed meshes.
"""

import logging
from typing import Optional, Tuple

import numpy as np
import numpy.typing as npt
import pydantic

from .circle import AngleVector, angle_vector, check_interior_faces, edge_tangents
from .linalg import incidence_gram, spd_solve
from .mesh import GraphData, MeshTopology, TriangleMesh, incidence_and_weights
from .types import EnergyKind, EvaluationMode, GradientMethod

logger = logging.getLogger(__name__)

# below this angle the gradient of W is set to zero
DEFAULT_W_THRESHOLD = 1e-3

# pylint: disable=too-few-public-methods


class EnergyValue(pydantic.BaseModel):
    """Value of one of the functionals"""

    kind: EnergyKind
    value: float
    constant: Optional[float] = None
    closed: bool = True

    @property
    def constant_omitted(self) -> bool:
        """True if a quadratic functional was evaluated without its constant"""
        return self.kind != EnergyKind.W and self.constant is None


class GradientField(pydantic.BaseModel):
    """Gradient of a functional with respect to every vertex position"""

    kind: EnergyKind
    vectors: npt.NDArray[np.float64]

    model_config = {"arbitrary_types_allowed": True}

    def norm(self) -> float:
        """Euclidean norm of the stacked gradient"""
        return float(np.linalg.norm(self.vectors))

    def total(self) -> npt.NDArray[np.float64]:
        """Sum of the gradient vectors, zero for translation invariant functionals"""
        return self.vectors.sum(axis=0)

    def torque(self, positions: npt.ArrayLike) -> npt.NDArray[np.float64]:
        """Sum of p_v x grad_v, zero for rotation invariant functionals"""
        return np.cross(np.asarray(positions), self.vectors).sum(axis=0)


def edge_weights(topology: MeshTopology) -> npt.NDArray[np.float64]:
    """The weight n_i + n_j of every interior edge"""
    ij = topology.interior_quadruples[:, :2]
    return (topology.valences[ij[:, 0]] + topology.valences[ij[:, 1]]).astype(np.float64)


def normalization_c(graph: GraphData) -> float:
    """c = 4 pi^2 1^t (M M^t)^-1 1

    Raises:
        SingularSystemException: If M M^t is singular
    """
    y = spd_solve(incidence_gram(graph), np.ones(graph.num_vertices))
    return float(4.0 * np.pi**2 * y.sum())


def normalization_cw(graph: GraphData) -> float:
    """c_w = 4 pi^2 1^t (M N^-1 M^t)^-1 1

    Raises:
        SingularSystemException: If M N^-1 M^t is singular
    """
    y = spd_solve(incidence_gram(graph, weighted=True), np.ones(graph.num_vertices))
    return float(4.0 * np.pi**2 * y.sum())


def weighted_edge_form(
    edges: npt.ArrayLike, values: npt.ArrayLike, num_vertices: int
) -> float:
    """Sum over edges of (n_i + n_j) x_e^2 where n is the valence in the given edge list

    Args:
        edges: Array of shape (|E|, 2) with the endpoints of every edge
        values: One value per edge
        num_vertices: Number of vertices

    Returns:
        The weighted sum of squares
    """
    edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    values = np.asarray(values, dtype=np.float64)
    valences = np.bincount(edges.reshape(-1), minlength=num_vertices)
    return float(np.sum((valences[edges[:, 0]] + valences[edges[:, 1]]) * values**2))


def weighted_vertex_form(
    edges: npt.ArrayLike, values: npt.ArrayLike, num_vertices: int
) -> float:
    """Sum over vertices of the squared star sum plus the squared differences within the star

    For every vertex v with incident edge values x_1, ..., x_n this adds
    (x_1 + ... + x_n)^2 + sum over pairs a < b of (x_a - x_b)^2.
    The total equals `weighted_edge_form` on the same data.

    Args:
        edges: Array of shape (|E|, 2) with the endpoints of every edge
        values: One value per edge
        num_vertices: Number of vertices

    Returns:
        The vertex form of the weighted sum of squares
    """
    edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    values = np.asarray(values, dtype=np.float64)
    endpoints = edges.reshape(-1)
    star_values = np.repeat(values, 2)
    order = np.argsort(endpoints, kind="stable")
    boundaries = np.searchsorted(endpoints[order], np.arange(num_vertices + 1))
    total = 0.0
    for vertex in range(num_vertices):
        star = star_values[order[boundaries[vertex] : boundaries[vertex + 1]]]
        differences = star[:, np.newaxis] - star[np.newaxis, :]
        total += star.sum() ** 2 + 0.5 * np.sum(differences**2)
    return float(total)


def _require_graph(topology: MeshTopology, graph: Optional[GraphData]) -> GraphData:
    return graph if graph is not None else incidence_and_weights(topology)


def energy_constant(
    kind: EnergyKind, topology: MeshTopology, graph: Optional[GraphData] = None
) -> Optional[float]:
    """The constant subtracted from the angle sum of a functional

    Returns:
        pi times the number of interior vertices for W,
        c or c_w for W2 or W2w on closed meshes, None on meshes with boundary
    """
    if kind == EnergyKind.W:
        return np.pi * topology.num_interior_vertices
    if not topology.is_closed:
        logger.warning(
            "Mesh has boundary, %s is evaluated without its normalization constant", kind
        )
        return None
    graph = _require_graph(topology, graph)
    if kind == EnergyKind.W2:
        return normalization_c(graph)
    return normalization_cw(graph)


def _angle_sum(
    kind: EnergyKind, values: np.ndarray, weights: np.ndarray
) -> float:
    if kind == EnergyKind.W:
        return float(values.sum())
    if kind == EnergyKind.W2:
        return float(np.sum(values**2))
    return float(np.sum(weights * values**2))


def energy_W(mesh: TriangleMesh, topology: MeshTopology) -> EnergyValue:
    """Discrete conformal Willmore energy

    Raises:
        DegenerateTriangleException: If a face of an interior edge is degenerate
    """
    return energy_and_angles(EnergyKind.W, mesh, topology)[0]


def energy_W2(
    mesh: TriangleMesh, topology: MeshTopology, graph: Optional[GraphData] = None
) -> EnergyValue:
    """Quadratic circle-angles functional, without constant on meshes with boundary

    Raises:
        DegenerateTriangleException: If a face of an interior edge is degenerate
    """
    return energy_and_angles(EnergyKind.W2, mesh, topology, graph)[0]


def energy_W2w(
    mesh: TriangleMesh,
    topology: MeshTopology,
    graph: Optional[GraphData] = None,
    mode: EvaluationMode = EvaluationMode.edge,
) -> EnergyValue:
    """Weighted quadratic circle-angles functional

    Args:
        mesh: Triangle mesh
        topology: Topology of the mesh
        graph: Graph data of a closed mesh, computed when not given
        mode: Sum the edge form or the vertex form. Boundary edges count with angle 0
            in the vertex form.

    Raises:
        DegenerateTriangleException: If a face of an interior edge is degenerate
    """
    angles = angle_vector(mesh, topology)
    if mode == EvaluationMode.vertex:
        values = np.zeros(topology.num_edges)
        values[angles.edge_indices] = angles.values
        total = weighted_vertex_form(topology.edge_vertices, values, topology.num_vertices)
    else:
        total = float(np.sum(edge_weights(topology) * angles.values**2))
    constant = energy_constant(EnergyKind.W2w, topology, graph)
    return EnergyValue(
        kind=EnergyKind.W2w,
        value=total - (constant or 0.0),
        constant=constant,
        closed=topology.is_closed,
    )


def energy(
    kind: EnergyKind,
    mesh: TriangleMesh,
    topology: MeshTopology,
    graph: Optional[GraphData] = None,
) -> EnergyValue:
    """Evaluate the functional of the given kind"""
    if kind == EnergyKind.W:
        return energy_W(mesh, topology)
    if kind == EnergyKind.W2:
        return energy_W2(mesh, topology, graph)
    return energy_W2w(mesh, topology, graph)


class Functional:
    """A functional of the vertex positions for fixed connectivity

    Constants and edge weights are computed once, so repeated evaluation
    only recomputes the angles.
    """

    def __init__(
        self,
        kind: EnergyKind,
        topology: MeshTopology,
        graph: Optional[GraphData] = None,
        w_threshold: float = DEFAULT_W_THRESHOLD,
    ):
        self.kind = EnergyKind(kind)
        self.topology = topology
        self.w_threshold = w_threshold
        self.weights = edge_weights(topology)
        self.constant = energy_constant(self.kind, topology, graph)
        self._quadruples = topology.interior_quadruples

    def angles(self, positions: npt.NDArray[np.float64]) -> npt.NDArray[np.float64]:
        """Angles of the interior edges, without a degeneracy check"""
        t1, t2 = edge_tangents(positions, self._quadruples)
        return np.arctan2(
            np.linalg.norm(np.cross(t1, t2), axis=1), np.einsum("ij,ij->i", t1, t2)
        )

    def value(self, positions: npt.NDArray[np.float64]) -> float:
        """Energy at the given positions"""
        return _angle_sum(self.kind, self.angles(positions), self.weights) - (
            self.constant or 0.0
        )

    def angle_derivative(self, values: np.ndarray) -> np.ndarray:
        """Partial derivative of the energy with respect to every angle"""
        if self.kind == EnergyKind.W:
            return np.where(values < self.w_threshold, 0.0, 1.0)
        if self.kind == EnergyKind.W2:
            return 2.0 * values
        return 2.0 * self.weights * values

    def value_and_gradient(
        self, positions: npt.NDArray[np.float64]
    ) -> Tuple[float, npt.NDArray[np.float64], npt.NDArray[np.float64]]:
        """Energy, analytic gradient of shape (|V|, 3) and the angles"""
        i, j, k, l = self._quadruples.T
        u1 = positions[j] - positions[i]
        w1 = positions[k] - positions[i]
        u2 = positions[l] - positions[i]
        w2 = u1
        t1, t2 = edge_tangents(positions, self._quadruples)
        cross = np.cross(t1, t2)
        sine = np.linalg.norm(cross, axis=1)
        values = np.arctan2(sine, np.einsum("ij,ij->i", t1, t2))
        energy_value = _angle_sum(self.kind, values, self.weights) - (self.constant or 0.0)

        # derivative of the angle between the tangents, zero where they are parallel
        factor = self.angle_derivative(values)
        t1_sq = np.einsum("ij,ij->i", t1, t1)
        t2_sq = np.einsum("ij,ij->i", t2, t2)
        scale = np.zeros_like(sine)
        regular = sine > 1e-300
        scale[regular] = factor[regular] / sine[regular]
        g1 = (scale / np.where(t1_sq > 0, t1_sq, 1.0))[:, np.newaxis] * np.cross(t1, cross)
        g2 = (scale / np.where(t2_sq > 0, t2_sq, 1.0))[:, np.newaxis] * np.cross(cross, t2)

        du1, dw1 = _tangent_backward(g1, u1, w1)
        du2, dw2 = _tangent_backward(g2, u2, w2)
        gradient_vectors = np.zeros_like(positions)
        np.add.at(gradient_vectors, j, du1 + dw2)
        np.add.at(gradient_vectors, k, dw1)
        np.add.at(gradient_vectors, l, du2)
        np.add.at(gradient_vectors, i, -(du1 + dw1 + du2 + dw2))
        return energy_value, gradient_vectors, values

    def finite_difference_gradient(
        self, positions: npt.NDArray[np.float64], step: Optional[float] = None
    ) -> npt.NDArray[np.float64]:
        """Central differences of the energy in every coordinate

        Args:
            positions: Vertex positions
            step: Step length, defaults to 1e-6 times the bounding box diagonal
        """
        if step is None:
            step = 1e-6 * float(np.linalg.norm(positions.max(axis=0) - positions.min(axis=0)))
        result = np.zeros_like(positions)
        shifted = positions.copy()
        for vertex in range(len(positions)):
            for axis in range(3):
                original = shifted[vertex, axis]
                shifted[vertex, axis] = original + step
                forward = self.value(shifted)
                shifted[vertex, axis] = original - step
                backward = self.value(shifted)
                shifted[vertex, axis] = original
                result[vertex, axis] = (forward - backward) / (2.0 * step)
        return result


def _tangent_backward(
    g: np.ndarray, u: np.ndarray, w: np.ndarray
) -> Tuple[np.ndarray, np.ndarray]:
    """Pull back g through t = |w|^2 u - |u|^2 w to the edge vectors u and w"""
    u_sq = np.einsum("ij,ij->i", u, u)[:, np.newaxis]
    w_sq = np.einsum("ij,ij->i", w, w)[:, np.newaxis]
    gu = np.einsum("ij,ij->i", g, u)[:, np.newaxis]
    gw = np.einsum("ij,ij->i", g, w)[:, np.newaxis]
    return w_sq * g - 2.0 * gw * u, 2.0 * gu * w - u_sq * g


def gradient(
    mesh: TriangleMesh,
    topology: MeshTopology,
    kind: EnergyKind,
    w_threshold: float = DEFAULT_W_THRESHOLD,
    method: GradientMethod = GradientMethod.analytic,
    graph: Optional[GraphData] = None,
) -> GradientField:
    """Gradient of a functional with respect to the vertex positions

    Args:
        mesh: Triangle mesh
        topology: Topology of the mesh
        kind: Which functional
        w_threshold: For W, edges whose angle is below the threshold contribute nothing
        method: Analytic derivatives or central finite differences
        graph: Graph data of a closed mesh, computed when not given

    Returns:
        One vector per vertex

    Raises:
        DegenerateTriangleException: If a face of an interior edge is degenerate
    """
    check_interior_faces(mesh, topology)
    functional = Functional(kind, topology, graph=graph, w_threshold=w_threshold)
    positions = np.array(mesh.positions)
    if method == GradientMethod.finite_difference:
        vectors = functional.finite_difference_gradient(positions)
    else:
        _, vectors, _ = functional.value_and_gradient(positions)
    return GradientField(kind=functional.kind, vectors=vectors)


def energy_and_angles(
    kind: EnergyKind,
    mesh: TriangleMesh,
    topology: MeshTopology,
    graph: Optional[GraphData] = None,
) -> Tuple[EnergyValue, AngleVector]:
    """Energy together with the angle vector it was computed from"""
    angles = angle_vector(mesh, topology)
    constant = energy_constant(kind, topology, graph)
    value = _angle_sum(kind, angles.values, edge_weights(topology)) - (constant or 0.0)
    return (
        EnergyValue(
            kind=kind,
            value=value,
            constant=None if kind == EnergyKind.W else constant,
            closed=topology.is_closed,
        ),
        angles,
    )
