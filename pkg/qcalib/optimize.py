"""Minimize a functional over the vertex positions with a limited-memory quasi-Newton method"""

import logging
import time
from collections import deque
from pathlib import Path
from typing import Deque, FrozenSet, Iterable, List, Optional, Set, Tuple

import numpy as np
import numpy.typing as npt
import pandas as pd
import pydantic

from .circle import check_interior_faces
from .energy import DEFAULT_W_THRESHOLD, Functional, GradientField
from .exception import ClosedMeshException
from .mesh import DEGENERACY_THRESHOLD, GraphData, MeshTopology, TriangleMesh, triangle_quality
from .types import EnergyKind, GradientMethod, OptimizationStatus, Vertex

logger = logging.getLogger(__name__)

TRACE_COLUMNS = ["step", "energy", "grad_norm", "beta_min", "beta_max", "bbox_diag", "seconds"]

# pylint: disable=too-few-public-methods,too-many-locals,too-many-branches,too-many-statements


class OptimizationConfig(pydantic.BaseModel):
    """Settings of a minimization run"""

    kind: EnergyKind = EnergyKind.W2
    max_steps: int = pydantic.Field(default=4000, ge=1)
    gtol: float = pydantic.Field(default=1e-10, gt=0.0)
    history: int = pydantic.Field(default=8, ge=1)
    w_threshold: float = pydantic.Field(default=DEFAULT_W_THRESHOLD, ge=0.0)
    fixed: FrozenSet[Vertex] = frozenset()
    trace_interval: int = pydantic.Field(default=1, ge=1)
    gradient_method: GradientMethod = GradientMethod.analytic
    # edges shorter than this fraction of the bounding box diagonal have collapsed
    collapse_tolerance: float = pydantic.Field(default=1e-6, ge=0.0)
    armijo: float = pydantic.Field(default=1e-4, gt=0.0, lt=1.0)
    curvature: float = pydantic.Field(default=0.9, gt=0.0, lt=1.0)
    # trial evaluations per line search
    max_backtracks: int = pydantic.Field(default=60, ge=1)
    # largest vertex displacement of a steepest descent trial step, relative to the bounding box
    initial_displacement: float = pydantic.Field(default=1e-2, gt=0.0)

    @pydantic.model_validator(mode="after")
    def check_line_search_parameters(self) -> "OptimizationConfig":
        """The Wolfe conditions need 0 < armijo < curvature < 1"""
        if self.armijo >= self.curvature:
            raise ValueError(
                f"Sufficient decrease parameter {self.armijo} must be below "
                f"the curvature parameter {self.curvature}"
            )
        return self


class TraceRecord(pydantic.BaseModel):
    """State of a run after an accepted step"""

    step: int
    energy: float
    grad_norm: float
    beta_min: float
    beta_max: float
    bbox_diag: float
    seconds: float


class OptimizationResult(pydantic.BaseModel):
    """Final mesh, trace and status of a minimization run"""

    mesh: TriangleMesh
    trace: List[TraceRecord]
    status: OptimizationStatus
    steps: int
    energy: float
    grad_norm: float
    collapsed_edges: List[int] = []
    degenerate_faces: List[int] = []

    model_config = {"arbitrary_types_allowed": True}

    def trace_dataframe(self) -> pd.DataFrame:
        """The trace as a data frame"""
        return trace_to_dataframe(self.trace)


def trace_to_dataframe(trace: Iterable[TraceRecord]) -> pd.DataFrame:
    """One row per trace record with the columns of `TRACE_COLUMNS`"""
    return pd.DataFrame([record.model_dump() for record in trace], columns=TRACE_COLUMNS)


def write_trace(trace: Iterable[TraceRecord], path: Path) -> None:
    """Write a trace as CSV with header step,energy,grad_norm,beta_min,beta_max,bbox_diag,seconds"""
    trace_to_dataframe(trace).to_csv(path, index=False)


def fix_boundary_collar(topology: MeshTopology) -> Set[Vertex]:
    """Boundary vertices together with every vertex adjacent to the boundary

    Fixing this collar holds the boundary curve and, approximately,
    the tangent planes along it.

    Raises:
        ClosedMeshException: If the mesh has no boundary
    """
    if topology.is_closed:
        raise ClosedMeshException("A closed mesh has no boundary collar")
    collar = set(topology.boundary_vertices)
    for edge in topology.edges:
        if edge.i in topology.boundary_vertices or edge.j in topology.boundary_vertices:
            collar.update(edge.endpoints)
    return collar


def project_gradient(gradient: GradientField, fixed: Iterable[Vertex]) -> GradientField:
    """Zero the gradient of fixed vertices"""
    vectors = np.array(gradient.vectors)
    vectors[list(fixed)] = 0.0
    return GradientField(kind=gradient.kind, vectors=vectors)


def _two_loop(
    gradient: np.ndarray, history: Deque[Tuple[np.ndarray, np.ndarray]]
) -> np.ndarray:
    """Apply the inverse Hessian approximation of the stored curvature pairs to a gradient"""
    q = gradient.copy()
    alphas = []
    for s, y in reversed(history):
        alpha = np.dot(s, q) / np.dot(y, s)
        q -= alpha * y
        alphas.append(alpha)
    s, y = history[-1]
    r = (np.dot(s, y) / np.dot(y, y)) * q
    for (s, y), alpha in zip(history, reversed(alphas)):
        b = np.dot(y, r) / np.dot(y, s)
        r += s * (alpha - b)
    return r


def _collapsed_edges(
    positions: np.ndarray, edges: np.ndarray, tolerance: float
) -> List[int]:
    if len(edges) == 0:
        return []
    lengths = np.linalg.norm(positions[edges[:, 0]] - positions[edges[:, 1]], axis=1)
    diagonal = float(np.linalg.norm(positions.max(axis=0) - positions.min(axis=0)))
    return np.flatnonzero(lengths < tolerance * diagonal).tolist()


def minimize(
    mesh: TriangleMesh,
    topology: MeshTopology,
    graph: Optional[GraphData] = None,
    config: Optional[OptimizationConfig] = None,
) -> OptimizationResult:
    """Minimize a functional by a limited-memory quasi-Newton method with a Wolfe line search

    The line search brackets a step meeting the sufficient decrease and curvature
    conditions, so every accepted step decreases the energy and the stored curvature
    pairs stay positive. A step meeting only sufficient decrease is taken when the
    bracket is exhausted. Fixed vertices never move. Trial steps that would produce
    a degenerate triangle shrink the bracket.

    Args:
        mesh: Initial realization
        topology: Topology of the mesh
        graph: Graph data of a closed mesh, computed when needed and not given
        config: Settings, defaults of `OptimizationConfig` when not given

    Returns:
        Result with a mesh of the same connectivity, the trace and the status.
        The status is converged when the gradient norm reaches the tolerance,
        step-limit after the maximum number of steps, stalled when the line search
        finds no decrease and degenerated when an edge collapses or collapsing
        triangles block the line search.

    Raises:
        DegenerateTriangleException: If the initial mesh has a degenerate triangle
        ValueError: If a fixed vertex is out of range
    """
    config = config or OptimizationConfig()
    check_interior_faces(mesh, topology)
    if config.fixed and (min(config.fixed) < 0 or max(config.fixed) >= mesh.num_vertices):
        raise ValueError(f"Fixed vertices must be in range 0..{mesh.num_vertices - 1}")

    functional = Functional(config.kind, topology, graph=graph, w_threshold=config.w_threshold)
    free = np.ones(mesh.num_vertices, dtype=bool)
    free[list(config.fixed)] = False
    x = np.array(mesh.positions)
    pinned = x[~free].copy()
    faces = mesh.faces
    start = time.perf_counter()

    def evaluate(points: np.ndarray) -> Tuple[float, np.ndarray, np.ndarray]:
        if config.gradient_method == GradientMethod.finite_difference:
            value = functional.value(points)
            grad = functional.finite_difference_gradient(points)
            angles = functional.angles(points)
        else:
            value, grad, angles = functional.value_and_gradient(points)
        grad[~free] = 0.0
        return value, grad, angles

    def record(step: int, value: float, grad: np.ndarray, angles: np.ndarray) -> TraceRecord:
        return TraceRecord(
            step=step,
            energy=value,
            grad_norm=float(np.linalg.norm(grad)),
            beta_min=float(angles.min()) if len(angles) else float("nan"),
            beta_max=float(angles.max()) if len(angles) else float("nan"),
            bbox_diag=float(np.linalg.norm(x.max(axis=0) - x.min(axis=0))),
            seconds=time.perf_counter() - start,
        )

    value, grad, angles = evaluate(x)
    trace = [record(0, value, grad, angles)]
    logger.info(
        "Minimizing %s over %s vertices (%s fixed), initial energy %.6e",
        config.kind,
        mesh.num_vertices,
        len(config.fixed),
        value,
    )

    history: Deque[Tuple[np.ndarray, np.ndarray]] = deque(maxlen=config.history)
    status = OptimizationStatus.step_limit
    collapsed: List[int] = []
    bad_faces: List[int] = []
    steps = 0
    while True:
        grad_norm = float(np.linalg.norm(grad))
        if grad_norm <= config.gtol:
            status = OptimizationStatus.converged
            break
        if steps >= config.max_steps:
            status = OptimizationStatus.step_limit
            break

        flat_grad = grad.reshape(-1)
        direction = -_two_loop(flat_grad, history) if history else -flat_grad
        slope = float(np.dot(flat_grad, direction))
        if slope >= 0.0:
            history.clear()
            direction = -flat_grad
            slope = -float(np.dot(flat_grad, flat_grad))
        alpha = 1.0
        if not history:
            largest = float(np.linalg.norm(direction.reshape(x.shape), axis=1).max())
            diagonal = float(np.linalg.norm(x.max(axis=0) - x.min(axis=0)))
            alpha = config.initial_displacement * diagonal / largest

        # bracket a step satisfying the weak Wolfe conditions, expanding while too short
        lower, upper = 0.0, np.inf
        found: Optional[Tuple[np.ndarray, float, np.ndarray, np.ndarray]] = None
        short: Optional[Tuple[np.ndarray, float, np.ndarray, np.ndarray]] = None
        blocked: List[int] = []
        for _ in range(config.max_backtracks):
            trial = x + alpha * direction.reshape(x.shape)
            trial[~free] = pinned
            quality = triangle_quality(trial, faces)
            if quality.min(initial=np.inf) < DEGENERACY_THRESHOLD:
                blocked = np.flatnonzero(quality < DEGENERACY_THRESHOLD).tolist()
                upper = alpha
            else:
                trial_value, trial_grad, trial_angles = evaluate(trial)
                if not np.isfinite(trial_value) or (
                    trial_value > value + config.armijo * alpha * slope
                ):
                    upper = alpha
                elif np.dot(trial_grad.reshape(-1), direction) < config.curvature * slope:
                    lower = alpha
                    short = (trial, trial_value, trial_grad, trial_angles)
                else:
                    found = (trial, trial_value, trial_grad, trial_angles)
                    break
            alpha = 0.5 * (lower + upper) if np.isfinite(upper) else 2.0 * alpha
        found = found or short

        if found is None:
            if blocked:
                status = OptimizationStatus.degenerated
                bad_faces = blocked
            else:
                status = OptimizationStatus.stalled
            logger.warning("Line search failed at step %s: %s", steps + 1, status)
            break
        trial, trial_value, trial_grad, trial_angles = found

        s = (trial - x).reshape(-1)
        y = (trial_grad - grad).reshape(-1)
        if np.dot(s, y) > 1e-12 * np.linalg.norm(s) * np.linalg.norm(y):
            history.append((s, y))
        x, value, grad, angles = trial, trial_value, trial_grad, trial_angles
        steps += 1
        if steps % config.trace_interval == 0:
            trace.append(record(steps, value, grad, angles))
            logger.debug(
                "step %s energy %.10e |grad| %.3e", steps, value, trace[-1].grad_norm
            )

        collapsed = _collapsed_edges(x, topology.edge_vertices, config.collapse_tolerance)
        if collapsed:
            status = OptimizationStatus.degenerated
            logger.warning("Edges %s collapsed at step %s", collapsed[:10], steps)
            break

    if trace[-1].step != steps:
        trace.append(record(steps, value, grad, angles))
    logger.info(
        "Finished after %s steps with status %s, energy %.6e", steps, status, value
    )
    return OptimizationResult(
        mesh=mesh.with_positions(x),
        trace=trace,
        status=status,
        steps=steps,
        energy=value,
        grad_norm=float(np.linalg.norm(grad)),
        collapsed_edges=collapsed,
        degenerate_faces=bad_faces,
    )
