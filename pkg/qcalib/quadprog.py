"""Quadratic programs on the edge graph of a simplicial polyhedron

The equality program minimizes x^t D x subject to M x = 2 pi 1 and the inequality
program minimizes the same objective subject to M x >= 2 pi 1, where M is the
vertex-edge incidence matrix and D is the identity or the weight matrix N.
The solution of the equality program is x = D^-1 M^t lambda with
(M D^-1 M^t) lambda = 2 pi 1. Both programs have the same solution exactly when
lambda is non-negative.

A realization whose angles solve the equality program is a convex inscribed
polyhedron when the angles lie in (0, pi) and every non-facial cycle of the dual
graph has angle sum above 2 pi.
"""

import itertools
import logging
from typing import Any, Dict, FrozenSet, List, Optional, Set, Tuple

import networkx as nx
import numpy as np
import numpy.typing as npt
import pandas as pd
import pydantic
from scipy import sparse

from .exception import (
    NonPositiveWeightException,
    QPIterationLimitException,
    SingularSystemException,
    UnsupportedTopologyException,
)
from .linalg import incidence_gram, spd_solve
from .mesh import GraphData
from .types import PredictedType, VertexList
from .walk import close_cycle, is_simple_cycle, walk_attribute

logger = logging.getLogger(__name__)

# entries of lambda in (-LAMBDA_TOLERANCE, 0] count as zero
LAMBDA_TOLERANCE = 1e-10

# abstract angles within this distance of 0 or pi are outside the open range
ANGLE_TOLERANCE = 1e-10

# a non-facial cycle must exceed 2 pi by more than this
CYCLE_TOLERANCE = 1e-9

# exhaustive cycle enumeration up to this many dual nodes
EXHAUSTIVE_DUAL_LIMIT = 24

# number of shortest paths inspected per dual arc above the exhaustive limit
SHORTEST_PATHS_LIMIT = 16

TWO_PI = 2.0 * np.pi

# pylint: disable=too-few-public-methods


def signless_laplacian(graph: GraphData) -> sparse.csr_matrix:
    """The signless Laplacian M M^t = diag(valences) + adjacency

    Args:
        graph: Incidence matrix of the graph

    Returns:
        Symmetric sparse matrix of shape (|V|, |V|)
    """
    return incidence_gram(graph)


def solve_lambda(graph: GraphData, weighted: bool = False) -> npt.NDArray[np.float64]:
    """Solve M M^t lambda = 2 pi 1, or M N^-1 M^t lambda = 2 pi 1 when weighted

    Args:
        graph: Incidence matrix and edge weights
        weighted: If true, use M N^-1 M^t

    Returns:
        Vector lambda over the vertices

    Raises:
        SingularSystemException: If the matrix is singular
    """
    gram = incidence_gram(graph, weighted=weighted)
    rhs = np.full(graph.num_vertices, TWO_PI)
    lambdas = spd_solve(gram, rhs)
    residual = np.linalg.norm(gram @ lambdas - rhs) / np.linalg.norm(rhs)
    if residual > 1e-10:
        raise SingularSystemException(f"Relative residual {residual:.3e} of lambda is too large")
    return lambdas


def angles_from_lambda(
    graph: GraphData, lambdas: npt.NDArray[np.float64], weighted: bool = False
) -> npt.NDArray[np.float64]:
    """Edge values (lambda_i + lambda_j), divided by (n_i + n_j) when weighted"""
    values = lambdas[graph.edges[:, 0]] + lambdas[graph.edges[:, 1]]
    if weighted:
        return values / graph.edge_weights
    return values


def abstract_angles(graph: GraphData, weighted: bool = False) -> npt.NDArray[np.float64]:
    """Solution of the equality program: 2 pi M^t (M M^t)^-1 1,
    or 2 pi N^-1 M^t (M N^-1 M^t)^-1 1 when weighted

    Args:
        graph: Incidence matrix and edge weights
        weighted: If true, minimize x^t N x instead of x^t x

    Returns:
        One angle per edge, in the edge order of the graph

    Raises:
        SingularSystemException: If lambda cannot be solved for
    """
    return angles_from_lambda(graph, solve_lambda(graph, weighted=weighted), weighted)


class QPSolution(pydantic.BaseModel):
    """Minimizer of the inequality program with its multipliers"""

    angles: npt.NDArray[np.float64]
    multipliers: npt.NDArray[np.float64]
    active: VertexList
    iterations: int
    kkt_residual: float

    model_config = {"arbitrary_types_allowed": True}


def _objective_diagonal(graph: GraphData, weighted: bool) -> np.ndarray:
    return graph.edge_weights if weighted else np.ones(graph.num_edges)


def _equality_solve(
    gram: sparse.csr_matrix,
    incidence: sparse.csr_matrix,
    diagonal: np.ndarray,
    working: List[int],
) -> Tuple[np.ndarray, np.ndarray]:
    """Minimize x^t D x subject to M_W x = 2 pi 1 over the working set W"""
    if not working:
        return np.zeros(incidence.shape[1]), np.zeros(0)
    sub_gram = gram[working][:, working]
    multipliers = spd_solve(sub_gram, np.full(len(working), TWO_PI))
    x = (incidence[working].T @ multipliers) / diagonal
    return x, multipliers


def kkt_residual(
    graph: GraphData,
    x: npt.NDArray[np.float64],
    multipliers: npt.NDArray[np.float64],
    weighted: bool = False,
) -> float:
    """Largest violation of the optimality conditions of the inequality program

    Args:
        graph: Incidence matrix and edge weights
        x: Candidate solution over the edges
        multipliers: One multiplier per vertex, zero for inactive constraints
        weighted: If true, the objective is x^t N x

    Returns:
        Maximum of the stationarity, feasibility, dual feasibility
        and complementarity residuals
    """
    diagonal = _objective_diagonal(graph, weighted)
    slack = graph.incidence @ x - TWO_PI
    stationarity = np.abs(diagonal * x - graph.incidence.T @ multipliers)
    return float(
        max(
            stationarity.max(initial=0.0),
            np.maximum(-slack, 0.0).max(initial=0.0),
            np.maximum(-multipliers, 0.0).max(initial=0.0),
            np.abs(multipliers * slack).max(initial=0.0),
        )
    )


def solve_inequality_qp(
    graph: GraphData,
    weighted: bool = False,
    max_iterations: Optional[int] = None,
    tolerance: float = 1e-12,
) -> QPSolution:
    """Minimize x^t x (or x^t N x) subject to M x >= 2 pi 1 with a primal active-set method

    The method starts at the solution of the equality program, which is feasible
    with every constraint active. It then alternates equality-constrained solves on the
    working set with dropping the constraint of the most negative multiplier and
    stepping to the first blocking constraint.

    Args:
        graph: Incidence matrix and edge weights
        weighted: If true, minimize x^t N x
        max_iterations: Limit on the number of iterations, defaults to 10 (|V| + |E|)
        tolerance: Steps shorter than this, relative to the start point, count as zero

    Returns:
        Minimizer, multipliers and final working set

    Raises:
        QPIterationLimitException: If the iteration limit is reached, with the best iterate
        SingularSystemException: If a working set system is singular
    """
    if max_iterations is None:
        max_iterations = 10 * (graph.num_vertices + graph.num_edges)
    gram = incidence_gram(graph, weighted=weighted)
    incidence = graph.incidence
    diagonal = _objective_diagonal(graph, weighted)

    working = list(range(graph.num_vertices))
    x, multipliers = _equality_solve(gram, incidence, diagonal, working)
    scale = max(float(np.linalg.norm(x)), 1.0)
    for iteration in range(1, max_iterations + 1):
        target, multipliers = _equality_solve(gram, incidence, diagonal, working)
        step = target - x
        if np.linalg.norm(step) <= tolerance * scale:
            x = target
            if len(multipliers) == 0 or multipliers.min() >= -LAMBDA_TOLERANCE:
                full = np.zeros(graph.num_vertices)
                full[working] = multipliers
                residual = kkt_residual(graph, x, full, weighted)
                logger.debug(
                    "Active-set method finished after %s iterations with %s active constraints",
                    iteration,
                    len(working),
                )
                return QPSolution(
                    angles=x,
                    multipliers=full,
                    active=sorted(working),
                    iterations=iteration,
                    kkt_residual=residual,
                )
            dropped = working.pop(int(np.argmin(multipliers)))
            logger.debug("Iteration %s drops constraint of vertex %s", iteration, dropped)
            continue

        # step to the first constraint outside the working set that blocks the step
        alpha = 1.0
        blocking = None
        rates = incidence @ step
        slack = incidence @ x - TWO_PI
        in_working = np.zeros(graph.num_vertices, dtype=bool)
        in_working[working] = True
        for vertex in np.flatnonzero(~in_working & (rates < 0)):
            candidate = max(slack[vertex], 0.0) / -rates[vertex]
            if candidate < alpha:
                alpha = candidate
                blocking = int(vertex)
        x = x + alpha * step
        if blocking is not None:
            working.append(blocking)
            logger.debug("Iteration %s adds blocking constraint of vertex %s", iteration, blocking)

    raise QPIterationLimitException(
        f"Active-set method did not finish within {max_iterations} iterations", best_iterate=x
    )


class CycleCertificate(pydantic.BaseModel):
    """A cycle of the dual graph with the sum of the angles of its arcs"""

    faces: VertexList
    edges: List[int]
    weight_sum: float
    facial: bool
    # found by the shortest path search rather than by enumerating every cycle
    heuristic: bool = False

    def is_valid(self, dual: nx.Graph) -> bool:
        """True if the faces form a simple cycle of the dual whose arcs are the edges"""
        if not is_simple_cycle(dual, self.faces):
            return False
        return walk_attribute(dual, self.faces, "edge") == self.edges


def _facial_edge_sets(dual: nx.Graph) -> Set[FrozenSet[int]]:
    """Edge sets of the primal vertex stars, which are the face boundaries of the dual"""
    stars: Dict[int, Set[int]] = {}
    for _, _, data in dual.edges(data=True):
        for vertex in data["endpoints"]:
            stars.setdefault(vertex, set()).add(data["edge"])
    return {frozenset(star) for star in stars.values()}


def _certificate(
    dual: nx.Graph, cycle: VertexList, weights: np.ndarray, facial_sets: Set[FrozenSet[int]]
) -> CycleCertificate:
    faces = close_cycle(cycle)
    return _certificate_from_edges(faces, walk_attribute(dual, faces, "edge"), weights, facial_sets)


def _certificate_from_edges(
    faces: VertexList, edges: List[int], weights: np.ndarray, facial_sets: Set[FrozenSet[int]]
) -> CycleCertificate:
    return CycleCertificate(
        faces=faces,
        edges=edges,
        weight_sum=float(weights[edges].sum()),
        facial=frozenset(edges) in facial_sets,
    )


def _exhaustive_minimum(
    dual: nx.Graph, weights: np.ndarray, facial_sets: Set[FrozenSet[int]]
) -> Optional[CycleCertificate]:
    best: Optional[CycleCertificate] = None
    for cycle in nx.simple_cycles(dual):
        certificate = _certificate(dual, cycle, weights, facial_sets)
        if certificate.facial:
            continue
        if best is None or certificate.weight_sum < best.weight_sum:
            best = certificate
    return best


def _shortest_cycle_search(
    dual: nx.Graph, weights: np.ndarray, facial_sets: Set[FrozenSet[int]]
) -> Optional[CycleCertificate]:
    weighted_dual = nx.Graph()
    weighted_dual.add_nodes_from(dual.nodes)
    for u, v, data in dual.edges(data=True):
        weighted_dual.add_edge(u, v, weight=weights[data["edge"]], edge=data["edge"])

    best: Optional[CycleCertificate] = None
    for u, v, data in list(weighted_dual.edges(data=True)):
        # a cycle through the arc (u, v) is a path from u to v avoiding the arc
        reduced = weighted_dual.copy()
        reduced.remove_edge(u, v)
        try:
            paths = nx.shortest_simple_paths(reduced, u, v, weight="weight")
            for path in itertools.islice(paths, SHORTEST_PATHS_LIMIT):
                edges = walk_attribute(reduced, path, "edge") + [data["edge"]]
                certificate = _certificate_from_edges(path + [u], edges, weights, facial_sets)
                if certificate.facial:
                    continue
                if best is None or certificate.weight_sum < best.weight_sum:
                    best = certificate
                break
        except nx.NetworkXNoPath:
            continue
    return best


def rivin_cycle_check(
    dual: nx.Graph, angles: npt.ArrayLike
) -> Tuple[bool, Optional[CycleCertificate]]:
    """Does every simple non-facial cycle of the dual graph have angle sum above 2 pi?

    Up to `EXHAUSTIVE_DUAL_LIMIT` dual nodes every simple cycle is enumerated.
    Above it, for every arc the shortest non-facial cycles through the arc are
    searched among the first `SHORTEST_PATHS_LIMIT` shortest paths, so the result is heuristic.

    Args:
        dual: Dual graph whose arcs carry the primal edge index as "edge"
            and the primal endpoints as "endpoints"
        angles: Positive angle of every primal edge

    Returns:
        Verdict and the minimum weight non-facial cycle found, None if there is none.
        The certificate is marked heuristic when it comes from the shortest path search.

    Raises:
        NonPositiveWeightException: If an angle is not positive
    """
    weights = np.asarray(angles, dtype=np.float64)
    if np.any(weights <= 0.0):
        edge = int(np.argmin(weights))
        raise NonPositiveWeightException(
            f"Cycle weights must be positive, edge {edge} has weight {weights[edge]}"
        )
    facial_sets = _facial_edge_sets(dual)
    heuristic = dual.number_of_nodes() > EXHAUSTIVE_DUAL_LIMIT
    if heuristic:
        logger.warning(
            "Dual graph has %s nodes, searching non-facial cycles heuristically",
            dual.number_of_nodes(),
        )
        best = _shortest_cycle_search(dual, weights, facial_sets)
        if best is not None:
            best.heuristic = True
    else:
        best = _exhaustive_minimum(dual, weights, facial_sets)
    verdict = best is None or best.weight_sum > TWO_PI + CYCLE_TOLERANCE
    return verdict, best


class QPReport(pydantic.BaseModel):
    """Abstract angles of a graph and the checks that predict the type of the minimizer"""

    weighted: bool
    lambdas: npt.NDArray[np.float64]
    angles: npt.NDArray[np.float64]
    lambda_nonneg: bool
    borderline_vertices: VertexList
    angles_in_open_range: bool
    rivin_cycle_ok: Optional[bool]
    min_nonfacial_cycle_sum: Optional[float]
    certificate: Optional[CycleCertificate] = None
    cycle_search_heuristic: bool = False
    beta_below_pi: Optional[bool] = None
    feasibility_residual: float
    predicted: PredictedType

    model_config = {"arbitrary_types_allowed": True}

    def to_record(self) -> Dict[str, Any]:
        """Machine readable record with stable keys"""
        return {
            "weighted": self.weighted,
            "predicted_type": self.predicted.value,
            "lambda_min": float(self.lambdas.min()),
            "lambda_max": float(self.lambdas.max()),
            "lambda_nonneg": self.lambda_nonneg,
            "borderline_vertices": self.borderline_vertices,
            "angle_min": float(self.angles.min()),
            "angle_max": float(self.angles.max()),
            "angles_in_open_range": self.angles_in_open_range,
            "rivin_cycle_ok": self.rivin_cycle_ok,
            "min_nonfacial_cycle_sum": self.min_nonfacial_cycle_sum,
            "cycle_search_heuristic": self.cycle_search_heuristic,
            "beta_below_pi": self.beta_below_pi,
            "feasibility_residual": self.feasibility_residual,
            "lambdas": self.lambdas.tolist(),
            "angles": self.angles.tolist(),
            "angles_over_pi_sorted": self.angle_table()["beta_over_pi"].tolist(),
        }

    def to_text(self) -> str:
        """One finding per line as key: value"""
        record = self.to_record()
        lines = []
        for key in (
            "predicted_type",
            "weighted",
            "lambda_min",
            "lambda_max",
            "lambda_nonneg",
            "borderline_vertices",
            "angle_min",
            "angle_max",
            "angles_in_open_range",
            "rivin_cycle_ok",
            "min_nonfacial_cycle_sum",
            "cycle_search_heuristic",
            "beta_below_pi",
            "feasibility_residual",
        ):
            lines.append(f"{key}: {record[key]}")
        sorted_column = " ".join(f"{value:.4f}" for value in record["angles_over_pi_sorted"])
        lines.append(f"angles_over_pi_sorted: {sorted_column}")
        return "\n".join(lines)

    def angle_table(self) -> pd.DataFrame:
        """Abstract angles divided by pi in ascending order"""
        return pd.DataFrame({"beta_over_pi": np.sort(self.angles) / np.pi})


def predict_type(
    angles: np.ndarray, lambda_nonneg: bool, rivin_cycle_ok: Optional[bool]
) -> PredictedType:
    """Prediction from the sign of lambda, the range of the angles and the cycle condition"""
    if np.any(angles <= ANGLE_TOLERANCE) or rivin_cycle_ok is False:
        return PredictedType.collapse_expected
    in_open_range = bool(np.all(angles < np.pi - ANGLE_TOLERANCE))
    if lambda_nonneg and in_open_range and rivin_cycle_ok:
        return PredictedType.convex_inscribed_unique
    return PredictedType.indeterminate


def check_realizability(graph: GraphData, weighted: bool = False) -> QPReport:
    """Assemble lambda, the abstract angles and the realizability checks of a graph

    Args:
        graph: Graph data of a closed mesh of genus zero
        weighted: If true, analyse the weighted program

    Returns:
        Report with the predicted type of the minimizer

    Raises:
        UnsupportedTopologyException: If the graph is not the graph of a sphere
        SingularSystemException: If lambda cannot be solved for
    """
    if graph.euler_characteristic != 2:
        raise UnsupportedTopologyException(
            f"The analysis applies to polyhedra of genus zero, Euler characteristic is "
            f"{graph.euler_characteristic}"
        )
    lambdas = solve_lambda(graph, weighted=weighted)
    angles = angles_from_lambda(graph, lambdas, weighted)
    lambda_nonneg = bool(lambdas.min() > -LAMBDA_TOLERANCE)
    borderline = np.flatnonzero((lambdas > -LAMBDA_TOLERANCE) & (lambdas <= 0.0)).tolist()
    if borderline:
        logger.warning("Lambda is zero up to tolerance at vertices %s", borderline)
    angles_in_open_range = bool(
        np.all(angles > ANGLE_TOLERANCE) and np.all(angles < np.pi - ANGLE_TOLERANCE)
    )

    rivin_ok: Optional[bool] = None
    certificate: Optional[CycleCertificate] = None
    heuristic = False
    if np.all(angles > 0.0):
        dual = graph.dual_graph()
        heuristic = dual.number_of_nodes() > EXHAUSTIVE_DUAL_LIMIT
        rivin_ok, certificate = rivin_cycle_check(dual, angles)
    beta_below_pi = bool(np.all(angles < np.pi)) if lambdas.min() > 0.0 else None
    if beta_below_pi is False:
        logger.warning("Positive lambda with an abstract angle of at least pi")

    residual = float(np.abs(graph.incidence @ angles - TWO_PI).max())
    predicted = predict_type(angles, lambda_nonneg, rivin_ok)
    logger.info("Predicted type of the minimizer: %s", predicted)
    return QPReport(
        weighted=weighted,
        lambdas=lambdas,
        angles=angles,
        lambda_nonneg=lambda_nonneg,
        borderline_vertices=borderline,
        angles_in_open_range=angles_in_open_range,
        rivin_cycle_ok=rivin_ok,
        min_nonfacial_cycle_sum=None if certificate is None else certificate.weight_sum,
        certificate=certificate,
        cycle_search_heuristic=heuristic,
        beta_below_pi=beta_below_pi,
        feasibility_residual=residual,
        predicted=predicted,
    )


def compare_angle_columns(
    geometric: npt.ArrayLike, abstract: npt.ArrayLike, tolerance: float = 1e-6
) -> pd.DataFrame:
    """Side by side sorted columns of geometric and abstract angles divided by pi

    Args:
        geometric: Angles of a realization
        abstract: Abstract angles of its graph, same length
        tolerance: Values within tolerance of zero have no sign

    Returns:
        Frame with columns geometric, abstract, difference and sign_flip,
        where sign_flip marks rows whose entries have opposite signs

    Raises:
        ValueError: If the columns differ in length
    """
    first = np.sort(np.asarray(geometric, dtype=np.float64)) / np.pi
    second = np.sort(np.asarray(abstract, dtype=np.float64)) / np.pi
    if first.shape != second.shape:
        raise ValueError(f"Columns differ in length: {len(first)} and {len(second)}")
    sign_flip = ((first > tolerance) & (second < -tolerance)) | (
        (first < -tolerance) & (second > tolerance)
    )
    if sign_flip.any():
        logger.info("Columns differ in sign at %s rows", int(sign_flip.sum()))
    return pd.DataFrame(
        {
            "geometric": first,
            "abstract": second,
            "difference": first - second,
            "sign_flip": sign_flip,
        }
    )
