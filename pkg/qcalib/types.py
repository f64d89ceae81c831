"""Type hinting and names"""

from enum import Enum
from typing import Dict, List, Tuple

# vertex data structures
Vertex = int
VertexList = List[Vertex]

# edge data structures
Edge = Tuple[Vertex, Vertex]
EdgeList = List[Edge]

# face data structures
Face = Tuple[Vertex, Vertex, Vertex]

# geometry
Point = Tuple[float, float, float]

# graph data structures
AdjList = Dict[Vertex, VertexList]

# pylint: disable=invalid-name,too-few-public-methods


class StrEnumMixin:
    """When the `str(...)` method is called on this mixin, return the value of the Enum."""

    def __str__(self):
        try:
            return self.value()
        except TypeError:
            return self.value


class EnergyKind(StrEnumMixin, str, Enum):
    """Functionals defined on the circumcircle intersection angles"""

    W = "W"  # discrete conformal Willmore energy
    W2 = "W2"  # quadratic circle-angles functional
    W2w = "W2w"  # weighted quadratic circle-angles functional


class GradientMethod(StrEnumMixin, str, Enum):
    """How gradients are evaluated"""

    analytic = "analytic"
    finite_difference = "finite_difference"


class EvaluationMode(StrEnumMixin, str, Enum):
    """Which algebraic form of the weighted functional is summed"""

    edge = "edge"
    vertex = "vertex"


class OptimizationStatus(StrEnumMixin, str, Enum):
    """Why a minimization run stopped"""

    converged = "converged"  # gradient norm below tolerance
    step_limit = "step-limit"  # maximum number of steps reached
    stalled = "stalled"  # line search failed to decrease the energy
    degenerated = "degenerated"  # a triangle or edge collapsed


class PredictedType(StrEnumMixin, str, Enum):
    """Prediction of the type of the minimizer from the quadratic programs"""

    convex_inscribed_unique = "convex-inscribed-unique"
    collapse_expected = "collapse-expected"
    indeterminate = "indeterminate"


class SolidName(StrEnumMixin, str, Enum):
    """Meshes that can be generated from the command line"""

    tetra = "tetra"
    octa = "octa"
    icosa = "icosa"
    torus = "torus"
    ellipsoid = "ellipsoid"


class ReportFormat(StrEnumMixin, str, Enum):
    """Output formats of reports"""

    json = "json"
    text = "text"
    csv = "csv"
