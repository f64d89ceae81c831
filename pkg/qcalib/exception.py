"""Exceptions for simplicial surfaces, circle angles and the quadratic programs"""

from typing import List, Optional

import numpy as np
from networkx import exception as ex


class GraphStructureException(ex.NetworkXException):
    """The structure of a mesh or its graph is not allowed"""


class NonManifoldEdgeException(GraphStructureException):
    """An edge is shared by more than two faces"""


class InconsistentOrientationException(GraphStructureException):
    """Two faces traverse a shared edge in the same direction"""


class BoundaryPresentException(GraphStructureException):
    """The operation is only defined for closed meshes"""


class ClosedMeshException(GraphStructureException):
    """The operation needs a mesh with boundary"""


class UnsupportedTopologyException(GraphStructureException):
    """The graph is not the graph of a simplicial polyhedron (a sphere)"""


class GridStructureException(GraphStructureException):
    """The mesh does not have the connectivity of a generated torus grid"""


class InvalidMeshException(ValueError):
    """Face indices are out of range or a face repeats a vertex"""


class ObjParseException(ValueError):
    """A Wavefront OBJ file could not be parsed"""

    def __init__(self, message: str, line_number: Optional[int] = None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


class DegenerateTriangleException(ValueError):
    """A triangle is (nearly) collinear so its circumcircle is undefined"""

    def __init__(
        self,
        message: str,
        faces: Optional[List[int]] = None,
        edges: Optional[List[int]] = None,
    ):
        super().__init__(message)
        self.faces = faces or []
        self.edges = edges or []


class DegeneratePointSetException(ValueError):
    """All points are coplanar (or coincide) so there is no 3-dimensional hull"""


class VertexAtCenterException(ValueError):
    """A vertex coincides with the center of a sphere inversion"""


class NonPositiveWeightException(ValueError):
    """Cycle weights must be strictly positive"""


class SingularSystemException(ArithmeticError):
    """A linear system that should be positive definite could not be factorized"""


class QPIterationLimitException(ArithmeticError):
    """The active-set method did not terminate within its iteration limit"""

    def __init__(self, message: str, best_iterate: np.ndarray):
        super().__init__(message)
        self.best_iterate = best_iterate
