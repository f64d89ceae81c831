"""Symmetric positive definite solves with the incidence matrix of a graph"""

from typing import Union

import numpy as np
import numpy.typing as npt
from scipy import linalg, sparse
from scipy.sparse import linalg as splinalg

from .exception import SingularSystemException
from .mesh import GraphData

# systems with fewer rows are factorized densely
DENSE_LIMIT = 500

# a Cholesky factor with a relatively smaller diagonal entry marks a singular system
PIVOT_TOLERANCE = 1e-7

Matrix = Union[npt.NDArray[np.float64], sparse.spmatrix]


def incidence_gram(graph: GraphData, weighted: bool = False) -> sparse.csr_matrix:
    """The matrix M M^t, or M N^-1 M^t when weighted

    Args:
        graph: Incidence matrix and edge weights
        weighted: If true, scale column e of M by 1 / (n_i + n_j)

    Returns:
        Sparse symmetric matrix of shape (|V|, |V|)
    """
    incidence = graph.incidence
    if weighted:
        scaled = incidence @ sparse.diags(1.0 / graph.edge_weights)
        return sparse.csr_matrix(scaled @ incidence.T)
    return sparse.csr_matrix(incidence @ incidence.T)


def spd_solve(matrix: Matrix, rhs: npt.ArrayLike) -> npt.NDArray[np.float64]:
    """Solve A x = b for a symmetric positive definite A

    Small systems use a dense Cholesky factorization,
    large systems a sparse LU factorization.

    Args:
        matrix: Symmetric positive definite matrix, dense or sparse
        rhs: Right hand side

    Returns:
        Solution x

    Raises:
        SingularSystemException: If the matrix is singular or not positive definite
    """
    b = np.asarray(rhs, dtype=np.float64)
    size = matrix.shape[0]
    if size == 0:
        return np.zeros_like(b)
    if size < DENSE_LIMIT:
        dense = matrix.toarray() if sparse.issparse(matrix) else np.asarray(matrix)
        try:
            factor, lower = linalg.cho_factor(dense)
        except linalg.LinAlgError as error:
            raise SingularSystemException(
                f"Matrix of size {size} is not positive definite"
            ) from error
        pivots = np.abs(np.diag(factor))
        if pivots.min() <= PIVOT_TOLERANCE * pivots.max():
            raise SingularSystemException(f"Matrix of size {size} is singular")
        return linalg.cho_solve((factor, lower), b)
    try:
        factor = splinalg.splu(sparse.csc_matrix(matrix))
    except RuntimeError as error:
        raise SingularSystemException(f"Matrix of size {size} is singular") from error
    solution = factor.solve(b)
    if not np.all(np.isfinite(solution)):
        raise SingularSystemException(f"Matrix of size {size} is singular")
    return solution
