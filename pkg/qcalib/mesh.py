"""Triangle meshes, their topology and the graph data of their edge graph"""

from functools import cached_property
from typing import Dict, FrozenSet, List, Optional, Tuple

import networkx as nx
import numpy as np
import numpy.typing as npt
import pydantic
from scipy import sparse

from .exception import (
    BoundaryPresentException,
    GraphStructureException,
    InconsistentOrientationException,
    InvalidMeshException,
    NonManifoldEdgeException,
)
from .types import AdjList, Edge, Face, Vertex, VertexList
from .utils import adjacency_list_from_edge_list, bounding_box_diagonal

# a triangle is degenerate when its area is below this fraction of its longest edge squared
DEGENERACY_THRESHOLD = 1e-12

# pylint: disable=too-few-public-methods


def _read_only(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


class TriangleMesh(pydantic.BaseModel):
    """Indexed vertex positions and an oriented list of triangles.

    Arrays are copied on construction and made read-only.
    """

    positions: npt.NDArray[np.float64]
    faces: npt.NDArray[np.int64]

    # pydantic model config
    model_config = {"arbitrary_types_allowed": True, "frozen": True}

    @pydantic.field_validator("positions", mode="before")
    @classmethod
    def _as_position_array(cls, value):
        positions = np.array(value, dtype=np.float64)
        if positions.size == 0:
            positions = positions.reshape(0, 3)
        if positions.ndim != 2 or positions.shape[1] != 3:
            raise ValueError("positions must be a list of 3-vectors")
        return _read_only(positions)

    @pydantic.field_validator("faces", mode="before")
    @classmethod
    def _as_face_array(cls, value):
        faces = np.array(value, dtype=np.int64)
        if faces.size == 0:
            faces = faces.reshape(0, 3)
        if faces.ndim != 2 or faces.shape[1] != 3:
            raise ValueError("faces must be a list of vertex index triples")
        return _read_only(faces)

    @pydantic.model_validator(mode="after")
    def _check_faces(self):
        if self.faces.size == 0:
            return self
        if self.faces.min() < 0 or self.faces.max() >= len(self.positions):
            raise InvalidMeshException("face index out of range of the vertex list")
        a, b, c = self.faces.T
        if np.any((a == b) | (b == c) | (c == a)):
            raise InvalidMeshException("a face repeats a vertex")
        return self

    @property
    def num_vertices(self) -> int:
        """Number of vertices"""
        return len(self.positions)

    @property
    def num_faces(self) -> int:
        """Number of faces"""
        return len(self.faces)

    def bounding_box_diagonal(self) -> float:
        """Length of the diagonal of the axis aligned bounding box"""
        return bounding_box_diagonal(self.positions)

    def with_positions(self, positions: npt.ArrayLike) -> "TriangleMesh":
        """A mesh with the same connectivity and new vertex positions"""
        return TriangleMesh(positions=positions, faces=self.faces)


class EdgeRecord(pydantic.BaseModel):
    """An edge with endpoints i, j and the vertices k, l opposite to it.

    The incident faces are (i, j, k) and (j, i, l) with the cyclic orientation
    of the mesh. Boundary edges have a single face and no vertex l.
    """

    i: Vertex
    j: Vertex
    k: Vertex
    l: Optional[Vertex] = None
    f1: int
    f2: Optional[int] = None

    model_config = {"frozen": True}

    @pydantic.model_validator(mode="after")
    def _check_opposite(self):
        if (self.l is None) != (self.f2 is None):
            raise ValueError("an interior edge needs both its opposite vertex and face")
        return self

    @property
    def boundary(self) -> bool:
        """True if the edge has only one incident face"""
        return self.l is None

    @property
    def endpoints(self) -> Edge:
        """The endpoints (i, j)"""
        return (self.i, self.j)


class MeshTopology(pydantic.BaseModel):
    """Edges, valences and Euler characteristic of a triangle mesh"""

    num_vertices: int
    num_faces: int
    edges: List[EdgeRecord]
    valences: npt.NDArray[np.int64]
    euler_characteristic: int
    boundary_vertices: FrozenSet[Vertex]

    model_config = {"arbitrary_types_allowed": True}

    @property
    def num_edges(self) -> int:
        """Number of edges"""
        return len(self.edges)

    @property
    def is_closed(self) -> bool:
        """True if no edge lies on the boundary"""
        return not self.boundary_vertices

    @property
    def num_interior_vertices(self) -> int:
        """Number of vertices that are not on the boundary"""
        return self.num_vertices - len(self.boundary_vertices)

    @property
    def genus(self) -> Optional[int]:
        """Genus of a closed orientable surface, None if the mesh has boundary"""
        if not self.is_closed:
            return None
        return (2 - self.euler_characteristic) // 2

    @cached_property
    def edge_vertices(self) -> npt.NDArray[np.int64]:
        """Array of shape (|E|, 2) with the endpoints (i, j) of every edge"""
        return _read_only(
            np.array([edge.endpoints for edge in self.edges], dtype=np.int64).reshape(-1, 2)
        )

    @cached_property
    def interior_edges(self) -> npt.NDArray[np.int64]:
        """Indices of the edges with two incident faces"""
        return _read_only(
            np.array(
                [index for index, edge in enumerate(self.edges) if not edge.boundary],
                dtype=np.int64,
            )
        )

    @cached_property
    def interior_quadruples(self) -> npt.NDArray[np.int64]:
        """Array of shape (#interior edges, 4) with rows (i, j, k, l)"""
        rows = [
            (edge.i, edge.j, edge.k, edge.l)
            for edge in self.edges
            if not edge.boundary
        ]
        return _read_only(np.array(rows, dtype=np.int64).reshape(-1, 4))

    @cached_property
    def interior_face_pairs(self) -> npt.NDArray[np.int64]:
        """Array of shape (#interior edges, 2) with the incident faces (f1, f2)"""
        rows = [(edge.f1, edge.f2) for edge in self.edges if not edge.boundary]
        return _read_only(np.array(rows, dtype=np.int64).reshape(-1, 2))

    def adjacency_list(self) -> AdjList:
        """Neighbours of every vertex"""
        adjacency = adjacency_list_from_edge_list(
            [edge.endpoints for edge in self.edges]
        )
        for vertex in range(self.num_vertices):
            adjacency.setdefault(vertex, [])
        return adjacency

    def vertex_stars(self) -> List[List[int]]:
        """Indices of the edges incident with each vertex"""
        stars: List[List[int]] = [[] for _ in range(self.num_vertices)]
        for index, edge in enumerate(self.edges):
            stars[edge.i].append(index)
            stars[edge.j].append(index)
        return stars


class GraphData(pydantic.BaseModel):
    """Incidence matrix M and edge weights n_i + n_j of the edge graph of a closed mesh"""

    incidence: sparse.csr_matrix
    edge_weights: npt.NDArray[np.float64]
    valences: npt.NDArray[np.int64]
    edges: npt.NDArray[np.int64]
    edge_faces: npt.NDArray[np.int64]
    euler_characteristic: int

    model_config = {"arbitrary_types_allowed": True}

    @property
    def num_vertices(self) -> int:
        """Number of rows of M"""
        return self.incidence.shape[0]

    @property
    def num_edges(self) -> int:
        """Number of columns of M"""
        return self.incidence.shape[1]

    @property
    def weight_matrix(self) -> sparse.dia_matrix:
        """The diagonal matrix N with n_i + n_j on the diagonal"""
        return sparse.diags(self.edge_weights)

    @property
    def num_faces(self) -> int:
        """Number of faces of the closed mesh"""
        return self.euler_characteristic - self.num_vertices + self.num_edges

    def incidence_dense(self) -> npt.NDArray[np.float64]:
        """M as a dense array"""
        return self.incidence.toarray()

    def dual_graph(self) -> nx.Graph:
        """Graph of the dual polyhedron

        Returns:
            Graph whose nodes are faces. Every arc joins the two faces of a primal edge
            and carries the primal edge index as "edge" and its endpoints as "endpoints".
        """
        G = nx.Graph()
        G.add_nodes_from(range(self.num_faces))
        for index, ((i, j), (f1, f2)) in enumerate(
            zip(self.edges.tolist(), self.edge_faces.tolist())
        ):
            G.add_edge(f1, f2, edge=index, endpoints=(i, j))
        return G


def _third_vertex(face: Face, u: Vertex, v: Vertex) -> Vertex:
    for w in face:
        if w not in (u, v):
            return w
    raise GraphStructureException(f"Face {face} does not contain a third vertex")


def build_topology(mesh: TriangleMesh) -> MeshTopology:
    """Extract the edge records, valences and Euler characteristic of a mesh

    Args:
        mesh: A manifold, consistently oriented triangle mesh (boundary allowed)

    Returns:
        Topology with one record per undirected edge, in order of first appearance

    Raises:
        NonManifoldEdgeException: If an edge is shared by more than two faces
        InconsistentOrientationException: If two faces traverse an edge in the same direction
    """
    half_edges: Dict[Edge, List[Tuple[Vertex, Vertex, int]]] = {}
    for f, face in enumerate(mesh.faces.tolist()):
        a, b, c = face
        for u, v in ((a, b), (b, c), (c, a)):
            key = (min(u, v), max(u, v))
            half_edges.setdefault(key, []).append((u, v, f))

    edges: List[EdgeRecord] = []
    valences = np.zeros(mesh.num_vertices, dtype=np.int64)
    boundary_vertices = set()
    faces = mesh.faces.tolist()
    for key, incident in half_edges.items():
        if len(incident) > 2:
            message = f"Edge {key} is shared by {len(incident)} faces"
            raise NonManifoldEdgeException(message)
        u, v, f1 = incident[0]
        k = _third_vertex(faces[f1], u, v)
        if len(incident) == 1:
            edges.append(EdgeRecord(i=u, j=v, k=k, f1=f1))
            boundary_vertices.update((u, v))
        else:
            s, t, f2 = incident[1]
            if (s, t) != (v, u):
                message = f"Faces {f1} and {f2} traverse edge {key} in the same direction"
                raise InconsistentOrientationException(message)
            l = _third_vertex(faces[f2], s, t)
            edges.append(EdgeRecord(i=u, j=v, k=k, l=l, f1=f1, f2=f2))
        valences[u] += 1
        valences[v] += 1

    euler = mesh.num_vertices - len(edges) + mesh.num_faces
    return MeshTopology(
        num_vertices=mesh.num_vertices,
        num_faces=mesh.num_faces,
        edges=edges,
        valences=_read_only(valences),
        euler_characteristic=euler,
        boundary_vertices=frozenset(boundary_vertices),
    )


def _require_closed(topology: MeshTopology, operation: str) -> None:
    if not topology.is_closed:
        message = f"{operation} is only defined for closed meshes, "
        message += f"but the mesh has {len(topology.boundary_vertices)} boundary vertices"
        raise BoundaryPresentException(message)


def incidence_and_weights(topology: MeshTopology) -> GraphData:
    """Incidence matrix M and the diagonal of N for a closed mesh

    Args:
        topology: Topology of a closed mesh

    Returns:
        Graph data whose column e_ij of M has a one in rows i and j,
        and whose edge weight for e_ij is n_i + n_j

    Raises:
        BoundaryPresentException: If the mesh has boundary
    """
    _require_closed(topology, "The incidence matrix analysis")
    edges = topology.edge_vertices
    num_edges = len(edges)
    rows = edges.reshape(-1)
    cols = np.repeat(np.arange(num_edges), 2)
    data = np.ones(2 * num_edges)
    incidence = sparse.csr_matrix(
        (data, (rows, cols)), shape=(topology.num_vertices, num_edges)
    )
    weights = (topology.valences[edges[:, 0]] + topology.valences[edges[:, 1]]).astype(
        np.float64
    )
    return GraphData(
        incidence=incidence,
        edge_weights=_read_only(weights),
        valences=topology.valences,
        edges=edges,
        edge_faces=topology.interior_face_pairs,
        euler_characteristic=topology.euler_characteristic,
    )


def triangle_quality(
    positions: npt.NDArray[np.float64], faces: npt.NDArray[np.int64]
) -> npt.NDArray[np.float64]:
    """Area of every triangle divided by its longest edge squared"""
    a = positions[faces[:, 0]]
    b = positions[faces[:, 1]]
    c = positions[faces[:, 2]]
    area = 0.5 * np.linalg.norm(np.cross(b - a, c - a), axis=1)
    longest = np.max(
        np.stack(
            [
                np.einsum("ij,ij->i", b - a, b - a),
                np.einsum("ij,ij->i", c - b, c - b),
                np.einsum("ij,ij->i", a - c, a - c),
            ]
        ),
        axis=0,
    )
    with np.errstate(divide="ignore", invalid="ignore"):
        quality = np.where(longest > 0.0, area / longest, 0.0)
    return quality


def degenerate_faces(mesh: TriangleMesh) -> VertexList:
    """Indices of the faces whose quality is below the degeneracy threshold"""
    quality = triangle_quality(mesh.positions, mesh.faces)
    return np.flatnonzero(quality < DEGENERACY_THRESHOLD).tolist()


def flip_edge(mesh: TriangleMesh, topology: MeshTopology, edge_index: int) -> TriangleMesh:
    """Replace the interior edge (i, j) by the edge (k, l) joining its opposite vertices

    Args:
        mesh: Triangle mesh
        topology: Topology of the mesh
        edge_index: Index of an interior edge

    Returns:
        A new mesh with the same positions where faces (i, j, k), (j, i, l)
        are replaced by (i, l, k), (l, j, k)

    Raises:
        GraphStructureException: If the edge is on the boundary or k and l are already adjacent
    """
    edge = topology.edges[edge_index]
    if edge.boundary:
        raise GraphStructureException(f"Boundary edge {edge.endpoints} cannot be flipped")
    assert edge.l is not None and edge.f2 is not None
    if edge.l in topology.adjacency_list()[edge.k]:
        message = f"Flipping {edge.endpoints} would duplicate edge ({edge.k}, {edge.l})"
        raise GraphStructureException(message)
    faces = mesh.faces.copy()
    faces[edge.f1] = (edge.i, edge.l, edge.k)
    faces[edge.f2] = (edge.l, edge.j, edge.k)
    return TriangleMesh(positions=mesh.positions, faces=faces)
