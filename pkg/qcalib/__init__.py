"""Quadratic circle-angles functionals and the discrete conformal Willmore energy"""

from .circle import (
    AngleVector,
    Circumcircle,
    angle_vector,
    beta,
    check_interior_faces,
    circumcircle,
    edge_tangents,
    sphere_inversion,
)
from .config import RunConfig
from .diagnostics import (
    DelaunayCheck,
    DiagnosticsReport,
    SphereFit,
    convexity_violations,
    fit_sphere,
    is_convex_position,
    is_delaunay_on_sphere,
    report,
    torus_radii_ratio,
)
from .energy import (
    EnergyValue,
    Functional,
    GradientField,
    edge_weights,
    energy,
    energy_and_angles,
    energy_constant,
    energy_W,
    energy_W2,
    energy_W2w,
    gradient,
    normalization_c,
    normalization_cw,
    weighted_edge_form,
    weighted_vertex_form,
)
from .exception import (
    BoundaryPresentException,
    ClosedMeshException,
    DegeneratePointSetException,
    DegenerateTriangleException,
    GraphStructureException,
    GridStructureException,
    InconsistentOrientationException,
    InvalidMeshException,
    NonManifoldEdgeException,
    NonPositiveWeightException,
    ObjParseException,
    QPIterationLimitException,
    SingularSystemException,
    UnsupportedTopologyException,
    VertexAtCenterException,
)
from .generate import (
    generate_disk,
    generate_icosahedron,
    generate_octahedron,
    generate_random_inscribed,
    generate_random_triangulation,
    generate_stacked,
    generate_tetrahedron,
    generate_torus,
    perturb_positions,
    torus_faces,
    torus_vertex,
)
from .hull import convex_hull
from .linalg import incidence_gram, spd_solve
from .mesh import (
    EdgeRecord,
    GraphData,
    MeshTopology,
    TriangleMesh,
    build_topology,
    degenerate_faces,
    flip_edge,
    incidence_and_weights,
    triangle_quality,
)
from .optimize import (
    OptimizationConfig,
    OptimizationResult,
    TraceRecord,
    fix_boundary_collar,
    minimize,
    project_gradient,
    trace_to_dataframe,
    write_trace,
)
from .quadprog import (
    CycleCertificate,
    QPReport,
    QPSolution,
    abstract_angles,
    angles_from_lambda,
    check_realizability,
    compare_angle_columns,
    kkt_residual,
    predict_type,
    rivin_cycle_check,
    signless_laplacian,
    solve_inequality_qp,
    solve_lambda,
)
from .types import (
    AdjList,
    Edge,
    EdgeList,
    EnergyKind,
    EvaluationMode,
    Face,
    GradientMethod,
    OptimizationStatus,
    PredictedType,
    ReportFormat,
    SolidName,
    StrEnumMixin,
    Vertex,
    VertexList,
)
from .utils import (
    adjacency_list_from_edge_list,
    bounding_box_diagonal,
)
from .walk import (
    close_cycle,
    edge_list_from_walk,
    is_simple_cycle,
    is_walk,
    walk_attribute,
)
from .wavefront import load_obj, save_obj

__all__ = [
    "AdjList",
    "AngleVector",
    "BoundaryPresentException",
    "Circumcircle",
    "ClosedMeshException",
    "CycleCertificate",
    "DegeneratePointSetException",
    "DegenerateTriangleException",
    "DelaunayCheck",
    "DiagnosticsReport",
    "Edge",
    "EdgeList",
    "EdgeRecord",
    "EnergyKind",
    "EnergyValue",
    "EvaluationMode",
    "Face",
    "Functional",
    "GradientField",
    "GradientMethod",
    "GraphData",
    "GraphStructureException",
    "GridStructureException",
    "InconsistentOrientationException",
    "InvalidMeshException",
    "MeshTopology",
    "NonManifoldEdgeException",
    "NonPositiveWeightException",
    "ObjParseException",
    "OptimizationConfig",
    "OptimizationResult",
    "OptimizationStatus",
    "PredictedType",
    "QPIterationLimitException",
    "QPReport",
    "QPSolution",
    "ReportFormat",
    "RunConfig",
    "SingularSystemException",
    "SolidName",
    "SphereFit",
    "StrEnumMixin",
    "TraceRecord",
    "TriangleMesh",
    "UnsupportedTopologyException",
    "Vertex",
    "VertexAtCenterException",
    "VertexList",
    "abstract_angles",
    "adjacency_list_from_edge_list",
    "angle_vector",
    "angles_from_lambda",
    "beta",
    "bounding_box_diagonal",
    "build_topology",
    "check_interior_faces",
    "check_realizability",
    "circumcircle",
    "close_cycle",
    "compare_angle_columns",
    "convex_hull",
    "convexity_violations",
    "degenerate_faces",
    "edge_list_from_walk",
    "edge_tangents",
    "edge_weights",
    "energy",
    "energy_and_angles",
    "energy_constant",
    "energy_W",
    "energy_W2",
    "energy_W2w",
    "fit_sphere",
    "fix_boundary_collar",
    "flip_edge",
    "generate_disk",
    "generate_icosahedron",
    "generate_octahedron",
    "generate_random_inscribed",
    "generate_random_triangulation",
    "generate_stacked",
    "generate_tetrahedron",
    "generate_torus",
    "gradient",
    "incidence_and_weights",
    "incidence_gram",
    "is_convex_position",
    "is_delaunay_on_sphere",
    "is_simple_cycle",
    "is_walk",
    "kkt_residual",
    "load_obj",
    "minimize",
    "normalization_c",
    "normalization_cw",
    "perturb_positions",
    "predict_type",
    "project_gradient",
    "report",
    "rivin_cycle_check",
    "save_obj",
    "signless_laplacian",
    "solve_inequality_qp",
    "solve_lambda",
    "spd_solve",
    "sphere_inversion",
    "torus_faces",
    "torus_radii_ratio",
    "torus_vertex",
    "trace_to_dataframe",
    "triangle_quality",
    "walk_attribute",
    "weighted_edge_form",
    "weighted_vertex_form",
    "write_trace",
]
