"""Tests for the minimizer"""

import math

import numpy as np
import pandas as pd
import pytest
from qcalib import (
    ClosedMeshException,
    DegenerateTriangleException,
    EnergyKind,
    GradientField,
    GradientMethod,
    OptimizationConfig,
    OptimizationStatus,
    PredictedType,
    TriangleMesh,
    angle_vector,
    build_topology,
    check_realizability,
    compare_angle_columns,
    energy_W,
    energy_W2,
    fit_sphere,
    fix_boundary_collar,
    generate_random_inscribed,
    generate_stacked,
    generate_torus,
    incidence_and_weights,
    minimize,
    project_gradient,
    torus_radii_ratio,
    write_trace,
)
from qcalib.optimize import TRACE_COLUMNS


def test_boundary_collar(disk):
    """The collar of a disk is its two outer rings"""
    topology = build_topology(disk)
    assert fix_boundary_collar(topology) == set(range(25, 49))


def test_closed_mesh_has_no_collar(tetrahedron):
    """Fixing the boundary of a closed mesh is an error"""
    with pytest.raises(ClosedMeshException):
        fix_boundary_collar(build_topology(tetrahedron))


def test_project_gradient():
    """Rows of fixed vertices are zeroed"""
    field = GradientField(kind=EnergyKind.W2, vectors=np.ones((4, 3)))
    projected = project_gradient(field, [1, 3])
    assert np.array_equal(projected.vectors[[1, 3]], np.zeros((2, 3)))
    assert np.array_equal(projected.vectors[[0, 2]], np.ones((2, 3)))
    assert np.array_equal(field.vectors, np.ones((4, 3)))


@pytest.mark.parametrize("kind", [EnergyKind.W2, EnergyKind.W2w])
def test_minimize_perturbed_icosahedron(perturbed_mesh, kind):
    """A perturbed icosahedron returns to a convex inscribed realization"""
    mesh = perturbed_mesh(0)
    topology = build_topology(mesh)
    config = OptimizationConfig(kind=kind, max_steps=2000, gtol=1e-9)
    result = minimize(mesh, topology, config=config)
    assert result.status in (OptimizationStatus.converged, OptimizationStatus.step_limit)
    energies = [record.energy for record in result.trace]
    assert energies[0] > 1e-3
    assert all(b <= a + 1e-12 for a, b in zip(energies, energies[1:]))
    assert result.energy < 1e-8
    assert energy_W(result.mesh, topology).value < 1e-4
    assert np.array_equal(result.mesh.faces, mesh.faces)


def test_minimize_keeps_fixed_vertices(disk):
    """Fixed vertices do not move and the energy does not increase"""
    topology = build_topology(disk)
    fixed = frozenset(fix_boundary_collar(topology))
    config = OptimizationConfig(kind=EnergyKind.W2, max_steps=50, fixed=fixed)
    result = minimize(disk, topology, config=config)
    indices = sorted(fixed)
    assert np.array_equal(result.mesh.positions[indices], disk.positions[indices])
    assert result.energy <= energy_W2(disk, topology).value + 1e-12
    assert result.steps <= 50


def test_minimize_with_finite_differences(perturbed_mesh):
    """The slow gradient path decreases the energy as well"""
    mesh = perturbed_mesh(1)
    topology = build_topology(mesh)
    config = OptimizationConfig(
        kind=EnergyKind.W2, max_steps=5, gradient_method=GradientMethod.finite_difference
    )
    result = minimize(mesh, topology, config=config)
    assert result.steps == 5
    assert result.status == OptimizationStatus.step_limit
    assert result.energy < result.trace[0].energy


def test_trace_file(tmp_path, perturbed_mesh):
    """The trace is written as CSV with a fixed header"""
    mesh = perturbed_mesh(2)
    topology = build_topology(mesh)
    result = minimize(mesh, topology, config=OptimizationConfig(max_steps=10, trace_interval=3))
    path = tmp_path / "trace.csv"
    write_trace(result.trace, path)
    frame = pd.read_csv(path)
    assert list(frame.columns) == TRACE_COLUMNS
    assert frame["step"].tolist() == [0, 3, 6, 9, 10]
    assert frame["energy"].is_monotonic_decreasing
    assert result.trace_dataframe().shape == frame.shape


def test_minimize_rejects_degenerate_input():
    """A collinear face next to an interior edge cannot be evaluated"""
    mesh = TriangleMesh(
        positions=[[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [2.0, 0.0, 0.0], [0.5, -1.0, 0.0]],
        faces=[(0, 1, 2), (1, 0, 3)],
    )
    with pytest.raises(DegenerateTriangleException):
        minimize(mesh, build_topology(mesh))


def test_minimize_rejects_unknown_fixed_vertex(tetrahedron):
    """Fixed vertices must exist"""
    config = OptimizationConfig(fixed=frozenset({7}))
    with pytest.raises(ValueError):
        minimize(tetrahedron, build_topology(tetrahedron), config=config)


def test_converged_at_start(tetrahedron):
    """A minimizer is recognised before any step"""
    result = minimize(tetrahedron, build_topology(tetrahedron))
    assert result.status == OptimizationStatus.converged
    assert result.steps == 0
    assert len(result.trace) == 1


@pytest.mark.parametrize("armijo,curvature", [(0.5, 0.4), (0.5, 0.5)])
def test_line_search_parameters(armijo, curvature):
    """Sufficient decrease must be weaker than the curvature condition"""
    with pytest.raises(ValueError):
        OptimizationConfig(armijo=armijo, curvature=curvature)


def test_ellipsoid_experiment(ellipsoid_hull):
    """Within a hundred steps W2 makes the hull of ellipsoid points inscribed"""
    topology = build_topology(ellipsoid_hull)
    graph = incidence_and_weights(topology)
    quadratic = minimize(
        ellipsoid_hull,
        topology,
        graph=graph,
        config=OptimizationConfig(kind=EnergyKind.W2, max_steps=100, gtol=1e-12),
    )
    assert quadratic.status != OptimizationStatus.degenerated
    assert quadratic.steps <= 100
    quadratic_w = energy_W(quadratic.mesh, topology).value
    assert quadratic_w <= 1e-6
    assert fit_sphere(quadratic.mesh.positions).deviation <= 1e-3

    willmore = minimize(
        ellipsoid_hull,
        topology,
        graph=graph,
        config=OptimizationConfig(kind=EnergyKind.W, max_steps=100, w_threshold=1e-3),
    )
    assert willmore.energy >= 10.0 * max(quadratic_w, 1e-12)


def test_torus_experiment():
    """The W2 minimizing torus has radii in ratio square root of two"""
    mesh = generate_torus(2.0, 1.0, 14, 16)
    topology = build_topology(mesh)
    config = OptimizationConfig(kind=EnergyKind.W2, max_steps=4000, gtol=1e-8)
    result = minimize(mesh, topology, config=config)
    assert result.status != OptimizationStatus.degenerated
    energies = [record.energy for record in result.trace]
    assert all(b <= a + 1e-9 for a, b in zip(energies, energies[1:]))
    assert result.energy < energy_W2(mesh, topology).value
    assert torus_radii_ratio(result.mesh, 14, 16) == pytest.approx(math.sqrt(2.0), rel=0.02)


@pytest.mark.slow
def test_refined_torus_energy():
    """On a finer grid the minimum of W2 on the torus is close to 4 pi^2"""
    mesh = generate_torus(2.0, 1.0, 21, 24)
    topology = build_topology(mesh)
    config = OptimizationConfig(kind=EnergyKind.W2, max_steps=8000, gtol=1e-8)
    result = minimize(mesh, topology, config=config)
    assert result.status != OptimizationStatus.degenerated
    assert result.energy == pytest.approx(4.0 * math.pi**2, rel=0.05)
    assert torus_radii_ratio(result.mesh, 21, 24) == pytest.approx(math.sqrt(2.0), rel=0.02)


@pytest.mark.slow
def test_collapse_pathway():
    """A graph that fails the cycle condition makes the minimizer degenerate"""
    statuses = []
    for count in range(6, 13):
        for seed in range(4):
            mesh = generate_stacked(count, seed=seed)
            topology = build_topology(mesh)
            graph = incidence_and_weights(topology)
            qp_report = check_realizability(graph)
            if qp_report.predicted != PredictedType.collapse_expected:
                continue
            config = OptimizationConfig(kind=EnergyKind.W2, max_steps=2000)
            result = minimize(mesh, topology, graph=graph, config=config)
            statuses.append(result.status)
            if result.status == OptimizationStatus.degenerated:
                assert result.collapsed_edges or result.degenerate_faces
                return
    pytest.fail(f"No graph failing the cycle condition degenerated, statuses {statuses}")


@pytest.mark.slow
def test_inscribed_hull_realizes_abstract_angles():
    """Geometric minimizers of W2 have the abstract angles of their graph"""
    matched = 0
    for seed in range(20):
        mesh = generate_random_inscribed(12, semiaxes=(1.0, 1.2, 0.9), seed=seed)
        topology = build_topology(mesh)
        graph = incidence_and_weights(topology)
        qp_report = check_realizability(graph)
        if qp_report.predicted != PredictedType.convex_inscribed_unique:
            continue
        result = minimize(
            mesh,
            topology,
            graph=graph,
            config=OptimizationConfig(kind=EnergyKind.W2, max_steps=1500, gtol=1e-11),
        )
        frame = compare_angle_columns(
            angle_vector(result.mesh, topology).values, qp_report.angles
        )
        assert frame["difference"].abs().max() < 1e-3
        assert not frame["sign_flip"].any()
        matched += 1
        if matched == 3:
            break
    assert matched == 3
