"""Command line interface: generate meshes, evaluate and minimize functionals, analyse graphs"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, Optional, Tuple

import networkx as nx
import numpy as np
import pandas as pd
import typer

from .circle import angle_vector
from .config import RunConfig
from .diagnostics import INSCRIBED_TOLERANCE, report
from .energy import energy
from .generate import (
    generate_icosahedron,
    generate_octahedron,
    generate_random_inscribed,
    generate_tetrahedron,
    generate_torus,
)
from .mesh import MeshTopology, TriangleMesh, build_topology, incidence_and_weights
from .optimize import fix_boundary_collar, minimize, write_trace
from .quadprog import check_realizability, compare_angle_columns
from .types import EnergyKind, OptimizationStatus, ReportFormat, SolidName
from .wavefront import load_obj, save_obj

logger = logging.getLogger(__name__)

EXIT_SUCCESS = 0
EXIT_INPUT_ERROR = 2
EXIT_DEGENERATED = 3
EXIT_STALLED = 4

STATUS_EXIT_CODES = {
    OptimizationStatus.converged: EXIT_SUCCESS,
    OptimizationStatus.step_limit: EXIT_SUCCESS,
    OptimizationStatus.degenerated: EXIT_DEGENERATED,
    OptimizationStatus.stalled: EXIT_STALLED,
}

# errors caused by the input files or flags
INPUT_ERRORS = (ValueError, OSError, nx.NetworkXException)

app = typer.Typer(name="qcalib")


@app.callback()
def main(
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Log progress of every step"),
    quiet: bool = typer.Option(False, "--quiet", "-q", help="Log warnings only"),
):
    """Circumcircle angle functionals on triangle meshes"""
    level = logging.INFO
    if verbose:
        level = logging.DEBUG
    elif quiet:
        level = logging.WARNING
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


def _fail(error: Exception) -> typer.Exit:
    typer.echo(f"error: {error}", err=True)
    return typer.Exit(code=EXIT_INPUT_ERROR)


def _run_config(config: Optional[Path], **flags: Any) -> RunConfig:
    """Settings from the yaml file with the given flags on top"""
    if config is not None:
        return RunConfig.from_yaml(config, **flags)
    return RunConfig(**{key: value for key, value in flags.items() if value is not None})


def _load(path: Path) -> Tuple[TriangleMesh, MeshTopology]:
    mesh = load_obj(path)
    return mesh, build_topology(mesh)


def _emit(record: Dict[str, Any], output_format: ReportFormat) -> None:
    if output_format == ReportFormat.json:
        typer.echo(json.dumps(record, indent=2, default=str))
    elif output_format == ReportFormat.csv:
        typer.echo(pd.DataFrame([record]).to_csv(index=False), nl=False)
    else:
        typer.echo("\n".join(f"{key}: {value}" for key, value in record.items()))


@app.command(name="generate")
def cmd_generate(
    kind: SolidName,
    out: Path = typer.Option(..., "--out", help="Path of the OBJ file to write"),
    count: int = typer.Option(50, "--count", help="Number of ellipsoid points"),
    semiaxes: Tuple[float, float, float] = typer.Option(
        (1.0, 1.0, 2.0), "--semiaxes", help="Semiaxes of the ellipsoid"
    ),
    seed: int = typer.Option(0, "--seed", help="Seed of the ellipsoid sample"),
    major: float = typer.Option(2.0, "--R", help="Major radius of the torus"),
    minor: float = typer.Option(1.0, "--r", help="Minor radius of the torus"),
    m: int = typer.Option(16, "--m", help="Steps around the torus axis"),
    n: int = typer.Option(16, "--n", help="Steps around each minor circle"),
    staggered: bool = typer.Option(
        True, "--staggered/--aligned", help="Alternate the quad diagonals of the torus grid"
    ),
):
    """Generate a mesh and write it as OBJ"""
    try:
        RunConfig(out=out, seed=seed)
        if kind == SolidName.tetra:
            mesh = generate_tetrahedron()
        elif kind == SolidName.octa:
            mesh = generate_octahedron()
        elif kind == SolidName.icosa:
            mesh = generate_icosahedron()
        elif kind == SolidName.torus:
            mesh = generate_torus(major, minor, m, n, staggered=staggered)
        else:
            mesh = generate_random_inscribed(count, semiaxes=semiaxes, seed=seed)
            typer.echo(f"seed: {seed}")
        topology = build_topology(mesh)
        save_obj(mesh, out)
    except INPUT_ERRORS as error:
        raise _fail(error) from error
    typer.echo(f"vertices: {mesh.num_vertices}")
    typer.echo(f"edges: {topology.num_edges}")
    typer.echo(f"faces: {mesh.num_faces}")


@app.command(name="energy")
def cmd_energy(
    mesh_path: Path = typer.Argument(..., help="OBJ file of the mesh"),
    functional: EnergyKind = typer.Option(EnergyKind.W2, "--functional", help="Functional"),
    output_format: ReportFormat = typer.Option(ReportFormat.text, "--format"),
):
    """Evaluate a functional, its constant and the range of the angles"""
    try:
        RunConfig(input=mesh_path)
        mesh, topology = _load(mesh_path)
        value = energy(functional, mesh, topology)
        angles = angle_vector(mesh, topology)
    except INPUT_ERRORS as error:
        raise _fail(error) from error
    if value.constant_omitted:
        typer.echo(
            f"warning: mesh has boundary, {functional} is reported without its constant",
            err=True,
        )
    record = {
        "functional": str(functional),
        "energy": value.value,
        "constant": value.constant,
        "closed": value.closed,
        "beta_min": angles.min() if len(angles) else None,
        "beta_max": angles.max() if len(angles) else None,
    }
    _emit(record, output_format)


@app.command(name="minimize")
def cmd_minimize(
    mesh_path: Path = typer.Argument(..., help="OBJ file of the initial mesh"),
    functional: Optional[EnergyKind] = typer.Option(None, "--functional"),
    steps: Optional[int] = typer.Option(None, "--steps", help="Maximum number of steps"),
    gtol: Optional[float] = typer.Option(None, "--gtol", help="Gradient norm tolerance"),
    threshold: Optional[float] = typer.Option(
        None, "--threshold", help="Angles below this do not contribute to the gradient of W"
    ),
    fix_boundary: bool = typer.Option(
        False, "--fix-boundary", help="Hold the boundary vertices and their neighbours"
    ),
    out: Optional[Path] = typer.Option(None, "--out", help="OBJ file of the minimizer"),
    trace: Optional[Path] = typer.Option(None, "--trace", help="CSV file of the trace"),
    output_format: Optional[ReportFormat] = typer.Option(None, "--format"),
    config: Optional[Path] = typer.Option(None, "--config", help="YAML file of settings"),
):
    """Minimize a functional and report the diagnostics of the result

    Exit code 3 means a triangle or edge collapsed, 4 that the line search stalled.
    """
    try:
        settings = _run_config(
            config,
            command="minimize",
            input=mesh_path,
            functional=functional,
            steps=steps,
            gtol=gtol,
            threshold=threshold,
            fix_boundary=fix_boundary or None,
            out=out,
            trace=trace,
            format=output_format,
        )
        mesh, topology = _load(settings.input)
        fixed = fix_boundary_collar(topology) if settings.fix_boundary else set()
        graph = incidence_and_weights(topology) if topology.is_closed else None
        result = minimize(
            mesh,
            topology,
            graph=graph,
            config=settings.optimization_config(fixed=frozenset(fixed)),
        )
    except INPUT_ERRORS as error:
        raise _fail(error) from error

    out_path = settings.out or settings.input.with_suffix(".min.obj")
    save_obj(result.mesh, out_path)
    if settings.trace is not None:
        write_trace(result.trace, settings.trace)
    diagnostics = report(result.mesh, topology, graph)
    record = {
        "status": str(result.status),
        "steps": result.steps,
        "energy": result.energy,
        "grad_norm": result.grad_norm,
        "out": str(out_path),
        **diagnostics.to_record(),
    }
    _emit(record, settings.format)
    code = STATUS_EXIT_CODES[result.status]
    if code != EXIT_SUCCESS:
        raise typer.Exit(code=code)


@app.command(name="analyze-graph")
def cmd_analyze_graph(
    mesh_path: Path = typer.Argument(..., help="OBJ file of a closed mesh of genus zero"),
    weighted: bool = typer.Option(False, "--weighted", help="Analyse the weighted program"),
    realization: Optional[Path] = typer.Option(
        None,
        "--realization",
        help="OBJ file with the same faces, e.g. a minimizer, whose angles are compared",
    ),
    output_format: ReportFormat = typer.Option(ReportFormat.text, "--format"),
):
    """Solve the quadratic programs of the graph of a mesh and predict its minimizer

    With a realization the sorted geometric angles are set against the abstract angles.
    """
    comparison: Optional[pd.DataFrame] = None
    try:
        RunConfig(input=mesh_path, weighted=weighted)
        mesh, topology = _load(mesh_path)
        qp_report = check_realizability(incidence_and_weights(topology), weighted=weighted)
        if realization is not None:
            realized = load_obj(realization)
            if not np.array_equal(realized.faces, mesh.faces):
                raise ValueError(f"Faces of {realization} differ from the faces of {mesh_path}")
            geometric = angle_vector(realized, topology).values
            comparison = compare_angle_columns(geometric, qp_report.angles)
    except (INPUT_ERRORS + (ArithmeticError,)) as error:
        raise _fail(error) from error
    if output_format == ReportFormat.json:
        record = qp_report.to_record()
        if comparison is not None:
            record["max_angle_difference"] = float(comparison["difference"].abs().max())
            record["sign_flips"] = int(comparison["sign_flip"].sum())
            record["comparison"] = comparison.to_dict(orient="list")
        typer.echo(json.dumps(record, indent=2, default=str))
    elif output_format == ReportFormat.csv:
        table = qp_report.angle_table() if comparison is None else comparison
        typer.echo(table.to_csv(index=False), nl=False)
    else:
        typer.echo(qp_report.to_text())
        if comparison is not None:
            typer.echo(f"max_angle_difference: {comparison['difference'].abs().max()}")
            typer.echo(f"sign_flips: {int(comparison['sign_flip'].sum())}")
            typer.echo(comparison.to_string(index=False))


@app.command(name="diagnose")
def cmd_diagnose(
    mesh_path: Path = typer.Argument(..., help="OBJ file of the mesh"),
    torus_m: Optional[int] = typer.Option(None, "--torus-m", help="Minor loops of a torus grid"),
    torus_n: Optional[int] = typer.Option(None, "--torus-n", help="Vertices per minor loop"),
    tolerance: float = typer.Option(
        INSCRIBED_TOLERANCE, "--tolerance", help="Largest sphere fit deviation of inscribed meshes"
    ),
    output_format: ReportFormat = typer.Option(ReportFormat.text, "--format"),
):
    """Report energies, sphere fit, convexity and the Delaunay verdict of a mesh"""
    try:
        RunConfig(input=mesh_path)
        mesh, topology = _load(mesh_path)
    except INPUT_ERRORS as error:
        raise _fail(error) from error
    grid = (torus_m, torus_n) if torus_m is not None and torus_n is not None else None
    diagnostics = report(mesh, topology, torus_grid=grid, inscribed_tolerance=tolerance)
    if output_format == ReportFormat.text:
        typer.echo(diagnostics.to_text())
    else:
        _emit(diagnostics.to_record(), output_format)


if __name__ == "__main__":
    app()
