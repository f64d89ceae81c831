"""Tests for the run configuration"""

import pytest
from qcalib import EnergyKind, ReportFormat, RunConfig


def test_yaml_round_trip(tmp_path, obj_path, tetrahedron):
    """Settings saved to yaml load back unchanged"""
    settings = RunConfig(
        input=obj_path(tetrahedron),
        functional=EnergyKind.W,
        steps=12,
        threshold=0.01,
        format=ReportFormat.csv,
    )
    path = tmp_path / "run.yaml"
    settings.to_yaml(path)
    assert RunConfig.from_yaml(path) == settings


def test_overrides_win_unless_none(tmp_path):
    """Flags given on the command line replace values from the file"""
    path = tmp_path / "run.yaml"
    path.write_text("steps: 10\ngtol: 1.0e-6\n", encoding="utf-8")
    settings = RunConfig.from_yaml(path, steps=20, gtol=None)
    assert settings.steps == 20
    assert settings.gtol == 1e-6
    optimizer = settings.optimization_config()
    assert optimizer.max_steps == 20
    assert optimizer.kind == EnergyKind.W2


def test_empty_yaml_gives_defaults(tmp_path):
    """An empty file is an empty set of settings"""
    path = tmp_path / "run.yaml"
    path.write_text("", encoding="utf-8")
    assert RunConfig.from_yaml(path) == RunConfig()


@pytest.mark.parametrize(
    "content",
    ["- 1\n- 2\n", "steps: 0\n", "functional: W3\n", "unknown: 1\n", "gtol: -1.0\n"],
)
def test_invalid_yaml(tmp_path, content):
    """Lists, out of range values and unknown keys are rejected"""
    path = tmp_path / "run.yaml"
    path.write_text(content, encoding="utf-8")
    with pytest.raises(ValueError):
        RunConfig.from_yaml(path)


def test_paths_are_checked(tmp_path):
    """Inputs must exist and outputs need an existing directory"""
    with pytest.raises(ValueError):
        RunConfig(input=tmp_path / "missing.obj")
    with pytest.raises(ValueError):
        RunConfig(out=tmp_path / "missing" / "mesh.obj")
    assert RunConfig(trace=tmp_path / "trace.csv").trace == tmp_path / "trace.csv"
