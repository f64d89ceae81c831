"""Run configuration of the command line, optionally loaded from YAML"""

from pathlib import Path
from typing import Any, Dict, Optional

import pydantic
import yaml

from .energy import DEFAULT_W_THRESHOLD
from .optimize import OptimizationConfig
from .types import EnergyKind, ReportFormat

# pylint: disable=too-few-public-methods


class RunConfig(pydantic.BaseModel):
    """Settings of one command line invocation

    Unknown keys are rejected and paths are checked before any work starts.
    """

    command: Optional[str] = None
    input: Optional[Path] = None
    out: Optional[Path] = None
    trace: Optional[Path] = None
    functional: EnergyKind = EnergyKind.W2
    steps: int = pydantic.Field(default=4000, ge=1)
    gtol: float = pydantic.Field(default=1e-10, gt=0.0)
    threshold: float = pydantic.Field(default=DEFAULT_W_THRESHOLD, ge=0.0)
    seed: int = 0
    weighted: bool = False
    fix_boundary: bool = False
    format: ReportFormat = ReportFormat.text

    model_config = {"extra": "forbid"}

    @pydantic.field_validator("input")
    @classmethod
    def _input_exists(cls, value: Optional[Path]) -> Optional[Path]:
        if value is not None and not value.is_file():
            raise ValueError(f"Input file {value} does not exist")
        return value

    @pydantic.field_validator("out", "trace")
    @classmethod
    def _parent_exists(cls, value: Optional[Path]) -> Optional[Path]:
        if value is not None and not value.resolve().parent.is_dir():
            raise ValueError(f"Directory of output file {value} does not exist")
        return value

    @classmethod
    def from_yaml(cls, yaml_filepath: Path, **overrides: Any) -> "RunConfig":
        """Load from a yaml file, then apply the overrides that are not None

        Raises:
            ValueError: If the file holds unknown keys or invalid values
        """
        with open(yaml_filepath, "r", encoding="utf-8") as yaml_file:
            yaml_dict: Dict[str, Any] = yaml.load(yaml_file, Loader=yaml.SafeLoader) or {}
        if not isinstance(yaml_dict, dict):
            raise ValueError(f"{yaml_filepath} does not hold a mapping of settings")
        yaml_dict.update({key: value for key, value in overrides.items() if value is not None})
        return cls(**yaml_dict)

    def to_yaml(self, yaml_filepath: Path) -> None:
        """Save the settings to a yaml file"""
        with open(yaml_filepath, "w", encoding="utf-8") as yaml_file:
            yaml.dump(self.model_dump(mode="json", exclude_none=True), yaml_file)

    def optimization_config(self, **settings: Any) -> OptimizationConfig:
        """Optimizer settings from this run configuration"""
        return OptimizationConfig(
            kind=self.functional,
            max_steps=self.steps,
            gtol=self.gtol,
            w_threshold=self.threshold,
            **settings,
        )
