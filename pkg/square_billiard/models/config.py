#!/usr/bin/python
# coding: utf-8 -*-
"""Run configuration for the explorer.

A ``RunConfig`` is stored as a flat text file of ``key = value`` lines;
``#`` starts a comment, keys are the model's field names (``lambda`` for
the contraction factor) and empty values mean "unset". Floats are written
with 17 significant digits so a saved configuration reloads identically.

Examples
--------
    >>> cfg = RunConfig(lam=0.75, seed=7)
    >>> cfg.to_file(Path("run.cfg"))
    >>> RunConfig.from_file(Path("run.cfg")) == cfg
    True
"""

from __future__ import annotations

from pathlib import Path
from typing import Any, Dict, Optional

from loguru import logger
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

import square_billiard.defaults as defaults
from square_billiard.exceptions import ConfigError
from square_billiard.models.types import ExportFormat, MapKind
from square_billiard.tools import fmt_float


class RunConfig(BaseModel):
    """Every knob of an explorer run."""

    model_config = ConfigDict(frozen=True, populate_by_name=True, extra="forbid")

    lam: float = Field(default=0.75, alias="lambda", gt=0.0)
    seed: int = Field(default=defaults.SEED, ge=0, lt=1 << 64)

    # orbit
    map: MapKind = "reduced"
    s0: float = 0.3
    theta0: float = 0.5
    steps: int = Field(default=defaults.ORBIT_STEPS, ge=1)

    # attractor
    n_initial: int = Field(default=defaults.N_INITIAL, ge=1)
    n_iter: int = Field(default=defaults.ATTRACTOR_ITER, ge=1)
    transient: int = Field(default=defaults.TRANSIENT, ge=0)

    # basin
    grid: int = Field(default=defaults.BASIN_GRID, ge=2)
    basin_iter: int = Field(default=defaults.BASIN_ITER, ge=1)
    threshold: float = Field(default=defaults.BASIN_THRESHOLD, gt=0.0, lt=1.0)

    # manifolds
    depth: int = Field(default=4, ge=0, le=defaults.MAX_DEPTH)
    curve_grid: int = Field(default=defaults.CURVE_GRID, ge=2)

    # constants
    n_max: int = Field(default=defaults.CN_TABLE_SIZE, ge=1)
    lambda0_low: float = Field(default=defaults.LAMBDA0_BRACKET[0], gt=0.0, lt=1.0)
    lambda0_high: float = Field(default=defaults.LAMBDA0_BRACKET[1], gt=0.0, lt=1.0)
    lambda0_grid: int = Field(default=defaults.BASIN_GRID, ge=2)

    # scan
    scan_min: float = Field(default=defaults.SCAN_LAMBDA_MIN, gt=0.0, lt=1.0)
    scan_max: float = Field(default=defaults.SCAN_LAMBDA_MAX, gt=0.0, lt=1.0)
    scan_step: float = Field(default=defaults.SCAN_LAMBDA_STEP, gt=0.0)
    scan_n_max: int = Field(default=defaults.SCAN_N_MAX, ge=1)
    scan_grid: int = Field(default=defaults.SCAN_GRID, ge=2)
    scan_iter: int = Field(default=defaults.SCAN_ITER, ge=1)

    # tolerances
    tol_sing: float = Field(default=defaults.TOL_SING, gt=0.0)
    tol_series: float = Field(default=defaults.TOL_SERIES, gt=0.0)
    tol_fix: float = Field(default=defaults.TOL_FIX, gt=0.0)
    tol_eig: float = Field(default=defaults.TOL_EIG, gt=0.0)

    # output
    workers: int = Field(default=defaults.WORKERS, ge=1)
    out: Optional[Path] = None
    format: ExportFormat = "csv"

    @field_validator("lam")
    @classmethod
    def _check_lambda(cls, value: float) -> float:
        if value == 1.0:
            raise ValueError("lambda = 1 is the elastic billiard, not supported")
        return value

    def override(self, **changes: Any) -> RunConfig:
        """Return a validated copy with the non-None ``changes`` applied."""
        data = self.model_dump(by_alias=True)
        data.update({key if key != "lam" else "lambda": value for key, value in changes.items() if value is not None})
        try:
            return RunConfig.model_validate(data)
        except ValidationError as error:
            raise ConfigError(str(error)) from error

    def to_text(self) -> str:
        """Serialize to the flat ``key = value`` format."""
        lines = ["# square_billiard run configuration"]
        for key, value in self.model_dump(by_alias=True).items():
            if value is None:
                rendered = ""
            elif isinstance(value, float):
                rendered = fmt_float(value)
            else:
                rendered = str(value)
            lines.append(f"{key} = {rendered}")
        return "\n".join(lines) + "\n"

    def to_file(self, path: Path) -> None:
        """Write the configuration to ``path``."""
        path.write_text(self.to_text(), encoding="utf-8")
        logger.debug(f"Run configuration written to {path}")

    @classmethod
    def parse_text(cls, text: str) -> Dict[str, str]:
        """Parse ``key = value`` lines into a dictionary of raw strings."""
        data: Dict[str, str] = {}
        for number, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"line {number}: expected 'key = value', got {raw!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            if key in data:
                raise ConfigError(f"line {number}: duplicate key {key!r}")
            data[key] = value
        return data

    @classmethod
    def from_text(cls, text: str) -> RunConfig:
        """Build a configuration from its text representation."""
        raw = cls.parse_text(text)
        data = {key: value for key, value in raw.items() if value != ""}
        try:
            return cls.model_validate(data)
        except ValidationError as error:
            raise ConfigError(str(error)) from error

    @classmethod
    def from_file(cls, path: Path) -> RunConfig:
        """Load a configuration file."""
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as error:
            raise ConfigError(f"cannot read {path}: {error}") from error
        logger.debug(f"Loading run configuration from {path}")
        return cls.from_text(text)
