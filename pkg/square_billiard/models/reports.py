#!/usr/bin/python
# coding: utf-8 -*-
"""Reports produced by the bifurcation scan and the explorer.

Classes
-------
SolverMeta
    Diagnostics of one bracketed root solve.
BifurcationConstants
    λ₀ bracket, λ₁, λ₂ and the c_n table.
BasinReport
    Classification of a grid of initial conditions.
Lambda0Estimate
    Bisection result for the basin dichotomy threshold.
RegimeClassification
    Interval of λ among the four dynamical regimes.
DeltaTrappingReport
    Fraction of sampled Δ∩M₁ points mapped into int(Δ).
AttractorSample
    Post-transient iterates of surviving orbits.
ScanRow
    One λ row of a parameter sweep.
OrbitRow, OrbitTrace
    Iterates of a single orbit, possibly cut short by S⁺.
"""

from __future__ import annotations

from typing import Dict, List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from square_billiard.models.types import BasinLabel, Lambda0Source, MapKind, Regime

BASIN_CODES: Dict[BasinLabel, int] = {"ToP": 0, "Bounded": 1, "Singular": 2}
"""uint8 codes of basin labels, shared by the raster format."""


class SolverMeta(BaseModel):
    """Diagnostics for a single root solve."""

    model_config = ConfigDict(frozen=True)

    iterations: int = 0
    function_calls: int = 0
    residual: float = 0.0
    converged: bool = True
    error: Optional[str] = None
    wall_time: Optional[float] = None


class BifurcationConstants(BaseModel):
    """Bifurcation constants of the reduced map.

    Failed c_n solves are absent from ``cn_table``; their diagnostics stay in
    ``solver_meta`` under ``"c<n>"``.
    """

    model_config = ConfigDict(frozen=True)

    lambda0_bracket: Tuple[float, float]
    lambda0_source: Lambda0Source = "estimated"
    lambda1: float
    lambda2: float
    cn_table: List[Tuple[int, float]] = Field(default_factory=list)
    solver_meta: Dict[str, SolverMeta] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _check_order(self) -> BifurcationConstants:
        low, high = self.lambda0_bracket
        if not low < high:
            raise ValueError(f"empty λ₀ bracket ({low}, {high})")
        return self

    @property
    def lambda0(self) -> float:
        """Bracket midpoint, used for regime classification."""
        return 0.5 * (self.lambda0_bracket[0] + self.lambda0_bracket[1])


class BasinReport(BaseModel):
    """Basin classification on a cell-centred grid.

    ``labels[i, j]`` classifies the cell with angle index ``i`` and position
    index ``j`` using ``BASIN_CODES``; ``escape_steps[i, j]`` is the first
    iterate inside B for ToP cells and -1 otherwise.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True, populate_by_name=True)

    lam: float = Field(alias="lambda")
    n_s: int = Field(ge=2)
    n_theta: int = Field(ge=2)
    extent: Tuple[float, float, float, float]
    n_iter: int = Field(ge=1)
    fraction_to_P: float
    fraction_bounded: float
    fraction_singular: float
    escape_histogram: List[int]
    labels: np.ndarray = Field(exclude=True, repr=False)
    escape_steps: np.ndarray = Field(exclude=True, repr=False)

    @property
    def max_escape(self) -> int:
        """Largest escape step among ToP cells, -1 if none."""
        nonzero = [k for k, count in enumerate(self.escape_histogram) if count]
        return nonzero[-1] if nonzero else -1


class Lambda0Estimate(BaseModel):
    """Bracket around the smallest λ with an open attracting basin."""

    model_config = ConfigDict(frozen=True)

    low: float
    high: float
    evaluations: List[Tuple[float, float]] = Field(default_factory=list)
    widenings: int = 0
    monotone: bool = True

    @property
    def width(self) -> float:
        """Bracket width."""
        return self.high - self.low


class RegimeClassification(BaseModel):
    """Regime of a contraction factor."""

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    lam: float = Field(alias="lambda")
    regime: Regime
    boundary: bool = False


class DeltaTrappingReport(BaseModel):
    """Outcome of mapping samples of Δ∩M₁ by f₁."""

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    lam: float = Field(alias="lambda")
    n_samples: int
    n_inside: int
    fraction: float
    seed: int


class AttractorSample(BaseModel):
    """Iterates of the orbits that neither died nor entered B.

    Attributes
    ----------
    s, theta : np.ndarray
        Sampled coordinates, in orbit-major order.
    seed : int
        Seed of the initial-condition generator.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True, populate_by_name=True)

    lam: float = Field(alias="lambda")
    s: np.ndarray = Field(exclude=True, repr=False)
    theta: np.ndarray = Field(exclude=True, repr=False)
    seed: int
    n_initial: int
    n_iter: int
    transient: int
    n_survivors: int
    n_captured: int
    n_singular: int

    @property
    def size(self) -> int:
        """Number of sampled points."""
        return int(self.s.size)

    @property
    def empty(self) -> bool:
        """True when no orbit survived."""
        return self.size == 0


class ScanRow(BaseModel):
    """Summary of the dynamics at one contraction factor."""

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    lam: float = Field(alias="lambda")
    regime: Optional[Regime] = None
    fraction_to_P: Optional[float] = None
    attractor_nonempty: Optional[bool] = None
    homoclinic: Optional[bool] = None
    q_count: Optional[int] = None
    p_count: Optional[int] = None
    error: Optional[str] = None


class OrbitRow(BaseModel):
    """One iterate of an orbit and the branch that maps it."""

    model_config = ConfigDict(frozen=True)

    index: int
    s: float
    theta: float
    branch: str


class OrbitTrace(BaseModel):
    """Iterates of one orbit.

    ``status`` is ``"singular"`` when the orbit reached S⁺; the last row is
    then the singular point, tagged ``OnSingularPlus``.
    """

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    lam: float = Field(alias="lambda")
    map: MapKind
    rows: List[OrbitRow]
    status: Literal["complete", "singular"] = "complete"

    @property
    def last_index(self) -> int:
        """Index of the last valid iterate."""
        return self.rows[-1].index if self.rows else -1
