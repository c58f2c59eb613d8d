#!/usr/bin/python
# coding: utf-8 -*-
"""Sampled curves and series evaluations.

Classes
-------
Curve
    Curve in the reduced phase space sampled on a monotone grid.
SegmentFamily
    Unstable segments grouped with the count of dropped ones.
SeriesEval
    Truncated series value with a rigorous tail bound.
SigmaEval
    Evaluation of σ, tagged with whether S_∞ is inside the phase space.
"""

from __future__ import annotations

from typing import List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, model_validator

from square_billiard.models.types import CurveKind, CurveParameter


class Curve(BaseModel):
    """Curve sampled on a strictly increasing grid.

    When ``parameter == "theta"`` the grid holds angles and ``values`` the
    matching s-coordinates (a graph ``s = c(θ)``). When
    ``parameter == "s"`` the roles are swapped; horizontal segments are
    stored this way with two samples and a constant angle.

    Attributes
    ----------
    kind : CurveKind
        What the curve represents.
    parameter : CurveParameter
        Coordinate used as abscissa.
    grid : List[float]
        Strictly increasing abscissae.
    values : List[float]
        Ordinates, same length as ``grid``.
    depth : Optional[int]
        Iteration depth for images and preimages of a base curve.
    label : str
        Free-form tag, exported with the samples.
    """

    model_config = ConfigDict(frozen=True)

    kind: CurveKind
    parameter: CurveParameter = "theta"
    grid: List[float]
    values: List[float]
    depth: Optional[int] = None
    label: str = ""

    @model_validator(mode="after")
    def _check_grid(self) -> Curve:
        if len(self.grid) != len(self.values):
            raise ValueError("grid and values must have the same length")
        if len(self.grid) < 2:
            raise ValueError("a curve needs at least two samples")
        if any(b <= a for a, b in zip(self.grid, self.grid[1:])):
            raise ValueError("curve grid must be strictly increasing")
        return self

    def samples(self) -> List[Tuple[float, float]]:
        """Samples as ``(s, θ)`` pairs."""
        if self.parameter == "theta":
            return list(zip(self.values, self.grid))
        return list(zip(self.grid, self.values))

    @property
    def is_horizontal(self) -> bool:
        """True when the curve has a single angle."""
        thetas = self.values if self.parameter == "s" else self.grid
        return max(thetas) == min(thetas)


class SegmentFamily(BaseModel):
    """Horizontal segments of an unstable manifold and the number dropped as too short."""

    model_config = ConfigDict(frozen=True)

    curves: List[Curve]
    dropped: int = 0

    def at_depth(self, depth: int) -> List[Curve]:
        """Segments produced by exactly ``depth`` forward iterations."""
        return [curve for curve in self.curves if curve.depth == depth]


class SeriesEval(BaseModel):
    """Partial sum of a convergent series.

    ``|value - true sum| <= tail_bound``.
    """

    model_config = ConfigDict(frozen=True)

    value: float
    terms_used: int
    tail_bound: float


class SigmaEval(SeriesEval):
    """σ(θ) evaluation. ``inside`` is False when σ(θ) <= 0 (S_∞ left the phase space)."""

    inside: bool
