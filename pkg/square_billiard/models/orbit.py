#!/usr/bin/python
# coding: utf-8 -*-
"""Linearization and periodic-orbit records.

Classes
-------
TriJacobian
    Upper-triangular 2×2 derivative with a separate orientation sign.
StabilityClass
    Parabolic/hyperbolic verdict with eigenvalue moduli.
PeriodicOrbitRecord
    Verified periodic orbit of the reduced map.
OrbitNonexistence
    Tagged result for a closed-form orbit that fails validation.
SequenceBundle
    Finite evaluations of the h_n, γ_n and S_n sequences at one angle.
"""

from __future__ import annotations

from typing import List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from square_billiard.models.points import ReducedPoint
from square_billiard.models.types import Family, StabilityKind


class TriJacobian(BaseModel):
    """Derivative ``sign · [[a11, a12], [0, a22]]`` of one or more map steps.

    The (2, 1) entry is structurally zero and never stored.

    Attributes
    ----------
    a11 : float
        Expansion along the s-direction (α_n).
    a12 : float
        Shear term (ζ_n), units of side length per radian.
    a22 : float
        Angle contraction (β_n = λⁿ).
    sign : int
        Orientation factor, +1 or -1.
    steps : int
        Number of composed map steps.
    """

    model_config = ConfigDict(frozen=True)

    a11: float
    a12: float
    a22: float
    sign: int = 1
    steps: int = 1

    @classmethod
    def identity(cls) -> TriJacobian:
        """Derivative of zero steps."""
        return cls(a11=1.0, a12=0.0, a22=1.0, sign=1, steps=0)

    def then(self, later: TriJacobian) -> TriJacobian:
        """Return ``later · self``: the derivative of applying ``self`` first."""
        return TriJacobian(
            a11=later.a11 * self.a11,
            a12=later.a11 * self.a12 + later.a12 * self.a22,
            a22=later.a22 * self.a22,
            sign=later.sign * self.sign,
            steps=later.steps + self.steps,
        )

    @property
    def det(self) -> float:
        """Determinant ``a11 · a22`` (orientation included)."""
        return float(self.a11 * self.a22)

    def as_array(self) -> np.ndarray:
        """Signed 2×2 matrix."""
        return self.sign * np.array([[self.a11, self.a12], [0.0, self.a22]], dtype=float)


class StabilityClass(BaseModel):
    """Stability of a periodic orbit from its eigenvalue moduli ``(|α|, |β|)``."""

    model_config = ConfigDict(frozen=True)

    kind: StabilityKind
    alpha: float
    beta: float


class PeriodicOrbitRecord(BaseModel):
    """Periodic orbit of the reduced map.

    ``itinerary[k]`` is ``"1"`` when ``points[k]`` is mapped by f₁ and ``"2"``
    when it is mapped by f₂.
    """

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    family: Family
    n: Optional[int] = None
    lam: float = Field(alias="lambda")
    points: List[ReducedPoint]
    period: int = Field(ge=1)
    itinerary: str = Field(pattern=r"^[12]+$")
    residual: float = Field(ge=0.0)
    stability: Optional[StabilityClass] = None

    @model_validator(mode="after")
    def _check_lengths(self) -> PeriodicOrbitRecord:
        if len(self.points) != self.period or len(self.itinerary) != self.period:
            raise ValueError(
                f"period {self.period} does not match {len(self.points)} points and itinerary {self.itinerary!r}"
            )
        return self

    def with_stability(self, stability: StabilityClass) -> PeriodicOrbitRecord:
        """Copy of the record carrying a stability verdict."""
        return self.model_copy(update={"stability": stability})

    def coordinates(self) -> List[Tuple[float, float]]:
        """Orbit points as ``(s, θ)`` pairs."""
        return [p.as_tuple() for p in self.points]


class OrbitNonexistence(BaseModel):
    """A closed-form orbit candidate rejected by validation.

    Attributes
    ----------
    step : int
        Index of the first orbit point that fails; -1 when the candidate is
        rejected before iteration (angle or position out of range).
    reason : str
        Human readable reason.
    """

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    family: Family
    n: int
    lam: float = Field(alias="lambda")
    step: int
    reason: str


class SequenceBundle(BaseModel):
    """Values ``h_k(θ)``, ``γ_k(θ)`` and ``S_k(θ)`` for ``k = 0..n``."""

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    theta: float
    lam: float = Field(alias="lambda")
    n: int = Field(ge=0)
    h: List[float]
    gamma: List[float]
    partial_sums: List[float]

    @model_validator(mode="after")
    def _check_lengths(self) -> SequenceBundle:
        if not len(self.h) == len(self.gamma) == len(self.partial_sums) == self.n + 1:
            raise ValueError("sequence lengths must equal n + 1")
        return self
