#!/usr/bin/python
# coding: utf-8 -*-
# pylint: disable=too-few-public-methods
"""Phase-space points of the full and reduced billiard maps.

Classes
-------
FullPoint
    Point ``(s, θ)`` of the full phase space [0, 4) × (-π/2, π/2).
ReducedPoint
    Point ``(s, θ)`` of the reduced phase space (0, 1) × [0, π/2).
MapStep
    One application of a map: image, branch taken and flight length.

Notes
-----
``s`` is the arclength along the perimeter, counter-clockwise from the
corner (0, 0): side k covers [k, k+1). ``θ`` is measured from the inward
normal and is positive toward increasing ``s``.

Validation failures surface as ``pydantic.ValidationError`` (a
``ValueError``); the map functions validate raw floats themselves and raise
the typed exceptions of ``square_billiard.exceptions``.
"""

from __future__ import annotations

import math
from typing import Tuple, Union

from pydantic import BaseModel, ConfigDict, field_validator

from square_billiard.defaults import HALF_PI
from square_billiard.models.types import RegionTag


class FullPoint(BaseModel):
    """Point of the full phase space."""

    model_config = ConfigDict(frozen=True)

    s: float
    theta: float

    @field_validator("s")
    @classmethod
    def _check_s(cls, value: float) -> float:
        if not math.isfinite(value) or not 0.0 <= value < 4.0:
            raise ValueError(f"s={value!r} is outside [0, 4)")
        return value

    @field_validator("theta")
    @classmethod
    def _check_theta(cls, value: float) -> float:
        if not math.isfinite(value) or abs(value) >= HALF_PI:
            raise ValueError(f"theta={value!r} is outside (-π/2, π/2)")
        return value

    @property
    def side(self) -> int:
        """Integer part ``[s]``: index of the side carrying the point."""
        return int(math.floor(self.s))

    @property
    def fractional(self) -> float:
        """Fractional part ``{s}``."""
        return self.s - math.floor(self.s)

    def as_tuple(self) -> Tuple[float, float]:
        """Return ``(s, θ)``."""
        return (self.s, self.theta)


class ReducedPoint(BaseModel):
    """Point of the reduced phase space."""

    model_config = ConfigDict(frozen=True)

    s: float
    theta: float

    @field_validator("s")
    @classmethod
    def _check_s(cls, value: float) -> float:
        if not math.isfinite(value) or not 0.0 < value < 1.0:
            raise ValueError(f"s={value!r} is outside (0, 1)")
        return value

    @field_validator("theta")
    @classmethod
    def _check_theta(cls, value: float) -> float:
        if not math.isfinite(value) or not 0.0 <= value < HALF_PI:
            raise ValueError(f"theta={value!r} is outside [0, π/2)")
        return value

    def as_tuple(self) -> Tuple[float, float]:
        """Return ``(s, θ)``."""
        return (self.s, self.theta)


class MapStep(BaseModel):
    """Result of a single forward or backward map application.

    Attributes
    ----------
    image : FullPoint | ReducedPoint
        Point reached.
    branch : RegionTag
        Region of the point the branch was selected from.
    flight_length : float
        Euclidean length of the chord travelled between the two collisions.
    theta_out : float
        Outgoing angle before contraction (the billiard angle of the chord).
    """

    model_config = ConfigDict(frozen=True)

    image: Union[FullPoint, ReducedPoint]
    branch: RegionTag
    flight_length: float
    theta_out: float
