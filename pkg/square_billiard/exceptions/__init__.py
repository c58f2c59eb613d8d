# coding: utf-8 -*-
"""Exceptions module for square_billiard package."""

from __future__ import annotations

from typing import Any, Optional


class BilliardError(Exception):
    """Base exception for every failure raised by square_billiard."""


class DomainError(BilliardError, ValueError):
    """Exception when a point or a parameter lies outside its domain."""


class AngleRangeError(DomainError):
    """Exception when an angle is too close to ±π/2 to be evaluated."""


class InterpolationRangeError(DomainError):
    """Exception when a sampled curve is evaluated outside its θ-grid."""


class SingularPointError(BilliardError):
    """Exception when a point lies on the singular set S⁺ or S⁻.

    Attributes
    ----------
    which : str
        ``"S+"`` or ``"S-"``.
    step : Optional[int]
        Orbit index at which the singular set was reached, if iterating.
    """

    def __init__(self, message: str, which: str = "S+", step: Optional[int] = None) -> None:
        super().__init__(message)
        self.which = which
        self.step = step


class NoPreimageError(BilliardError):
    """Exception when a reduced point is outside the image φ_λ(M)."""


class OrbitDeathError(BilliardError):
    """Exception when an orbit dies on a singular set mid-iteration.

    Attributes
    ----------
    step : int
        Index of the last valid iterate.
    partial : Any
        Whatever the operation managed to compute before dying.
    """

    def __init__(self, message: str, step: int, partial: Any = None) -> None:
        super().__init__(message)
        self.step = step
        self.partial = partial


class ItineraryError(BilliardError):
    """Exception when an orbit leaves its declared branch sequence."""

    def __init__(self, message: str, step: int, expected: str, found: str) -> None:
        super().__init__(message)
        self.step = step
        self.expected = expected
        self.found = found


class UnverifiedOrbitError(BilliardError):
    """Exception when an orbit record fails its closure check."""


class SeriesConvergenceError(BilliardError):
    """Exception when a series overflows before its terms start to contract."""


class BracketError(BilliardError):
    """Exception when a root bracket shows no sign change."""


class ConfigError(BilliardError, ValueError):
    """Exception when a run configuration cannot be read or validated."""
