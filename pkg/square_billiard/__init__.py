#!/usr/bin/python
# coding: utf-8 -*-

"""
Square billiard with a contracting reflection law.

Numerical dynamics engine for the billiard map of the unit square whose
reflection law contracts the outgoing angle by a factor ``0 < λ < 1``.
"""

from __future__ import annotations

import importlib.metadata
import json
from typing import Any

import numpy as np
from pydantic import BaseModel

__author__ = "Square Billiard developers"
__date__ = "2026-10-19"

try:
    __version__ = importlib.metadata.version("square_billiard")
except importlib.metadata.PackageNotFoundError:  # pragma: no cover - source checkout
    __version__ = "0.0.0"

# Bumped whenever a JSON report changes shape.
SCHEMA_VERSION = 1

MSG_EMPTY_ATTRACTOR = """Every sampled orbit died or was captured by the parabolic line P.
This is expected well below the basin dichotomy threshold λ₀.
"""

MSG_PARTIAL_RESULTS = """The orbit reached a singular set before the requested budget.
Partial results were written with a status footer.
"""


class EnhancedJSONEncoder(json.JSONEncoder):
    """Custom JSon encoder for pydantic models and numpy scalars."""

    def default(self, o: Any) -> Any:
        if isinstance(o, BaseModel):
            return o.model_dump(mode="json")
        if isinstance(o, np.integer):
            return int(o)
        if isinstance(o, np.floating):
            return float(o)
        if isinstance(o, np.ndarray):
            return o.tolist()
        return super().default(o)
