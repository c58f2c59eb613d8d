#!/usr/bin/python
# coding: utf-8 -*-
# flake8: noqa: W503

"""Geometric oracle for the billiard map.

The next collision is found by intersecting the ray with the four sides of
the unit square, without any of the closed forms used by the package.
"""

from __future__ import annotations

import math
from typing import Tuple

# side k: start corner, unit tangent (direction of increasing s), inward normal
SIDES = [
    ((0.0, 0.0), (1.0, 0.0), (0.0, 1.0)),
    ((1.0, 0.0), (0.0, 1.0), (-1.0, 0.0)),
    ((1.0, 1.0), (-1.0, 0.0), (0.0, -1.0)),
    ((0.0, 1.0), (0.0, -1.0), (1.0, 0.0)),
]


def _dot(a: Tuple[float, float], b: Tuple[float, float]) -> float:
    return a[0] * b[0] + a[1] * b[1]


def ray_trace(s: float, theta: float, lam: float = 1.0) -> Tuple[float, float, int]:
    """
    ray_trace Next collision of the ray leaving ``(s, θ)``

    Parameters
    ----------
    s : float
        Perimeter position in [0, 4).
    theta : float
        Angle with the inward normal, positive toward increasing s.
    lam : float
        Contraction applied to the reflected angle.

    Returns
    -------
    Tuple[float, float, int]
        Position, contracted angle and index of the side hit.
    """
    side = int(math.floor(s))
    corner, tangent, normal = SIDES[side]
    x = s - side
    point = (corner[0] + x * tangent[0], corner[1] + x * tangent[1])
    direction = (
        math.cos(theta) * normal[0] + math.sin(theta) * tangent[0],
        math.cos(theta) * normal[1] + math.sin(theta) * tangent[1],
    )
    best, hit = math.inf, -1
    for index, (other_corner, _, other_normal) in enumerate(SIDES):
        if index == side:
            continue
        speed = _dot(direction, other_normal)
        if speed >= 0.0:
            continue
        distance = _dot((point[0] - other_corner[0], point[1] - other_corner[1]), other_normal) / -speed
        if 0.0 < distance < best:
            best, hit = distance, index
    landing = (point[0] + best * direction[0], point[1] + best * direction[1])
    corner, tangent, normal = SIDES[hit]
    position = hit + _dot((landing[0] - corner[0], landing[1] - corner[1]), tangent)
    speed = _dot(direction, normal)
    reflected = (direction[0] - 2.0 * speed * normal[0], direction[1] - 2.0 * speed * normal[1])
    angle = math.atan2(_dot(reflected, tangent), _dot(reflected, normal))
    return position % 4.0, lam * angle, hit
