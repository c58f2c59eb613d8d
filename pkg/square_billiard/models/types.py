#!/usr/bin/python
# coding: utf-8 -*-
# pylint: disable=line-too-long
"""Literal aliases shared by square_billiard models."""

from typing import Literal

RegionTag = Literal["Full_M1", "Full_M2", "Full_M3", "Reduced_M1", "Reduced_M2", "OnSingularPlus", "OnSingularMinus"]
"""Region of a point: Full_M1/M3 hit an adjacent side, Full_M2 and Reduced_M1 the opposite side, Reduced_M2 the adjacent side."""

SingularSet = Literal["S+", "S-"]

CurveKind = Literal[
    "StableLocal",
    "UnstableLocal",
    "SInfinity",
    "SingularPlus",
    "SingularMinus",
    "IterateOfSingular",
    "GraphTransform",
    "SigmaPartial",
    "PeriodicStable",
]

CurveParameter = Literal["theta", "s"]
"""Which coordinate is the abscissa of a curve's samples."""

Family = Literal["P_line", "FixedPoint_plambda", "Q_family", "P_family", "Other"]

StabilityKind = Literal["Parabolic", "Hyperbolic"]

Regime = Literal["BelowL0", "L0toL1", "L1toL2", "AboveL2"]

BasinLabel = Literal["ToP", "Bounded", "Singular"]

MapKind = Literal["reduced", "full"]

ExportFormat = Literal["csv", "json"]

Lambda0Source = Literal["estimated", "published"]

ProbeTarget = Literal["B", "q"]
