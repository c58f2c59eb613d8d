# coding: utf-8 -*-
"""Tests for the square_billiard.models package."""

import math

import numpy as np
import pytest
from pydantic import ValidationError

from square_billiard.models.curves import Curve, SegmentFamily
from square_billiard.models.orbit import OrbitNonexistence, PeriodicOrbitRecord, SequenceBundle, TriJacobian
from square_billiard.models.points import FullPoint, ReducedPoint
from square_billiard.models.reports import BifurcationConstants, OrbitRow, OrbitTrace


@pytest.mark.parametrize("s, theta", [(0.0, 0.1), (1.0, 0.1), (0.5, -0.1), (0.5, math.pi / 2), (math.nan, 0.2)])
def test_reduced_point_rejects_outside(s, theta):
    with pytest.raises(ValidationError):
        ReducedPoint(s=s, theta=theta)


def test_reduced_point_accepts_parabolic_line():
    point = ReducedPoint(s=0.3, theta=0.0)
    assert point.as_tuple() == (0.3, 0.0)


@pytest.mark.parametrize("s, theta", [(4.0, 0.1), (-0.1, 0.1), (1.5, math.pi / 2), (1.5, -math.pi / 2)])
def test_full_point_rejects_outside(s, theta):
    with pytest.raises(ValidationError):
        FullPoint(s=s, theta=theta)


def test_full_point_side():
    point = FullPoint(s=2.25, theta=-0.3)
    assert point.side == 2
    assert point.fractional == pytest.approx(0.25)


def test_curve_requires_increasing_grid():
    with pytest.raises(ValidationError):
        Curve(kind="SingularPlus", grid=[0.0, 0.2, 0.1], values=[1.0, 0.8, 0.9])
    with pytest.raises(ValidationError):
        Curve(kind="SingularPlus", grid=[0.0], values=[1.0])
    with pytest.raises(ValidationError):
        Curve(kind="SingularPlus", grid=[0.0, 0.1], values=[1.0])


def test_curve_samples_order():
    graph = Curve(kind="StableLocal", grid=[0.1, 0.2], values=[0.7, 0.6])
    segment = Curve(kind="UnstableLocal", parameter="s", grid=[0.0, 1.0], values=[0.4, 0.4])
    assert graph.samples() == [(0.7, 0.1), (0.6, 0.2)]
    assert segment.samples() == [(0.0, 0.4), (1.0, 0.4)]
    assert segment.is_horizontal
    assert not graph.is_horizontal


def test_segment_family_at_depth():
    curves = [
        Curve(kind="UnstableLocal", parameter="s", grid=[0.0, 1.0], values=[0.5, 0.5], depth=0),
        Curve(kind="UnstableLocal", parameter="s", grid=[0.2, 0.4], values=[0.3, 0.3], depth=1),
    ]
    family = SegmentFamily(curves=curves)
    assert family.at_depth(1) == [curves[1]]
    assert family.dropped == 0


def test_trijacobian_composition_matches_matrix_product():
    first = TriJacobian(a11=2.0, a12=0.5, a22=0.7, sign=-1)
    second = TriJacobian(a11=0.4, a12=1.5, a22=0.7, sign=1)
    product = first.then(second)
    np.testing.assert_allclose(product.as_array(), second.as_array() @ first.as_array(), rtol=1e-15)
    assert product.steps == 2
    assert product.det == pytest.approx(2.0 * 0.4 * 0.49)
    assert TriJacobian.identity().then(first) == first


def test_periodic_record_checks_period():
    point = ReducedPoint(s=0.4, theta=0.0)
    with pytest.raises(ValidationError):
        PeriodicOrbitRecord(family="P_line", lam=0.5, points=[point], period=2, itinerary="11", residual=0.0)
    with pytest.raises(ValidationError):
        PeriodicOrbitRecord(family="P_line", lam=0.5, points=[point], period=1, itinerary="3", residual=0.0)


def test_periodic_record_alias():
    point = ReducedPoint(s=0.4, theta=0.0)
    record = PeriodicOrbitRecord(family="P_line", lam=0.5, points=[point], period=1, itinerary="1", residual=0.0)
    dumped = record.model_dump(by_alias=True)
    assert dumped["lambda"] == 0.5
    assert record.coordinates() == [(0.4, 0.0)]


def test_nonexistence_record():
    record = OrbitNonexistence(family="Q_family", n=3, lam=0.9, step=1, reason="point 1 lies on S+")
    assert record.model_dump(by_alias=True)["lambda"] == 0.9


def test_sequence_bundle_lengths():
    with pytest.raises(ValidationError):
        SequenceBundle(theta=0.1, lam=0.5, n=2, h=[1.0, 0.9], gamma=[1.0, 2.0, 3.0], partial_sums=[0.1, 0.2, 0.3])


def test_constants_bracket_order():
    with pytest.raises(ValidationError):
        BifurcationConstants(lambda0_bracket=(0.62, 0.61), lambda1=0.6218, lambda2=0.8736)
    constants = BifurcationConstants(lambda0_bracket=(0.61, 0.62), lambda1=0.6218, lambda2=0.8736)
    assert constants.lambda0 == pytest.approx(0.615)


def test_orbit_trace_last_index():
    rows = [OrbitRow(index=k, s=0.5, theta=0.0, branch="Reduced_M1") for k in range(3)]
    trace = OrbitTrace(lam=0.5, map="reduced", rows=rows)
    assert trace.last_index == 2
    assert trace.status == "complete"
    assert OrbitTrace(lam=0.5, map="full", rows=[]).last_index == -1
