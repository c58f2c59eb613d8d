# coding: utf-8 -*-
"""Tests for the square_billiard.logics.explorer module."""

import math

import numpy as np
import pytest

from square_billiard.logics.explorer import iterate_orbit, sample_attractor, scan, scan_lambdas, scan_row
from square_billiard.logics.invariant_structures import delta_membership_array
from tests.lib.fixtures import constants  # noqa: F401


def test_reduced_orbit_trace():
    trace = iterate_orbit(0.5, 0.2, 0.3, steps=5)
    assert trace.status == "complete"
    assert [row.index for row in trace.rows] == list(range(6))
    assert (trace.rows[0].s, trace.rows[0].theta) == (0.2, 0.3)
    assert trace.rows[0].branch == "Reduced_M1"
    assert trace.rows[1].s == pytest.approx(0.2 + math.tan(0.3))
    assert trace.last_index == 5


def test_orbit_stops_on_singular_line():
    trace = iterate_orbit(0.6, 0.5, math.atan(0.5), steps=10)
    assert trace.status == "singular"
    assert len(trace.rows) == 1
    assert trace.rows[-1].branch == "OnSingularPlus"
    assert trace.last_index == 0


def test_full_orbit_trace():
    trace = iterate_orbit(0.75, 2.3, -0.4, steps=10, map_kind="full")
    assert trace.map == "full"
    assert trace.status == "complete"
    assert all(0.0 <= row.s < 4.0 for row in trace.rows)
    assert trace.rows[0].branch.startswith("Full_")


def test_orbit_rejects_bad_start():
    with pytest.raises(ValueError):
        iterate_orbit(0.5, 1.5, 0.3)
    with pytest.raises(ValueError):
        iterate_orbit(0.5, 0.5, -0.3)


def test_attractor_is_reproducible():
    first = sample_attractor(0.75, n_initial=40, n_iter=50, transient=100, seed=11)
    second = sample_attractor(0.75, n_initial=40, n_iter=50, transient=100, seed=11)
    np.testing.assert_array_equal(first.s, second.s)
    np.testing.assert_array_equal(first.theta, second.theta)
    assert first.n_survivors + first.n_captured + first.n_singular == 40


def test_attractor_does_not_depend_on_workers():
    single = sample_attractor(0.75, n_initial=40, n_iter=50, transient=100, seed=11, workers=1)
    split = sample_attractor(0.75, n_initial=40, n_iter=50, transient=100, seed=11, workers=2)
    np.testing.assert_array_equal(single.s, split.s)
    assert single.model_dump() == split.model_dump()


def test_attractor_nonempty_between_lambda1_and_lambda2():
    sample = sample_attractor(0.75, n_initial=200, n_iter=200, transient=1_000, seed=5)
    assert not sample.empty
    assert sample.size == sample.n_survivors * 200


def test_few_survivors_below_lambda0():
    sample = sample_attractor(0.4, n_initial=200, n_iter=200, transient=500, seed=5)
    assert sample.n_survivors <= 10


def test_attractor_lies_in_trapping_region():
    lam = 0.9
    sample = sample_attractor(lam, n_initial=100, n_iter=100, transient=1_000, seed=8)
    assert not sample.empty
    inside = (
        delta_membership_array(sample.s, sample.theta, lam)
        | delta_membership_array(sample.s + 1e-6, sample.theta, lam)
        | delta_membership_array(sample.s - 1e-6, sample.theta, lam)
    )
    assert inside.all()


def test_scan_lambdas():
    values = scan_lambdas(0.55, 0.6, 0.01)
    assert values == [0.55, 0.56, 0.57, 0.58, 0.59, 0.6]
    assert scan_lambdas(0.5, 0.5, 0.1) == [0.5]


def test_scan_row_records_failure(constants):
    row = scan_row(1.5, constants)
    assert row.error.startswith("DomainError")
    assert row.regime is None


def test_small_scan(constants):
    rows = scan([0.75, 0.9], constants, n_max=2, grid=8, n_iter=20)
    assert [row.lam for row in rows] == [0.75, 0.9]
    assert [row.regime for row in rows] == ["L1toL2", "AboveL2"]
    assert rows[0].homoclinic is True
    assert rows[1].homoclinic is False
    assert all(row.error is None for row in rows)
    assert rows[1].q_count == 0
