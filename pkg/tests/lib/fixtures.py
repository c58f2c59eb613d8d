#!/usr/bin/python
# coding: utf-8 -*-
"""Fixtures for tests"""

from pathlib import Path

import pytest
from click.testing import CliRunner

from square_billiard.logics.bifurcation import compute_constants
from square_billiard.models.reports import BifurcationConstants


# Fixtures
@pytest.fixture
def runner() -> CliRunner:
    """Click runner keeping stderr apart from the data on stdout"""
    try:
        return CliRunner(mix_stderr=False)
    except TypeError:  # click >= 8.2 always separates the streams
        return CliRunner()


@pytest.fixture(scope="session")
def constants() -> BifurcationConstants:
    """Constants with a short c_n table and the published λ₀ bracket"""
    return compute_constants(n_max=4, skip_lambda0=True)


@pytest.fixture
def config_file(tmp_path: Path) -> Path:
    """Small run configuration on disk"""
    path = tmp_path / "run.cfg"
    path.write_text("# test run\nlambda = 0.75\nseed = 7\nsteps = 20\n", encoding="utf-8")
    return path
