# coding: utf-8 -*-
"""
Default values for square_billiard.

This module contains every tolerance, bracket and budget used by the
square_billiard package. Command line options and ``RunConfig`` files
override them; library functions take them as keyword defaults.

Attributes
----------
TOL_SING : float
    Absolute distance below which a point is considered on a singular curve.
ANGLE_GUARD : float
    Points with ``|θ|`` within this distance of π/2 are rejected.
TOL_EIG : float
    Parabolic test ``|α - 1| <= TOL_EIG`` for periodic orbits.
TOL_SERIES : float
    Truncation target for the h_λ and σ series.
TOL_FIX : float
    Maximum one-step defect accepted around a periodic orbit.
SERIES_MAX_TERMS : int
    Hard cap on the number of series terms.
SERIES_OVERFLOW : float
    Partial products above this value abort the series.
CURVE_GRID : int
    Default number of θ samples for curves.
MAX_DEPTH : int
    Maximum forward depth for unstable segment iteration.
MIN_SEGMENT : float
    Horizontal segments shorter than this are dropped.
DELTA_MARGIN : float
    Strict-interior margin for the trapping region Δ.
"""

import math

HALF_PI = 0.5 * math.pi

# core maps
TOL_SING = 1e-12
ANGLE_GUARD = 1e-9

# linearization
TOL_EIG = 1e-9
FD_STEP = 1e-6

# invariant structures
TOL_SERIES = 1e-13
SERIES_MAX_TERMS = 20000
SERIES_OVERFLOW = 1e200
CURVE_GRID = 2048
MAX_DEPTH = 12
MIN_SEGMENT = 1e-9
DELTA_MARGIN = 1e-9
SIGMA_TABLE_SIZE = 1 << 16
SIGMA_TABLE_BAND = 1e-7

# periodic orbits
TOL_FIX = 1e-11
ROOT_XTOL = 1e-14
ROOT_MAXITER = 200
FIXED_POINT_SEEDS = 1000

# bifurcation scan
LAMBDA2_BRACKET = (0.5, 0.99)
LAMBDA1_BRACKET = (0.3, 0.9)
CN_BRACKET = (0.55, 0.99)
LAMBDA0_BRACKET = (0.59, 0.62)
LAMBDA0_PUBLISHED = (0.6104, 0.615)
LAMBDA0_WIDTH = 1e-3
LAMBDA0_MAX_WIDENING = 3
BASIN_GRID = 400
BASIN_ITER = 10_000
BASIN_THRESHOLD = 1e-3
BOUNDARY_TIE = 1e-6
CN_TABLE_SIZE = 40

# explorer
SEED = 20100601
TRANSIENT = 1_000
N_INITIAL = 500
ATTRACTOR_ITER = 10_000
ORBIT_STEPS = 1_000
SCAN_LAMBDA_MIN = 0.55
SCAN_LAMBDA_MAX = 0.95
SCAN_LAMBDA_STEP = 0.005
SCAN_N_MAX = 10
SCAN_GRID = 64
SCAN_ITER = 2_000
WORKERS = 1
FLOAT_DIGITS = 17
RASTER_MAGIC = b"SQBR"
RASTER_VERSION = 1
