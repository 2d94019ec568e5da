"""Verification workbench for multilocal fermion constructions."""

import json

from ._core import (
    IntervalFamily,
    K_of_X,
    ModularGeometry,
    ResourceLimit,
    beta_mode,
    beta_mode_inverse,
    current_ccr,
    gauge_mixing,
    hafnian,
    iso_car_residual,
    iso_correlator_residual,
    diagonalizer_check,
    diagonalizer_matrices,
    pfaffian,
    preimages,
    ramond_current_one_point,
    ramond_current_two_point,
    ramond_L0_expectation,
    ramond_L0_point_split,
    ramond_twisted_residual,
    run_suite_json,
    stress_mode_residual,
    uniformizer,
    vacuum_bracket,
)

__version__ = "0.1.0"


def run_suite(suite, **kwargs):
    """Run a named suite and return the parsed report."""
    return json.loads(run_suite_json(suite, **kwargs))
