"""Run-time bounds, overridable through the environment."""

import os

HILBERT_DIM_ENV = "F1CONES_HILBERT_DIM"
NORMAL_FORM_DEGREE_ENV = "F1CONES_NORMAL_FORM_DEGREE"


def hilbert_dimension_bound() -> int:
    return int(os.environ.get(HILBERT_DIM_ENV, "4"))


def normal_form_degree_bound() -> int:
    return int(os.environ.get(NORMAL_FORM_DEGREE_ENV, "12"))
