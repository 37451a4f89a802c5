"""Learners package initialization"""
from .base_learner import BaseLearner
from .cvvpro_learner import (
    CVVProLearner,
    step_size,
    build_velocity_polyhedron,
    augment_with_hypersphere,
    cvvpro_step,
)
from .ogd_learner import OGDLearner, FeasibleSetDescription, ogd_step
from .bounds import (
    BOUNDS,
    TIME_VARYING_OFFSET,
    theorem_bounds,
    feasibility_convergence_bound,
    inactive_row_bound,
)

__all__ = [
    "BaseLearner",
    "CVVProLearner",
    "step_size",
    "build_velocity_polyhedron",
    "augment_with_hypersphere",
    "cvvpro_step",
    "OGDLearner",
    "FeasibleSetDescription",
    "ogd_step",
    "BOUNDS",
    "TIME_VARYING_OFFSET",
    "theorem_bounds",
    "feasibility_convergence_bound",
    "inactive_row_bound",
]
