"""Constraints package initialization"""
from .families import (
    ConstraintFamily,
    AffineConstraints,
    NonnegativityConstraints,
    BallConstraints,
    HypersphereConstraint,
    AveragedAffineConstraints,
    StackedConstraints,
)
from .oracles import (
    evaluate_violations,
    hypersphere_constraint,
    start_average,
    averaged_update,
    tvc_decay_check,
    fit_decay_exponent,
    tvc_fit_passes,
    TVCDecayResult,
)

__all__ = [
    "ConstraintFamily",
    "AffineConstraints",
    "NonnegativityConstraints",
    "BallConstraints",
    "HypersphereConstraint",
    "AveragedAffineConstraints",
    "StackedConstraints",
    "evaluate_violations",
    "hypersphere_constraint",
    "start_average",
    "averaged_update",
    "tvc_decay_check",
    "fit_decay_exponent",
    "tvc_fit_passes",
    "TVCDecayResult",
]
