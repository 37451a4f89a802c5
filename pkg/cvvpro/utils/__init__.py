"""Utils package initialization"""
from .series import (
    PER_CHECKPOINT,
    FIXED_FINAL,
    checkpoint_schedule,
    cumulative_costs,
    regret_at,
    compute_regret_curve,
    max_violation_series,
    violation_envelope,
    averaged_iterate_convergence,
    adversary_average_convergence,
    violated_fraction,
    projection_rows,
    derive_series,
    attach_series,
)
from .emitter import FORMATS, csv_rows, to_csv, to_json, emit, load_log

__all__ = [
    "PER_CHECKPOINT",
    "FIXED_FINAL",
    "checkpoint_schedule",
    "cumulative_costs",
    "regret_at",
    "compute_regret_curve",
    "max_violation_series",
    "violation_envelope",
    "averaged_iterate_convergence",
    "adversary_average_convergence",
    "violated_fraction",
    "projection_rows",
    "derive_series",
    "attach_series",
    "FORMATS",
    "csv_rows",
    "to_csv",
    "to_json",
    "emit",
    "load_log",
]
