"""Evaluation package initialization"""
from .invariants import (
    IntersectionTracker,
    RecursionReport,
    check_claim_membership,
    check_normal_cone_inequality,
    check_velocity_bound,
    intersection_membership,
    intersection_violations,
    constraint_recursion_check,
    geometric_rounds,
    sample_feasible_points,
)
from .diagnose_runner import CHECKS, DEFAULT_CHECKS, DiagnoseRunner
from .qp_selftest import random_feasible_instance, run_qp_selftest

__all__ = [
    "IntersectionTracker",
    "RecursionReport",
    "check_claim_membership",
    "check_normal_cone_inequality",
    "check_velocity_bound",
    "intersection_membership",
    "intersection_violations",
    "constraint_recursion_check",
    "geometric_rounds",
    "sample_feasible_points",
    "CHECKS",
    "DEFAULT_CHECKS",
    "DiagnoseRunner",
    "random_feasible_instance",
    "run_qp_selftest",
]
