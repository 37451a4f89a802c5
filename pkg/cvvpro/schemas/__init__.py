"""Schemas package initialization"""
from .polyhedron import Polyhedron, ProjectionResult
from .constraints import FunctionClassParams, ViolationReport, AveragedConstraintState
from .learner import LearnerConfig, CostSample, LearnerState, StepRecord, BoundReport
from .game import GameInstance, RunningAverages, BenchmarkResult
from .metrics import MetricsLog, CSV_FIELDS

__all__ = [
    "Polyhedron",
    "ProjectionResult",
    "FunctionClassParams",
    "ViolationReport",
    "AveragedConstraintState",
    "LearnerConfig",
    "CostSample",
    "LearnerState",
    "StepRecord",
    "BoundReport",
    "GameInstance",
    "RunningAverages",
    "BenchmarkResult",
    "MetricsLog",
    "CSV_FIELDS",
]
