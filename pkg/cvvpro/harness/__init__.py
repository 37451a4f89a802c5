"""Harness package initialization"""
from .instance import STREAMS, CAPACITY_PRESETS, make_stream, box_muller_normals, generate_instance
from .adversary import best_response, sample_simplex_uniform, adversary_move
from .game import (
    round_constraint,
    resource_constraints,
    oracle_constraints,
    feasible_set,
    simplex_equality_rows,
    running_means,
    game_function_params,
)
from .benchmark import slide_along_face, solve_hindsight_benchmark
from .simulation import LEARNERS, run_simulation
from .synthetic import SyntheticInstance, generate_synthetic_instance, relaxed_benchmark, run_synthetic

__all__ = [
    "STREAMS",
    "CAPACITY_PRESETS",
    "make_stream",
    "box_muller_normals",
    "generate_instance",
    "best_response",
    "sample_simplex_uniform",
    "adversary_move",
    "round_constraint",
    "resource_constraints",
    "oracle_constraints",
    "feasible_set",
    "simplex_equality_rows",
    "running_means",
    "game_function_params",
    "slide_along_face",
    "solve_hindsight_benchmark",
    "LEARNERS",
    "run_simulation",
    "SyntheticInstance",
    "generate_synthetic_instance",
    "relaxed_benchmark",
    "run_synthetic",
]
