"""Constraint views of the two-player game

Round t's resource constraint is g~_t(x) = b - C_x x - C_y y_t >= 0; averaging over
rounds gives g_t(x) = (b - C_y ybar_t) - C_x x, so every averaged family is rebuilt
from the running adversary mean alone.
"""
from typing import Tuple

import numpy as np

from ..constraints import AffineConstraints, ConstraintFamily, NonnegativityConstraints, StackedConstraints
from ..learners import FeasibleSetDescription
from ..schemas import FunctionClassParams, GameInstance


def round_constraint(instance: GameInstance, y: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """(intercepts, slopes) of g~_t for adversary move y"""
    return instance.capacity - instance.C_y @ y, -instance.C_x


def resource_constraints(instance: GameInstance, y_bar: np.ndarray) -> AffineConstraints:
    """Averaged resource family g_t for the adversary mean y_bar"""
    intercepts, slopes = round_constraint(instance, y_bar)
    return AffineConstraints(intercepts, slopes)


def oracle_constraints(resources: ConstraintFamily) -> StackedConstraints:
    """Resource rows 0..m-1 followed by simplex facets x_i >= 0"""
    return StackedConstraints([resources, NonnegativityConstraints(resources.dimension)])


def feasible_set(instance: GameInstance, y_bar: np.ndarray) -> FeasibleSetDescription:
    """C_t = simplex intersected with {C_x x <= b - C_y y_bar}"""
    intercepts, slopes = round_constraint(instance, y_bar)
    return FeasibleSetDescription.from_affine(intercepts, slopes, simplex=True)


def simplex_equality_rows(n: int) -> Tuple[np.ndarray, np.ndarray]:
    """sum(v) = 0, which keeps sum(x) = 1 along the trajectory"""
    return np.ones((n, 1)), np.zeros(1)


def running_means(moves: np.ndarray) -> np.ndarray:
    """Row t-1 holds the mean of the first t rows, built incrementally"""
    means = np.zeros_like(moves, dtype=float)
    mean = np.zeros(moves.shape[1])
    for index, move in enumerate(moves):
        mean = mean + (move - mean) / (index + 1)
        means[index] = mean
    return means


def game_function_params(instance: GameInstance) -> FunctionClassParams:
    """Constants of the game's function class

    The simplex lies in the unit ball. Cost gradients A y have norm at most the
    largest column norm of A; constraint gradients are rows of C_x or unit facets.
    Affine constraints are 0-smooth.
    """
    L_F = float(np.max(np.linalg.norm(instance.A, axis=0)))
    row_norms = np.linalg.norm(instance.C_x, axis=1) if instance.m else np.zeros(0)
    L_G = float(max(1.0, np.max(row_norms))) if row_norms.size else 1.0
    return FunctionClassParams(R=1.0, L_F=max(L_F, 1e-12), L_G=L_G, beta_G=0.0)
