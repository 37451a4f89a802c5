"""Best fixed decision in hindsight for the game"""
import logging
import math
from typing import Optional

import numpy as np

from ..config import get_settings
from ..errors import BenchmarkBudgetError, BenchmarkInfeasibleError, EmptyPolyhedronError
from ..observability import run_logger
from ..schemas import BenchmarkResult, GameInstance, Polyhedron
from ..solvers import project_onto_polyhedron
from .game import feasible_set

logger = logging.getLogger(__name__)

# Rows with slack below this count as tight when sliding along a face
TIGHT_SLACK = 1e-9


def _check_nonempty(instance: GameInstance, y_bar: np.ndarray) -> None:
    """Row-wise emptiness: min over the simplex of C_x[i] x must fit under b - C_y[i] y_bar"""
    if not instance.m:
        return
    rhs = instance.capacity - instance.C_y @ y_bar
    cheapest = np.min(instance.C_x, axis=1)
    if np.any(cheapest > rhs + 1e-12):
        raise BenchmarkInfeasibleError()


def slide_along_face(x: np.ndarray, c: np.ndarray, poly: Polyhedron) -> np.ndarray:
    """Move x along -c projected onto its face until the next row becomes tight

    The direction keeps every tight row (and every equality) tight, so the move stays
    in the polyhedron and strictly lowers c^T x unless the projected gradient vanishes.
    The step length comes from the ratio test over the rows that are not yet tight.
    """
    slack = poly.normals.T @ x - poly.offsets if poly.num_inequalities else np.zeros(0)
    tight = slack <= TIGHT_SLACK
    face_normals = np.hstack([poly.normals[:, tight], poly.eq_normals])

    if face_normals.shape[1]:
        coefficients = np.linalg.lstsq(face_normals, c, rcond=None)[0]
        direction = -(c - face_normals @ coefficients)
    else:
        direction = -c
    if float(np.max(np.abs(direction), initial=0.0)) <= 1e-12 * max(1.0, float(np.max(np.abs(c)))):
        return x

    rates = poly.normals.T @ direction if poly.num_inequalities else np.zeros(0)
    blocking = ~tight & (rates < -1e-14)
    if not np.any(blocking):
        # A bounded polyhedron always blocks; keep x if rounding says otherwise
        return x
    length = float(np.min(slack[blocking] / -rates[blocking]))
    return x + max(length, 0.0) * direction


def solve_hindsight_benchmark(
    instance: GameInstance,
    y_bar: np.ndarray,
    T: int,
    x_init: Optional[np.ndarray] = None,
    max_iterations: Optional[int] = None,
    tol: Optional[float] = None
) -> BenchmarkResult:
    """min_x x^T A y_bar over C_T by projected gradient with decaying steps

    The objective sum_t x^T A y_t equals T x^T A y_bar. Each projected-gradient step is
    followed by an exact slide along the face it lands on, so the iterate reaches the
    optimal face in finitely many moves instead of creeping along a face with a small
    reduced gradient. Optimality is certified by the gradient mapping
    ||x - Proj(x - eta c)||_inf / eta plus the infeasibility of x.

    Raises:
        BenchmarkInfeasibleError: C_T is empty
        BenchmarkBudgetError: residual still above tol after the iteration budget
    """
    settings = get_settings()
    budget = settings.benchmark_iterations if max_iterations is None else max_iterations
    tol = settings.benchmark_tolerance if tol is None else tol

    y_bar = np.asarray(y_bar, dtype=float)
    if np.any(y_bar < -1e-8) or abs(float(y_bar.sum()) - 1.0) > 1e-8:
        raise ValueError("y_bar must lie on the simplex")
    _check_nonempty(instance, y_bar)

    feasible = feasible_set(instance, y_bar)
    poly = feasible.polyhedron
    c = instance.A @ y_bar
    c_norm = float(np.linalg.norm(c))
    start = np.full(instance.n, 1.0 / instance.n) if x_init is None else np.asarray(x_init, dtype=float)

    try:
        projected = project_onto_polyhedron(start, poly)
    except EmptyPolyhedronError as e:
        raise BenchmarkInfeasibleError() from e
    x, active = projected.v, projected.active_set

    best_x, best_residual = x, math.inf
    iterations = 0
    if c_norm == 0.0:
        best_residual = poly.primal_violation(x)
    else:
        for k in range(budget):
            iterations = k + 1
            eta = 2.0 / (c_norm * math.sqrt(k + 1))
            step = project_onto_polyhedron(x - eta * c, poly, warm_start=active)
            residual = float(np.max(np.abs(x - step.v))) / eta + poly.primal_violation(x)
            if residual < best_residual:
                best_x, best_residual = x, residual
            if residual <= tol:
                break
            x, active = slide_along_face(step.v, c, poly), step.active_set

    if best_residual > tol:
        raise BenchmarkBudgetError(best_x, best_residual, iterations)

    value = T * float(best_x @ c)
    run_logger.log_checkpoint(T, value, best_residual, iterations)
    return BenchmarkResult(
        t=T,
        x_star=best_x,
        value=value,
        kkt_residual=best_residual,
        iterations=iterations,
    )
