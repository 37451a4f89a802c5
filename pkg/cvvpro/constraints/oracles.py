"""Constraint-violation oracle and time-variation checks"""
import logging
from typing import List, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, Field

from ..errors import ConstraintEvaluationError, DimensionMismatchError, SampleOutsideDomainError
from ..schemas import AveragedConstraintState, FunctionClassParams, ViolationReport
from .families import ConstraintFamily

logger = logging.getLogger(__name__)


def evaluate_violations(constraints: ConstraintFamily, x: np.ndarray) -> ViolationReport:
    """Report every constraint with g_i(x) <= 0, boundary included"""
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise ValueError("x must be finite")
    if x.shape != (constraints.dimension,):
        raise DimensionMismatchError(f"x has shape {x.shape}, family dimension {constraints.dimension}")

    values, gradients = constraints.evaluate(x)
    bad_values = np.flatnonzero(~np.isfinite(values))
    if bad_values.size:
        index = int(bad_values[0])
        raise ConstraintEvaluationError(index, float(values[index]))
    bad_columns = np.flatnonzero(~np.all(np.isfinite(gradients), axis=0))
    if bad_columns.size:
        index = int(bad_columns[0])
        raise ConstraintEvaluationError(index, float("nan"))

    violated = np.flatnonzero(values <= 0.0)
    return ViolationReport(
        indices=[int(i) for i in violated],
        values=np.array(values[violated], dtype=float),
        gradients=np.array(gradients[:, violated], dtype=float).reshape(x.shape[0], violated.size),
    )


def hypersphere_constraint(x: np.ndarray, R: float) -> Tuple[float, np.ndarray]:
    """Value and gradient of 1/2 (R^2 - ||x||^2)"""
    if R <= 0:
        raise ValueError("R must be positive")
    x = np.asarray(x, dtype=float)
    return 0.5 * (R ** 2 - float(x @ x)), -x.copy()


def start_average(intercepts: np.ndarray, slopes: np.ndarray) -> AveragedConstraintState:
    """State after the first round: the round's own constraint"""
    return AveragedConstraintState(
        round=1,
        avg_intercepts=np.array(intercepts, dtype=float).ravel(),
        avg_slopes=np.array(slopes, dtype=float, ndmin=2),
    )


def averaged_update(
    state: AveragedConstraintState,
    intercepts: np.ndarray,
    slopes: np.ndarray
) -> AveragedConstraintState:
    """Fold round t+1 into the mean: g_{t+1} = g_t + (g~_{t+1} - g_t)/(t+1)"""
    intercepts = np.asarray(intercepts, dtype=float).ravel()
    slopes = np.asarray(slopes, dtype=float)
    if intercepts.shape != state.avg_intercepts.shape or slopes.shape != state.avg_slopes.shape:
        raise DimensionMismatchError(
            f"new round has shapes {intercepts.shape}/{slopes.shape}, "
            f"average has {state.avg_intercepts.shape}/{state.avg_slopes.shape}"
        )

    weight = 1.0 / (state.round + 1)
    return AveragedConstraintState(
        round=state.round + 1,
        avg_intercepts=state.avg_intercepts + weight * (intercepts - state.avg_intercepts),
        avg_slopes=state.avg_slopes + weight * (slopes - state.avg_slopes),
    )


class TVCDecayResult(BaseModel):
    """Outcome of one time-variation check between consecutive families"""
    t: int = Field(..., ge=1, description="Round of g_prev")
    max_diff: float = Field(..., ge=0, description="max over samples of ||g_{t+1}(x) - g_t(x)||_inf")
    bound: float = Field(..., description="98/(t+16) [L_G/R + 3 beta_G] R^2")
    passes: bool = Field(..., description="max_diff <= bound")
    fit_constant: float = Field(..., ge=0, description="max_diff * (t + 1), constant of the O(1/t) fit")


def tvc_decay_check(
    g_prev: ConstraintFamily,
    g_next: ConstraintFamily,
    sample_points: Sequence[np.ndarray],
    params: FunctionClassParams,
    t: int
) -> TVCDecayResult:
    """Compare consecutive families on sample points of B_{4R}"""
    if t < 1:
        raise ValueError("t must be >= 1")
    if g_prev.num_constraints != g_next.num_constraints or g_prev.dimension != g_next.dimension:
        raise DimensionMismatchError("families must have the same shape")

    radius = 4.0 * params.R
    max_diff = 0.0
    for point in sample_points:
        point = np.asarray(point, dtype=float)
        if float(np.linalg.norm(point)) > radius * (1.0 + 1e-12):
            raise SampleOutsideDomainError()
        diff = g_next.values(point) - g_prev.values(point)
        if diff.size:
            max_diff = max(max_diff, float(np.max(np.abs(diff))))

    bound = 98.0 / (t + 16) * params.tvc_scale
    return TVCDecayResult(
        t=t,
        max_diff=max_diff,
        bound=bound,
        passes=max_diff <= bound,
        fit_constant=max_diff * (t + 1),
    )


def fit_decay_exponent(results: List[TVCDecayResult]) -> float:
    """Least-squares slope of log(max_diff) against log(t); about -1 for O(1/t) decay"""
    usable = [result for result in results if result.max_diff > 0.0]
    if len(usable) < 2:
        return float("-inf")
    log_t = np.log([float(result.t) for result in usable])
    log_diff = np.log([result.max_diff for result in usable])
    slope = np.polyfit(log_t, log_diff, 1)[0]
    logger.debug(f"TVC decay fit over {len(usable)} rounds: exponent {slope:.3f}")
    return float(slope)


def tvc_fit_passes(results: List[TVCDecayResult], max_exponent: float = -0.75) -> bool:
    """O(1/t) fit verdict: decay at least as fast as t^max_exponent"""
    return fit_decay_exponent(results) <= max_exponent
