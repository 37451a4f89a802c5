"""CVV-Pro: constrained online learning by projecting onto the velocity polyhedron

Each round the learner sees only the violated constraints at x_t, builds

    V_alpha(x_t) = {v | grad g_i(x_t)^T v >= -alpha g_i(x_t),  i in I(x_t)}

projects -grad f_t(x_t) onto it and moves x_{t+1} = x_t + eta_t v_t.
"""
import logging
import math
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..errors import DimensionMismatchError, EmptyPolyhedronError, ProjectionError, RoundError
from ..observability import run_logger
from ..schemas import (
    CostSample,
    LearnerConfig,
    LearnerState,
    Polyhedron,
    ProjectionResult,
    StepRecord,
    ViolationReport,
)
from ..solvers import project_onto_polyhedron
from .base_learner import BaseLearner

logger = logging.getLogger(__name__)

# Row label of the attraction constraint in warm-start bookkeeping
HYPERSPHERE_ROW = -1

EqualityRows = Tuple[np.ndarray, np.ndarray]


def step_size(t: int, alpha: float, d: int = 0) -> float:
    """eta_t = 1 / (alpha sqrt(t + d))"""
    if t < 1 or alpha <= 0 or d < 0:
        raise ValueError("step_size needs t >= 1, alpha > 0, d >= 0")
    return 1.0 / (alpha * math.sqrt(t + d))


def build_velocity_polyhedron(report: ViolationReport, alpha: float) -> Polyhedron:
    """One row grad g_i^T v >= -alpha g_i per reported constraint"""
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    n = report.gradients.shape[0]
    return Polyhedron.from_arrays(n, normals=report.gradients, offsets=-alpha * report.values)


def augment_with_hypersphere(poly: Polyhedron, x: np.ndarray, R: float, alpha: float) -> Polyhedron:
    """Append -x^T v >= alpha (||x||^2 - R^2)/2 when ||x|| > R"""
    if R <= 0 or alpha <= 0:
        raise ValueError("R and alpha must be positive")
    x = np.asarray(x, dtype=float)
    norm_sq = float(x @ x)
    if math.sqrt(norm_sq) <= R:
        return poly
    return poly.with_inequality(-x, alpha * (norm_sq - R ** 2) / 2.0)


def _cvvpro_round(
    state: LearnerState,
    cost: CostSample,
    report: ViolationReport,
    config: LearnerConfig,
    extra_rows: Optional[EqualityRows],
    warm_start: Optional[Sequence[int]]
) -> Tuple[LearnerState, StepRecord, ProjectionResult]:
    n = state.x.shape[0]
    if cost.gradient.shape != (n,) or report.gradients.shape[0] != n:
        raise DimensionMismatchError("cost gradient and report must match the decision dimension")

    poly = build_velocity_polyhedron(report, config.alpha)
    hypersphere_active = False
    if config.augment:
        augmented = augment_with_hypersphere(poly, state.x, config.params.R, config.alpha)
        hypersphere_active = augmented is not poly
        poly = augmented
    if extra_rows is not None:
        poly = poly.with_equalities(*extra_rows)

    try:
        result = project_onto_polyhedron(-cost.gradient, poly, warm_start=warm_start)
    except (ProjectionError, EmptyPolyhedronError) as e:
        run_logger.log_projection_failure(state.t, str(e))
        raise RoundError(state.t, e) from e

    eta = step_size(state.t, config.alpha, config.step_offset)
    record = StepRecord(
        t=state.t,
        eta=eta,
        x=state.x.copy(),
        v=result.v,
        r=result.v + cost.gradient,
        cost=cost.value,
        violated_count=report.count,
        hypersphere_active=hypersphere_active,
        kkt_residual=result.kkt_residual,
        projection_rows=poly.num_rows,
    )
    return LearnerState(x=state.x + eta * result.v, t=state.t + 1), record, result


def cvvpro_step(
    state: LearnerState,
    cost: CostSample,
    report: ViolationReport,
    config: LearnerConfig,
    extra_rows: Optional[EqualityRows] = None,
    warm_start: Optional[Sequence[int]] = None
) -> Tuple[LearnerState, StepRecord]:
    """One CVV-Pro round: project -grad f onto V_alpha(x_t) and step

    Args:
        state: Current decision and round
        cost: f_t(x_t) and its gradient
        report: Violation report taken at state.x
        config: alpha, step offset, augmentation flag
        extra_rows: Permanent equality rows (E, d) added to the polyhedron
        warm_start: Inequality positions to seed the active set with

    Raises:
        RoundError: the projection failed; carries the round index
    """
    next_state, record, _ = _cvvpro_round(state, cost, report, config, extra_rows, warm_start)
    return next_state, record


class CVVProLearner(BaseLearner):
    """CVV-Pro learner with warm-started projections across rounds"""

    def __init__(
        self,
        config: LearnerConfig,
        x0: np.ndarray,
        extra_rows: Optional[EqualityRows] = None
    ):
        super().__init__(
            learner_name="cvvpro",
            description="velocity-polyhedron projection of the negative cost gradient",
            config=config,
            x0=x0,
        )
        self.extra_rows = extra_rows
        self._active_labels: List[int] = []

    @property
    def equality_rows(self) -> int:
        if self.extra_rows is None:
            return 0
        return np.asarray(self.extra_rows[0], dtype=float).reshape(self.dimension, -1).shape[1]

    def _warm_positions(self, report: ViolationReport) -> List[int]:
        """Map last round's active constraint labels onto this round's row positions"""
        positions = {index: position for position, index in enumerate(report.indices)}
        # The attraction row, if appended, sits right after the reported rows
        positions[HYPERSPHERE_ROW] = report.count
        return [positions[label] for label in self._active_labels if label in positions]

    def step(self, cost: CostSample, report: ViolationReport) -> StepRecord:
        """Play one round given the revealed cost and violation report"""
        next_state, record, result = _cvvpro_round(
            self.state, cost, report, self.config, self.extra_rows, self._warm_positions(report)
        )
        labels = list(report.indices) + ([HYPERSPHERE_ROW] if record.hypersphere_active else [])
        self._active_labels = [labels[position] for position in result.active_set]
        return self._commit(next_state, record)
