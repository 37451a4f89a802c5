"""Online gradient descent with full projection onto the known feasible set"""
import logging
from typing import Any, List, Optional, Sequence

import numpy as np
from pydantic import BaseModel, Field, PrivateAttr

from ..errors import DimensionMismatchError, EmptyPolyhedronError, ProjectionError, RoundError
from ..observability import run_logger
from ..schemas import CostSample, LearnerConfig, LearnerState, Polyhedron, StepRecord
from ..solvers import project_onto_polyhedron
from .base_learner import BaseLearner
from .cvvpro_learner import step_size

logger = logging.getLogger(__name__)


class FeasibleSetDescription(BaseModel):
    """Full description of C: all inequality rows, optional equalities, optional simplex"""
    rows: Polyhedron = Field(..., description="Inequality (and equality) rows A^T x >= b, E^T x = d")
    simplex: bool = Field(False, description="Also require x >= 0 and sum(x) = 1")

    class Config:
        arbitrary_types_allowed = True

    _polyhedron: Polyhedron = PrivateAttr()

    def model_post_init(self, __context: Any) -> None:
        poly = self.rows
        if self.simplex:
            n = poly.dimension
            poly = Polyhedron(
                normals=np.column_stack([poly.normals, np.eye(n)]),
                offsets=np.concatenate([poly.offsets, np.zeros(n)]),
                eq_normals=np.column_stack([poly.eq_normals, np.ones((n, 1))]),
                eq_offsets=np.append(poly.eq_offsets, 1.0),
            )
        self._polyhedron = poly

    @classmethod
    def from_affine(
        cls,
        intercepts: np.ndarray,
        slopes: np.ndarray,
        simplex: bool = False
    ) -> "FeasibleSetDescription":
        """C = {x | intercepts + slopes x >= 0} (optionally intersected with the simplex)"""
        slopes = np.atleast_2d(np.asarray(slopes, dtype=float))
        rows = Polyhedron.from_arrays(
            slopes.shape[1], normals=slopes.T, offsets=-np.asarray(intercepts, dtype=float)
        )
        return cls(rows=rows, simplex=simplex)

    @classmethod
    def unconstrained(cls, n: int) -> "FeasibleSetDescription":
        return cls(rows=Polyhedron.whole_space(n))

    @property
    def polyhedron(self) -> Polyhedron:
        return self._polyhedron

    @property
    def num_rows(self) -> int:
        return self._polyhedron.num_rows


def ogd_step(
    x: np.ndarray,
    gradient: np.ndarray,
    eta: float,
    feasible: FeasibleSetDescription,
    warm_start: Optional[Sequence[int]] = None
) -> np.ndarray:
    """Proj_C(x - eta * gradient)"""
    if eta <= 0:
        raise ValueError("eta must be positive")
    y = np.asarray(x, dtype=float) - eta * np.asarray(gradient, dtype=float)
    if y.shape != (feasible.polyhedron.dimension,):
        raise DimensionMismatchError("gradient step and feasible set dimensions differ")
    if feasible.num_rows == 0:
        return y
    return project_onto_polyhedron(y, feasible.polyhedron, warm_start=warm_start).v


class OGDLearner(BaseLearner):
    """Projected online gradient descent on the same step schedule as CVV-Pro"""

    def __init__(self, config: LearnerConfig, x0: np.ndarray):
        super().__init__(
            learner_name="ogd",
            description="gradient step followed by full Euclidean projection",
            config=config,
            x0=x0,
        )
        self._active_set: List[int] = []

    def step(self, cost: CostSample, feasible: FeasibleSetDescription) -> StepRecord:
        """Play one round; the projection uses every row of the feasible set"""
        x = self.state.x
        eta = step_size(self.t, self.config.alpha, self.config.step_offset)
        y = x - eta * cost.gradient
        poly = feasible.polyhedron

        if feasible.num_rows == 0:
            x_next, residual = y, 0.0
        else:
            try:
                result = project_onto_polyhedron(y, poly, warm_start=self._active_set)
            except (ProjectionError, EmptyPolyhedronError) as e:
                run_logger.log_projection_failure(self.t, str(e))
                raise RoundError(self.t, e) from e
            self._active_set = result.active_set
            x_next, residual = result.v, result.kkt_residual

        # Displacement per unit step plays the role of the velocity
        v = (x_next - x) / eta
        record = StepRecord(
            t=self.t,
            eta=eta,
            x=x.copy(),
            v=v,
            r=v + cost.gradient,
            cost=cost.value,
            kkt_residual=residual,
            projection_rows=feasible.num_rows,
        )
        return self._commit(LearnerState(x=x_next, t=self.t + 1), record)
