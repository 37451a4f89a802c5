"""Learner Schemas"""
import math
from typing import Any, Dict, Optional

import numpy as np
from pydantic import BaseModel, Field, model_validator

from .constraints import FunctionClassParams


class LearnerConfig(BaseModel):
    """Configuration of a CVV-Pro (or matched OGD) run"""
    alpha: Optional[float] = Field(None, gt=0, description="Softening rate alpha; defaults to L_F/R")
    step_offset: int = Field(0, ge=0, description="Offset d in eta_t = 1/(alpha sqrt(t+d))")
    augment: bool = Field(False, description="Append the hypersphere row outside B_R")
    params: FunctionClassParams = Field(..., description="Function class constants")

    class Config:
        json_schema_extra = {
            "example": {
                "alpha": 100.0,
                "step_offset": 0,
                "augment": False,
                "params": {"R": 1.0, "L_F": 100.0, "L_G": 10.0, "beta_G": 0.0}
            }
        }

    @model_validator(mode="after")
    def _default_alpha(self) -> "LearnerConfig":
        if self.alpha is None:
            self.alpha = self.params.L_F / self.params.R
        return self

    @property
    def feasibility_theorem(self) -> Optional[str]:
        """Feasibility bound whose step-offset hypothesis this configuration meets

        The augmented bound needs d = 15, the plain one d = 0 without the hypersphere row.
        """
        if self.augment and self.step_offset == 15:
            return "augmented_feasibility"
        if not self.augment and self.step_offset == 0:
            return "thm1_feasibility"
        return None

    @property
    def drift_bound_applies(self) -> bool:
        """The decay bound on averaged constraints holds for alpha = L_F/R with d = 15"""
        return self.step_offset == 15 and math.isclose(self.alpha, self.params.L_F / self.params.R, rel_tol=1e-9)


class CostSample(BaseModel):
    """Cost value and gradient revealed at x_t"""
    value: float = Field(..., description="f_t(x_t)")
    gradient: np.ndarray = Field(..., description="Gradient of f_t at x_t")

    class Config:
        arbitrary_types_allowed = True


class LearnerState(BaseModel):
    """Current decision and round"""
    x: np.ndarray = Field(..., description="Decision x_t")
    t: int = Field(1, ge=1, description="Round index")

    class Config:
        arbitrary_types_allowed = True

    @model_validator(mode="after")
    def _check_finite(self) -> "LearnerState":
        if not np.all(np.isfinite(self.x)):
            raise ValueError("decision must be finite")
        return self


class StepRecord(BaseModel):
    """Everything recorded about one learner round"""
    t: int = Field(..., ge=1, description="Round index")
    eta: float = Field(..., description="Step size eta_t")
    x: np.ndarray = Field(..., description="Decision played")
    v: np.ndarray = Field(..., description="Velocity (or OGD displacement / eta)")
    r: np.ndarray = Field(..., description="v plus the cost gradient")
    cost: float = Field(..., description="f_t(x_t)")
    violated_count: int = Field(0, ge=0, description="|I(x_t)| over all oracle rows")
    resource_violated_count: Optional[int] = Field(None, ge=0, description="Violated rows of the tracked family")
    min_constraint_value: Optional[float] = Field(None, description="min_i g_{t,i}(x_t) over the tracked family")
    hypersphere_active: bool = Field(False, description="Whether the attraction row was appended")
    kkt_residual: float = Field(0.0, ge=0, description="KKT residual of the projection")
    projection_rows: int = Field(0, ge=0, description="Rows in the solved projection problem")
    adversary_move: Optional[np.ndarray] = Field(None, description="y_t when the cost comes from a game")

    class Config:
        arbitrary_types_allowed = True

    @property
    def velocity_norm(self) -> float:
        return float(np.linalg.norm(self.v))

    def to_dict(self) -> Dict[str, Any]:
        """JSON-ready representation"""
        data = {
            "t": self.t,
            "eta": float(self.eta),
            "x": [float(value) for value in self.x],
            "v": [float(value) for value in self.v],
            "r": [float(value) for value in self.r],
            "cost": float(self.cost),
            "violated_count": self.violated_count,
            "resource_violated_count": self.resource_violated_count,
            "min_constraint_value": (
                float(self.min_constraint_value) if self.min_constraint_value is not None else None
            ),
            "hypersphere_active": self.hypersphere_active,
            "kkt_residual": float(self.kkt_residual),
            "projection_rows": self.projection_rows,
        }
        if self.adversary_move is not None:
            data["adversary_move"] = [float(value) for value in self.adversary_move]
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "StepRecord":
        """Inverse of to_dict"""
        payload = dict(data)
        for key in ("x", "v", "r"):
            payload[key] = np.asarray(payload[key], dtype=float)
        if payload.get("adversary_move") is not None:
            payload["adversary_move"] = np.asarray(payload["adversary_move"], dtype=float)
        return cls(**payload)


class BoundReport(BaseModel):
    """A closed-form theorem bound evaluated at a round or horizon"""
    theorem: str = Field(..., description="Bound identifier")
    t: int = Field(..., ge=1, description="Round t or horizon T")
    value: float = Field(..., description="Bound value")
    constants: Dict[str, float] = Field(default_factory=dict, description="Constants entering the bound")

    class Config:
        json_schema_extra = {
            "example": {
                "theorem": "thm1_regret",
                "t": 100,
                "value": 180.0,
                "constants": {"c": 18.0, "L_F": 1.0, "R": 1.0}
            }
        }
