"""Constraint Oracle Schemas"""
import math
from typing import List

import numpy as np
from pydantic import BaseModel, Field, model_validator

from ..errors import DimensionMismatchError


class FunctionClassParams(BaseModel):
    """Constants of the cost/constraint function class"""
    R: float = Field(..., gt=0, description="Radius of the ball B_R containing the feasible sets")
    L_F: float = Field(..., gt=0, description="Bound on cost gradient norms")
    L_G: float = Field(..., gt=0, description="Bound on constraint gradient norms over B_4R")
    beta_G: float = Field(0.0, ge=0, description="Smoothness constant of the constraints")

    class Config:
        json_schema_extra = {
            "example": {"R": 1.0, "L_F": 1.0, "L_G": 5.0, "beta_G": 1.0}
        }

    @model_validator(mode="after")
    def _check_finite(self) -> "FunctionClassParams":
        if not all(math.isfinite(value) for value in (self.R, self.L_F, self.L_G, self.beta_G)):
            raise ValueError("function class parameters must be finite")
        return self

    @property
    def tvc_scale(self) -> float:
        """[L_G/R + 3 beta_G] R^2, the unit of the time-variation bounds"""
        return (self.L_G / self.R + 3.0 * self.beta_G) * self.R ** 2


class ViolationReport(BaseModel):
    """Oracle answer at x_t: violated indices, their values and gradient columns"""
    indices: List[int] = Field(default_factory=list, description="Sorted indices i with g_i(x_t) <= 0")
    values: np.ndarray = Field(..., description="g_i(x_t) for the reported indices")
    gradients: np.ndarray = Field(..., description="n x |indices| matrix of gradient columns")

    class Config:
        arbitrary_types_allowed = True

    @model_validator(mode="after")
    def _check_report(self) -> "ViolationReport":
        if self.gradients.ndim != 2 or self.gradients.shape[1] != len(self.indices):
            raise DimensionMismatchError("gradient column count must equal index count")
        if self.values.shape != (len(self.indices),):
            raise DimensionMismatchError("value count must equal index count")
        if list(self.indices) != sorted(self.indices):
            raise ValueError("indices must be sorted ascending")
        if np.any(self.values > 0):
            raise ValueError("reported values must be <= 0")
        return self

    @classmethod
    def empty(cls, n: int) -> "ViolationReport":
        """Report for a point where nothing is violated"""
        return cls(indices=[], values=np.zeros(0), gradients=np.zeros((n, 0)))

    @property
    def count(self) -> int:
        return len(self.indices)


class AveragedConstraintState(BaseModel):
    """Running mean of affine constraints g(x) = intercept + slope x over t rounds"""
    round: int = Field(..., ge=1, description="Number of rounds averaged")
    avg_intercepts: np.ndarray = Field(..., description="Length-m running mean of intercepts")
    avg_slopes: np.ndarray = Field(..., description="m x n running mean of slopes")

    class Config:
        arbitrary_types_allowed = True

    @model_validator(mode="after")
    def _check_shapes(self) -> "AveragedConstraintState":
        if self.avg_slopes.ndim != 2 or self.avg_slopes.shape[0] != self.avg_intercepts.shape[0]:
            raise DimensionMismatchError("slopes must be m x n with m = len(intercepts)")
        return self

    @property
    def num_constraints(self) -> int:
        return self.avg_intercepts.shape[0]

    @property
    def dimension(self) -> int:
        return self.avg_slopes.shape[1]

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        """g_t(x) for all m rows"""
        return self.avg_intercepts + self.avg_slopes @ x
