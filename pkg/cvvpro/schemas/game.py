"""Two-Player Game Schemas"""
from typing import Any, Dict, Optional

import numpy as np
from pydantic import BaseModel, Field, model_validator

from ..errors import DimensionMismatchError


class GameInstance(BaseModel):
    """Random zero-sum game with shared resource constraints C_x x + C_y y <= b"""
    A: np.ndarray = Field(..., description="n x n utility matrix")
    C_x: np.ndarray = Field(..., description="m x n learner resource matrix, entries in [0,1]")
    C_y: np.ndarray = Field(..., description="m x n adversary resource matrix, entries in [0,1]")
    capacity: float = Field(1.0, description="Shared capacity b")
    n: int = Field(..., ge=1, description="Number of pure strategies per player")
    m: int = Field(..., ge=0, description="Number of shared resource constraints")
    seed: int = Field(..., description="Instance seed")

    class Config:
        arbitrary_types_allowed = True

    @model_validator(mode="after")
    def _check_instance(self) -> "GameInstance":
        if self.A.shape != (self.n, self.n):
            raise DimensionMismatchError(f"A must be {self.n} x {self.n}")
        for name, matrix in (("C_x", self.C_x), ("C_y", self.C_y)):
            if matrix.shape != (self.m, self.n):
                raise DimensionMismatchError(f"{name} must be {self.m} x {self.n}")
            if matrix.size and (matrix.min() < 0.0 or matrix.max() > 1.0):
                raise ValueError(f"{name} entries must lie in [0, 1]")
        return self

    def describe(self) -> Dict[str, Any]:
        """Parameters that regenerate this instance"""
        return {"n": self.n, "m": self.m, "capacity": self.capacity, "instance_seed": self.seed}


class RunningAverages(BaseModel):
    """Incremental means of both players' decisions"""
    x_bar: np.ndarray = Field(..., description="(1/t) sum of learner decisions")
    y_bar: np.ndarray = Field(..., description="(1/t) sum of adversary decisions")
    round: int = Field(0, ge=0, description="Number of rounds averaged")

    class Config:
        arbitrary_types_allowed = True

    @classmethod
    def start(cls, n: int) -> "RunningAverages":
        return cls(x_bar=np.zeros(n), y_bar=np.zeros(n), round=0)

    def update(self, x: np.ndarray, y: Optional[np.ndarray] = None) -> None:
        """Fold in one more round; y is omitted for runs without an adversary"""
        self.round += 1
        self.x_bar = self.x_bar + (x - self.x_bar) / self.round
        if y is not None:
            self.y_bar = self.y_bar + (y - self.y_bar) / self.round


class BenchmarkResult(BaseModel):
    """Best fixed decision in hindsight over C_t"""
    t: int = Field(..., ge=1, description="Round the benchmark refers to")
    x_star: np.ndarray = Field(..., description="Hindsight minimizer")
    value: float = Field(..., description="Cumulative cost sum_l f_l(x_star)")
    kkt_residual: float = Field(..., ge=0, description="Gradient-mapping norm plus infeasibility")
    iterations: int = Field(..., ge=0, description="Projected-gradient iterations used")
    convention: str = Field("per_checkpoint", description="per_checkpoint or fixed_final")

    class Config:
        arbitrary_types_allowed = True

    def to_dict(self) -> Dict[str, Any]:
        return {
            "t": self.t,
            "x_star": [float(value) for value in self.x_star],
            "value": float(self.value),
            "kkt_residual": float(self.kkt_residual),
            "iterations": self.iterations,
            "convention": self.convention,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "BenchmarkResult":
        payload = dict(data)
        payload["x_star"] = np.asarray(payload["x_star"], dtype=float)
        return cls(**payload)
