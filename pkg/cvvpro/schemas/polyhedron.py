"""Polyhedron and Projection Schemas"""
from typing import List

import numpy as np
from pydantic import BaseModel, Field, model_validator

from ..errors import DimensionMismatchError


def _as_matrix(value, n: int) -> np.ndarray:
    if value is None:
        return np.zeros((n, 0))
    matrix = np.asarray(value, dtype=float)
    if matrix.ndim == 1:
        matrix = matrix.reshape(n, -1)
    return matrix


class Polyhedron(BaseModel):
    """Linear description {v | A^T v >= b, E^T v = d}; columns of A and E are normals"""
    normals: np.ndarray = Field(..., description="n x k matrix, column i is inequality normal a_i")
    offsets: np.ndarray = Field(..., description="length-k vector, a_i^T v >= b_i")
    eq_normals: np.ndarray = Field(..., description="n x q matrix, column j is equality normal e_j")
    eq_offsets: np.ndarray = Field(..., description="length-q vector, e_j^T v = d_j")

    class Config:
        arbitrary_types_allowed = True
        json_schema_extra = {
            "example": {
                "normals": [[1.0], [0.0]],
                "offsets": [1.0],
                "eq_normals": [[], []],
                "eq_offsets": []
            }
        }

    @model_validator(mode="after")
    def _check_shapes(self) -> "Polyhedron":
        if self.normals.ndim != 2 or self.eq_normals.ndim != 2:
            raise DimensionMismatchError("normals must be 2-D (n x k)")
        n, k = self.normals.shape
        if self.offsets.shape != (k,):
            raise DimensionMismatchError(f"offsets length {self.offsets.shape} != {k}")
        if self.eq_normals.shape[0] != n:
            raise DimensionMismatchError("equality normals have wrong dimension")
        if self.eq_offsets.shape != (self.eq_normals.shape[1],):
            raise DimensionMismatchError("eq_offsets length does not match eq_normals")
        if not (np.all(np.isfinite(self.normals)) and np.all(np.isfinite(self.eq_normals))):
            raise ValueError("normal columns must have finite entries")
        return self

    @classmethod
    def from_arrays(
        cls,
        n: int,
        normals=None,
        offsets=None,
        eq_normals=None,
        eq_offsets=None
    ) -> "Polyhedron":
        """Build a polyhedron coercing lists/None into float arrays"""
        return cls(
            normals=_as_matrix(normals, n),
            offsets=np.asarray(offsets if offsets is not None else [], dtype=float).ravel(),
            eq_normals=_as_matrix(eq_normals, n),
            eq_offsets=np.asarray(eq_offsets if eq_offsets is not None else [], dtype=float).ravel(),
        )

    @classmethod
    def whole_space(cls, n: int) -> "Polyhedron":
        """The polyhedron with no rows, i.e. all of R^n"""
        return cls.from_arrays(n)

    @property
    def dimension(self) -> int:
        return self.normals.shape[0]

    @property
    def num_inequalities(self) -> int:
        return self.normals.shape[1]

    @property
    def num_equalities(self) -> int:
        return self.eq_normals.shape[1]

    @property
    def num_rows(self) -> int:
        return self.num_inequalities + self.num_equalities

    def with_inequality(self, normal: np.ndarray, offset: float) -> "Polyhedron":
        """Return a copy with one more inequality row appended"""
        return Polyhedron(
            normals=np.column_stack([self.normals, np.asarray(normal, dtype=float)]),
            offsets=np.append(self.offsets, float(offset)),
            eq_normals=self.eq_normals,
            eq_offsets=self.eq_offsets,
        )

    def with_equalities(self, eq_normals: np.ndarray, eq_offsets: np.ndarray) -> "Polyhedron":
        """Return a copy with extra equality rows appended"""
        eq_normals = _as_matrix(eq_normals, self.dimension)
        return Polyhedron(
            normals=self.normals,
            offsets=self.offsets,
            eq_normals=np.column_stack([self.eq_normals, eq_normals]),
            eq_offsets=np.concatenate([self.eq_offsets, np.asarray(eq_offsets, dtype=float).ravel()]),
        )

    def primal_violation(self, v: np.ndarray) -> float:
        """Largest violation of any row at v (0 if v is feasible)"""
        worst = 0.0
        if self.num_inequalities:
            worst = max(worst, float(np.max(self.offsets - self.normals.T @ v)))
        if self.num_equalities:
            worst = max(worst, float(np.max(np.abs(self.eq_normals.T @ v - self.eq_offsets))))
        return worst


class ProjectionResult(BaseModel):
    """Euclidean projection of a point onto a polyhedron with its KKT certificate"""
    v: np.ndarray = Field(..., description="Projected point")
    r: np.ndarray = Field(..., description="v minus the projected point p")
    multipliers: np.ndarray = Field(..., description="Inequality multipliers followed by equality multipliers")
    active_set: List[int] = Field(default_factory=list, description="Inequalities tight at v, ascending")
    kkt_residual: float = Field(..., ge=0, description="Max of stationarity, primal, dual and complementarity violations")
    iterations: int = Field(0, ge=0, description="Active-set iterations used")
    warm_started: bool = Field(False, description="Whether a previous active set seeded the solve")

    class Config:
        arbitrary_types_allowed = True

