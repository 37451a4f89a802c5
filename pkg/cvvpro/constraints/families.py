"""Constraint families g(x) >= 0 with full-evaluation and violation-oracle access"""
from abc import ABC, abstractmethod
from typing import List, Sequence, Tuple

import numpy as np

from ..errors import DimensionMismatchError
from ..schemas import AveragedConstraintState


class ConstraintFamily(ABC):
    """Base class for a family of m constraints on R^n

    evaluate() gives full information (all values and gradients) for baselines and
    diagnostics; the learner only ever sees the violation report built from it.
    """

    def __init__(self, dimension: int, num_constraints: int):
        self.dimension = dimension
        self.num_constraints = num_constraints

    @abstractmethod
    def evaluate(self, x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """Return (values of length m, gradients as n x m columns)"""

    def values(self, x: np.ndarray) -> np.ndarray:
        return self.evaluate(x)[0]

    def affine_rows(self) -> Tuple[np.ndarray, np.ndarray]:
        """(intercepts, slopes) if the family is affine; used for full projections"""
        raise NotImplementedError(f"{type(self).__name__} is not affine")

    @property
    def is_affine(self) -> bool:
        return False


class AffineConstraints(ConstraintFamily):
    """g(x) = intercepts + slopes @ x"""

    def __init__(self, intercepts: np.ndarray, slopes: np.ndarray):
        intercepts = np.asarray(intercepts, dtype=float).ravel()
        slopes = np.asarray(slopes, dtype=float)
        if slopes.ndim != 2 or slopes.shape[0] != intercepts.shape[0]:
            raise DimensionMismatchError("slopes must be m x n with m = len(intercepts)")
        super().__init__(slopes.shape[1], slopes.shape[0])
        self.intercepts = intercepts
        self.slopes = slopes

    def evaluate(self, x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        return self.intercepts + self.slopes @ x, self.slopes.T

    def affine_rows(self) -> Tuple[np.ndarray, np.ndarray]:
        return self.intercepts, self.slopes

    @property
    def is_affine(self) -> bool:
        return True


class NonnegativityConstraints(AffineConstraints):
    """Simplex facets g_i(x) = x_i"""

    def __init__(self, dimension: int):
        super().__init__(np.zeros(dimension), np.eye(dimension))

    def evaluate(self, x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        return np.array(x, dtype=float), self.slopes


class BallConstraints(ConstraintFamily):
    """Concave quadratics g_i(x) = 1/2 (radius_i^2 - ||x - center_i||^2), 1-smooth"""

    def __init__(self, centers: np.ndarray, radii: Sequence[float]):
        centers = np.atleast_2d(np.asarray(centers, dtype=float))
        radii = np.asarray(radii, dtype=float).ravel()
        if centers.shape[0] != radii.shape[0]:
            raise DimensionMismatchError("one radius per center is required")
        if np.any(radii <= 0):
            raise ValueError("radii must be positive")
        super().__init__(centers.shape[1], centers.shape[0])
        self.centers = centers
        self.radii = radii

    def evaluate(self, x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        offsets = x[None, :] - self.centers
        values = 0.5 * (self.radii ** 2 - np.sum(offsets ** 2, axis=1))
        return values, -offsets.T


class HypersphereConstraint(ConstraintFamily):
    """The single attraction constraint 1/2 (R^2 - ||x||^2)"""

    def __init__(self, dimension: int, R: float):
        if R <= 0:
            raise ValueError("R must be positive")
        super().__init__(dimension, 1)
        self.R = R

    def evaluate(self, x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        value = 0.5 * (self.R ** 2 - float(x @ x))
        return np.array([value]), -np.asarray(x, dtype=float).reshape(-1, 1)


class AveragedAffineConstraints(ConstraintFamily):
    """Time-averaged affine constraints backed by an AveragedConstraintState

    Only the owning run may call update(); reads during an update are unsupported.
    """

    def __init__(self, state: AveragedConstraintState):
        super().__init__(state.dimension, state.num_constraints)
        self.state = state

    def evaluate(self, x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        return self.state.evaluate(x), self.state.avg_slopes.T

    def affine_rows(self) -> Tuple[np.ndarray, np.ndarray]:
        return self.state.avg_intercepts, self.state.avg_slopes

    @property
    def is_affine(self) -> bool:
        return True

    def update(self, intercepts: np.ndarray, slopes: np.ndarray) -> None:
        """Fold the next round's affine constraint into the average"""
        from .oracles import averaged_update

        self.state = averaged_update(self.state, intercepts, slopes)

    def snapshot(self) -> AffineConstraints:
        """Immutable copy of the current average"""
        return AffineConstraints(self.state.avg_intercepts.copy(), self.state.avg_slopes.copy())


class StackedConstraints(ConstraintFamily):
    """Concatenation of families; row indices follow the order of the parts"""

    def __init__(self, parts: List[ConstraintFamily]):
        if not parts:
            raise ValueError("at least one family is required")
        dimension = parts[0].dimension
        if any(part.dimension != dimension for part in parts):
            raise DimensionMismatchError("stacked families must share the dimension")
        super().__init__(dimension, sum(part.num_constraints for part in parts))
        self.parts = parts

    def evaluate(self, x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        values, gradients = zip(*(part.evaluate(x) for part in self.parts))
        return np.concatenate(values), np.column_stack(gradients)

    def affine_rows(self) -> Tuple[np.ndarray, np.ndarray]:
        intercepts, slopes = zip(*(part.affine_rows() for part in self.parts))
        return np.concatenate(intercepts), np.vstack(slopes)

    @property
    def is_affine(self) -> bool:
        return all(part.is_affine for part in self.parts)
