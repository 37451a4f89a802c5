"""Exception hierarchy for cvvpro"""
from typing import Optional

import numpy as np


class CVVProError(Exception):
    """Base class for all cvvpro errors"""


class DegenerateConstraintError(CVVProError, ValueError):
    """A constraint normal vector is zero"""

    def __init__(self, message: str = "degenerate constraint normal"):
        super().__init__(message)


class DimensionMismatchError(CVVProError, ValueError):
    """Array shapes do not agree"""


class EmptyPolyhedronError(CVVProError, RuntimeError):
    """The polyhedron has no feasible point"""

    def __init__(self, message: str = "empty polyhedron", primal_residual: float = float("nan")):
        super().__init__(message)
        self.primal_residual = primal_residual


class ProjectionError(CVVProError, RuntimeError):
    """The active-set solver stopped without a certified solution"""

    def __init__(
        self,
        message: str,
        best_iterate: Optional[np.ndarray] = None,
        kkt_residual: float = float("nan")
    ):
        super().__init__(f"{message} (kkt_residual={kkt_residual:.3e})")
        self.best_iterate = best_iterate
        self.kkt_residual = kkt_residual


class OracleTooLargeError(CVVProError, ValueError):
    """Brute-force oracle refused an instance that is too large"""

    def __init__(self, message: str = "oracle instance too large"):
        super().__init__(message)


class ConstraintEvaluationError(CVVProError, ValueError):
    """A constraint returned a non-finite value or gradient"""

    def __init__(self, index: int, value: float):
        super().__init__(f"non-finite constraint evaluation at index {index}: {value}")
        self.index = index


class SampleOutsideDomainError(CVVProError, ValueError):
    """A sample point lies outside B_{4R}"""

    def __init__(self, message: str = "sample outside domain"):
        super().__init__(message)


class UnknownBoundError(CVVProError, ValueError):
    """Requested theorem bound identifier is not known"""


class BenchmarkInfeasibleError(CVVProError, RuntimeError):
    """The hindsight feasible set is empty"""

    def __init__(self, message: str = "benchmark infeasible"):
        super().__init__(message)


class BenchmarkBudgetError(CVVProError, RuntimeError):
    """Benchmark solver ran out of iterations before certifying optimality"""

    def __init__(self, best_iterate: np.ndarray, kkt_residual: float, iterations: int):
        super().__init__(
            f"benchmark budget exhausted after {iterations} iterations "
            f"(kkt_residual={kkt_residual:.3e})"
        )
        self.best_iterate = best_iterate
        self.kkt_residual = kkt_residual
        self.iterations = iterations


class MissingBenchmarkError(CVVProError, KeyError):
    """No benchmark was solved at the requested round"""


class RoundError(CVVProError, RuntimeError):
    """A learner step failed; carries the round index"""

    def __init__(self, round_index: int, cause: Exception):
        super().__init__(f"round {round_index}: {cause}")
        self.round_index = round_index
        self.cause = cause


class EmissionError(CVVProError, OSError):
    """Writing a log file failed"""

    def __init__(self, path: str, cause: Exception):
        super().__init__(f"failed to write {path}: {cause}")
        self.path = path


class CheckFailure(CVVProError, AssertionError):
    """A diagnostic check found a violated invariant"""
