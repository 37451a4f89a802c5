"""Euclidean projection onto polyhedra

The projection min 1/2 ||v - p||^2 s.t. A^T v >= b, E^T v = d is solved through its dual,
a bound-constrained least-squares problem in the multipliers y = (lambda, mu):

    min_y 1/2 y^T (N^T N) y - y^T (c - N^T p),   lambda >= 0,   N = [A E], c = [b; d]

with v = p + N y. The dual gradient equals the primal slack N^T v - c, so a Lawson-Hanson
style passive-set loop on the dual is a primal active-set method on the projection.
"""
import itertools
import logging
from typing import List, Optional, Sequence

import numpy as np

from ..config import get_settings
from ..errors import (
    DegenerateConstraintError,
    DimensionMismatchError,
    EmptyPolyhedronError,
    OracleTooLargeError,
    ProjectionError,
)
from ..observability import metrics_collector
from ..schemas import Polyhedron, ProjectionResult

logger = logging.getLogger(__name__)


def halfspace_projection(p: np.ndarray, a: np.ndarray, b: float) -> np.ndarray:
    """Project p onto {v | a^T v >= b} in closed form"""
    p = np.asarray(p, dtype=float)
    a = np.asarray(a, dtype=float)
    norm_sq = float(a @ a)
    if norm_sq == 0.0:
        raise DegenerateConstraintError()

    shortfall = b - float(a @ p)
    if shortfall <= 0.0:
        return p.copy()
    return p + (shortfall / norm_sq) * a


def kkt_residual(p: np.ndarray, poly: Polyhedron, v: np.ndarray, multipliers: np.ndarray) -> float:
    """Largest violation among stationarity, primal, dual and complementarity conditions"""
    p = np.asarray(p, dtype=float)
    v = np.asarray(v, dtype=float)
    multipliers = np.asarray(multipliers, dtype=float)
    k, q = poly.num_inequalities, poly.num_equalities
    if p.shape != v.shape or p.shape[0] != poly.dimension or multipliers.shape != (k + q,):
        raise DimensionMismatchError("kkt_residual arguments have inconsistent dimensions")

    lam = multipliers[:k]
    mu = multipliers[k:]
    terms = [0.0]

    stationarity = v - p - poly.normals @ lam - poly.eq_normals @ mu
    if stationarity.size:
        terms.append(float(np.max(np.abs(stationarity))))

    if k:
        slack = poly.normals.T @ v - poly.offsets
        terms.append(float(np.max(np.maximum(0.0, -slack))))
        terms.append(float(np.max(np.maximum(0.0, -lam))))
        terms.append(float(np.max(np.abs(lam * slack))))
    if q:
        terms.append(float(np.max(np.abs(poly.eq_normals.T @ v - poly.eq_offsets))))

    return max(terms)


class ActiveSetProjector:
    """Primal active-set projection solver working on the dual NNLS form

    Instances carry no state between solves; warm starts are passed explicitly.
    """

    def __init__(
        self,
        tol: Optional[float] = None,
        iteration_factor: Optional[int] = None,
        regularization: Optional[float] = None
    ):
        settings = get_settings()
        self.tol = settings.qp_tolerance if tol is None else tol
        self.iteration_factor = settings.qp_iteration_factor if iteration_factor is None else iteration_factor
        self.regularization = settings.gram_regularization if regularization is None else regularization

    def _solve_passive(self, gram: np.ndarray, rhs: np.ndarray, passive: List[int]) -> np.ndarray:
        """Unconstrained dual minimizer restricted to the passive set"""
        z = np.zeros(rhs.shape[0])
        if not passive:
            return z

        block = gram[np.ix_(passive, passive)]
        shifted = block + self.regularization * np.eye(len(passive))
        target = rhs[passive]
        try:
            sol = np.linalg.solve(shifted, target)
            # One refinement step against the unshifted Gram matrix
            sol = sol + np.linalg.solve(shifted, target - block @ sol)
        except np.linalg.LinAlgError:
            sol = np.linalg.lstsq(block, target, rcond=None)[0]
        z[passive] = sol
        return z

    def solve(
        self,
        p: np.ndarray,
        poly: Polyhedron,
        warm_start: Optional[Sequence[int]] = None
    ) -> ProjectionResult:
        """Project p onto poly; warm_start lists inequality positions to start active"""
        p = np.asarray(p, dtype=float)
        if p.shape != (poly.dimension,):
            raise DimensionMismatchError(f"point has shape {p.shape}, polyhedron dimension {poly.dimension}")

        k, q = poly.num_inequalities, poly.num_equalities
        total = k + q
        if total == 0:
            return ProjectionResult(
                v=p.copy(), r=np.zeros_like(p), multipliers=np.zeros(0),
                active_set=[], kkt_residual=0.0, iterations=0
            )

        normals = np.column_stack([poly.normals, poly.eq_normals])
        targets = np.concatenate([poly.offsets, poly.eq_offsets])
        gram = normals.T @ normals
        rhs = targets - normals.T @ p

        # Equalities stay in the passive set for the whole solve
        equalities = list(range(k, total))
        seeded = sorted({int(i) for i in (warm_start or []) if 0 <= int(i) < k})
        passive = seeded + equalities
        y = np.zeros(total)
        blocked = set()
        last_added = None
        cap = self.iteration_factor * (total + 1)
        iterations = 0

        while True:
            while True:
                iterations += 1
                if iterations > cap:
                    v = p + normals @ y
                    residual = kkt_residual(p, poly, v, y)
                    raise ProjectionError("iteration cap exceeded", best_iterate=v, kkt_residual=residual)

                z = self._solve_passive(gram, rhs, passive)
                negative = [i for i in passive if i < k and z[i] <= 0.0]
                if not negative:
                    y = z
                    break

                # Move toward z as far as nonnegativity allows, then drop the blocking indices
                ratios = [(y[i] / (y[i] - z[i]) if y[i] > 0.0 else 0.0, i) for i in negative]
                step, blocking = min(ratios)
                y = y + step * (z - y)
                y[blocking] = 0.0
                dropped = {i for i in negative if y[i] <= 0.0} | {blocking}
                y[list(dropped)] = 0.0
                passive = [i for i in passive if i not in dropped]

            if last_added is not None:
                if last_added in passive:
                    blocked.clear()
                else:
                    blocked.add(last_added)

            slack = gram @ y - rhs
            candidates = [
                i for i in range(k)
                if i not in blocked and slack[i] < -self.tol and i not in passive
            ]
            if not candidates:
                break

            # Most violated first, lowest index on ties
            last_added = min(candidates, key=lambda i: (slack[i], i))
            passive = sorted(passive + [last_added])

        v = p + normals @ y
        residual = kkt_residual(p, poly, v, y)
        if residual > self.tol:
            primal = poly.primal_violation(v)
            if primal > self.tol:
                metrics_collector.record_error("empty polyhedron", f"primal residual {primal:.3e}")
                raise EmptyPolyhedronError(primal_residual=primal)
            metrics_collector.record_error("uncertified projection", f"kkt residual {residual:.3e}")
            raise ProjectionError("projection not certified", best_iterate=v, kkt_residual=residual)

        final_slack = poly.normals.T @ v - poly.offsets
        tight = {i for i in passive if i < k} | {i for i in range(k) if abs(final_slack[i]) <= self.tol}
        metrics_collector.record_projection(iterations, bool(seeded))
        logger.debug(f"Projection solved: k={k} q={q} iterations={iterations} residual={residual:.2e}")

        return ProjectionResult(
            v=v,
            r=v - p,
            multipliers=y,
            active_set=sorted(tight),
            kkt_residual=residual,
            iterations=iterations,
            warm_started=bool(seeded),
        )


def project_onto_polyhedron(
    p: np.ndarray,
    poly: Polyhedron,
    tol: Optional[float] = None,
    warm_start: Optional[Sequence[int]] = None
) -> ProjectionResult:
    """Exact Euclidean projection of p onto poly with certified KKT residual"""
    if tol is not None and tol <= 0:
        raise ValueError("tol must be positive")
    return ActiveSetProjector(tol=tol).solve(p, poly, warm_start=warm_start)


def enumerate_active_sets_oracle(p: np.ndarray, poly: Polyhedron) -> np.ndarray:
    """Brute-force projection: try every subset of inequalities as the active set"""
    p = np.asarray(p, dtype=float)
    limit = get_settings().oracle_max_size
    k, q = poly.num_inequalities, poly.num_equalities
    if poly.dimension > limit or k + q > limit:
        raise OracleTooLargeError()

    feasibility_tol = 1e-9
    best = None
    best_distance = np.inf
    for size in range(k + 1):
        for subset in itertools.combinations(range(k), size):
            normals = np.column_stack([poly.normals[:, list(subset)], poly.eq_normals])
            targets = np.concatenate([poly.offsets[list(subset)], poly.eq_offsets])
            if normals.shape[1]:
                gram = normals.T @ normals
                y = np.linalg.lstsq(gram, targets - normals.T @ p, rcond=None)[0]
                v = p + normals @ y
                if np.max(np.abs(normals.T @ v - targets)) > feasibility_tol:
                    continue
                if size and np.min(y[:size]) < -feasibility_tol:
                    continue
            else:
                v = p.copy()

            if poly.primal_violation(v) > feasibility_tol:
                continue
            distance = float(np.linalg.norm(v - p))
            if distance < best_distance - 1e-15:
                best, best_distance = v, distance

    if best is None:
        raise EmptyPolyhedronError()
    return best
