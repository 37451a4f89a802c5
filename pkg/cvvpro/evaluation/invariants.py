"""Structural inequalities checked along recorded trajectories"""
import logging
import math
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, Field

from ..config import get_settings
from ..constraints import ConstraintFamily, evaluate_violations
from ..harness import sample_simplex_uniform
from ..learners import inactive_row_bound
from ..schemas import FunctionClassParams, LearnerConfig, MetricsLog, ViolationReport

logger = logging.getLogger(__name__)

FamilyAtRound = Callable[[int], ConstraintFamily]


def _tolerance(tol: Optional[float]) -> float:
    return get_settings().lemma_tolerance if tol is None else tol


def check_claim_membership(
    report: ViolationReport,
    alpha: float,
    x_t: np.ndarray,
    feasible_samples: Sequence[np.ndarray],
    tol: Optional[float] = None
) -> List[bool]:
    """alpha (x - x_t) lies in V_alpha(x_t) for every feasible sample x"""
    tol = _tolerance(tol)
    if report.count == 0:
        return [True] * len(feasible_samples)
    offsets = -alpha * report.values
    flags = []
    for x in feasible_samples:
        lhs = report.gradients.T @ (alpha * (np.asarray(x) - x_t))
        flags.append(bool(np.all(lhs >= offsets - tol)))
    return flags


def check_normal_cone_inequality(
    r_t: np.ndarray,
    x_t: np.ndarray,
    feasible_samples: Sequence[np.ndarray],
    tol: Optional[float] = None
) -> List[bool]:
    """r_t^T (x - x_t) >= 0 for every feasible sample x"""
    tol = _tolerance(tol)
    return [bool(r_t @ (np.asarray(x) - x_t) >= -tol) for x in feasible_samples]


def check_velocity_bound(
    v_t: np.ndarray,
    x_t: np.ndarray,
    gradient: np.ndarray,
    alpha: float,
    feasible_samples: Sequence[np.ndarray],
    tol: Optional[float] = None
) -> List[bool]:
    """||v_t|| <= alpha ||x - x_t|| + 2 ||grad f_t(x_t)|| for every feasible sample x"""
    tol = _tolerance(tol)
    speed = float(np.linalg.norm(v_t))
    pull = 2.0 * float(np.linalg.norm(gradient))
    return [
        bool(speed <= alpha * float(np.linalg.norm(np.asarray(x) - x_t)) + pull + tol)
        for x in feasible_samples
    ]


class IntersectionTracker(BaseModel):
    """Cones S_l = {x | G(x_l)^T (x - x_l) >= 0} of rounds with nonempty reports"""
    cones: List[Tuple[np.ndarray, np.ndarray]] = Field(default_factory=list, description="(x_l, n x k_l normals)")

    class Config:
        arbitrary_types_allowed = True

    def add(self, x_t: np.ndarray, report: ViolationReport) -> None:
        if report.count:
            self.cones.append((np.array(x_t, dtype=float), report.gradients.copy()))

    @classmethod
    def from_log(cls, log: MetricsLog, family_at: FamilyAtRound) -> "IntersectionTracker":
        tracker = cls()
        for record in log.records:
            tracker.add(record.x, evaluate_violations(family_at(record.t), record.x))
        return tracker


def intersection_violations(
    tracker: IntersectionTracker,
    x: np.ndarray,
    tol: Optional[float] = None
) -> Tuple[int, float]:
    """Number of stored cones that exclude x, and the most negative row margin (inf if none)"""
    tol = get_settings().membership_tolerance if tol is None else tol
    x = np.asarray(x, dtype=float)
    excluded = 0
    worst = math.inf
    for x_l, normals in tracker.cones:
        margin = float(np.min(normals.T @ (x - x_l)))
        worst = min(worst, margin)
        if margin < -tol:
            excluded += 1
    return excluded, worst


def intersection_membership(tracker: IntersectionTracker, x: np.ndarray, tol: Optional[float] = None) -> bool:
    """x lies in every stored cone; true for an empty tracker"""
    return intersection_violations(tracker, x, tol)[0] == 0


class RecursionReport(BaseModel):
    """Worst margins of the one-step constraint recursion along a trajectory"""
    checked_rounds: int = Field(0, ge=0, description="Rounds t with a successor t+1")
    worst_margin_active: float = Field(math.inf, description="min over violated rows of lhs - bound")
    worst_margin_inactive: float = Field(math.inf, description="min over non-violated rows of lhs - bound")
    velocity_max: float = Field(0.0, ge=0, description="Largest recorded ||v_t||")
    drift_exceeded_rounds: int = Field(0, ge=0, description="Rounds whose drift exceeded the decay bound")
    worst_drift_ratio: float = Field(0.0, ge=0, description="Largest observed drift over the decay bound")
    drift_asserted: bool = Field(False, description="Whether the decay bound's hypotheses hold for the run")
    failures: List[Tuple[int, int]] = Field(default_factory=list, description="(t, i) pairs below the bound")

    @property
    def one_step_passed(self) -> bool:
        """Every row stays above its one-step bound, using the observed drift where it exceeds the decay bound"""
        return not self.failures

    @property
    def drift_within_bound(self) -> bool:
        return self.drift_exceeded_rounds == 0

    @property
    def passed(self) -> bool:
        """One-step bounds hold, and the drift stays within the decay bound when that bound is asserted"""
        return self.one_step_passed and (self.drift_within_bound or not self.drift_asserted)


def constraint_recursion_check(
    trajectory: MetricsLog,
    constraints: Union[ConstraintFamily, FamilyAtRound],
    params: FunctionClassParams,
    alpha: float,
    d: int,
    time_varying: bool = False,
    tol: Optional[float] = None
) -> RecursionReport:
    """g_{t+1,i}(x_{t+1}) against the one-step lower bounds

    Violated rows: (1 - alpha eta_t) g_{t,i}(x_t) - eta_t^2 V^2 beta_G / 2 - drift.
    Other rows: -eta_{t+1} V [2 L_G + V beta_G / alpha] - drift.
    For time-varying families the drift is 2 eta_t^2 [L_G/R + 3 beta_G] V^2 while the
    observed change of the family stays within it, and the observed change otherwise.
    Rounds where the observed change wins are counted separately: the decay bound is only
    guaranteed for alpha = L_F/R with d = 15, and exceeding it fails the report there.
    """
    tol = _tolerance(tol)
    records = trajectory.records
    if d < 0:
        raise ValueError("d must be >= 0")
    family_at = (lambda t: constraints) if isinstance(constraints, ConstraintFamily) else constraints
    velocity = max((record.velocity_norm for record in records), default=0.0)
    config = LearnerConfig(alpha=alpha, step_offset=d, params=params)
    report = RecursionReport(velocity_max=velocity, drift_asserted=time_varying and config.drift_bound_applies)

    worst_active = math.inf
    worst_inactive = math.inf
    for current, following in zip(records, records[1:]):
        eta, eta_next = current.eta, following.eta
        g_now = family_at(current.t).values(current.x)
        next_family = family_at(following.t)
        g_next = next_family.values(following.x)

        drift = 0.0
        if time_varying:
            drift = 2.0 * eta ** 2 * params.tvc_scale / params.R ** 2 * velocity ** 2
            observed = float(np.max(np.abs(g_next - family_at(current.t).values(following.x)))) if g_next.size else 0.0
            if drift > 0.0:
                report.worst_drift_ratio = max(report.worst_drift_ratio, observed / drift)
            if observed > drift:
                report.drift_exceeded_rounds += 1
                drift = observed

        smooth = eta ** 2 * velocity ** 2 * params.beta_G / 2.0
        active_bound = (1.0 - alpha * eta) * g_now - smooth - drift
        inactive_bound = inactive_row_bound(params, velocity, alpha, eta_next) - drift
        violated = g_now <= 0.0
        margins = np.where(violated, g_next - active_bound, g_next - inactive_bound)

        if np.any(violated):
            worst_active = min(worst_active, float(np.min(margins[violated])))
        if np.any(~violated):
            worst_inactive = min(worst_inactive, float(np.min(margins[~violated])))
        for i in np.flatnonzero(margins < -tol):
            report.failures.append((current.t, int(i)))
        report.checked_rounds += 1

    report.worst_margin_active = worst_active
    report.worst_margin_inactive = worst_inactive
    logger.debug(
        f"Recursion check: {report.checked_rounds} rounds, active margin {worst_active:.3e}, "
        f"inactive margin {worst_inactive:.3e}, failures {len(report.failures)}"
    )
    return report


def geometric_rounds(T: int, include_last: bool = True) -> List[int]:
    """1, 2, 4, ... up to T (and T itself)"""
    rounds = []
    t = 1
    while t <= T:
        rounds.append(t)
        t *= 2
    if include_last and T >= 1 and rounds[-1] != T:
        rounds.append(T)
    return rounds


def sample_feasible_points(
    family: ConstraintFamily,
    count: int,
    rng: np.random.Generator,
    domain: str = "simplex",
    radius: float = 1.0,
    anchor: Optional[np.ndarray] = None,
    max_draws: Optional[int] = None,
    feasibility_tol: float = 1e-9
) -> List[np.ndarray]:
    """Seeded feasible points of the family by rejection from the domain

    Draws come uniformly from the simplex or from the ball of the given radius. If a
    feasible anchor is supplied, rejected draws are pulled toward it by halving the
    distance until feasible, which keeps the sampler useful on thin feasible sets.
    """
    n = family.dimension
    max_draws = 20 * count if max_draws is None else max_draws
    samples: List[np.ndarray] = []

    for _ in range(max_draws):
        if len(samples) >= count:
            break
        if domain == "simplex":
            candidate = sample_simplex_uniform(n, rng)
        elif domain == "ball":
            direction = rng.standard_normal(n)
            direction /= np.linalg.norm(direction)
            candidate = radius * rng.random() ** (1.0 / n) * direction
        else:
            raise ValueError(f"unknown sampling domain '{domain}'")

        if np.all(family.values(candidate) >= -feasibility_tol):
            samples.append(candidate)
            continue
        if anchor is None:
            continue
        for _ in range(40):
            candidate = anchor + 0.5 * (candidate - anchor)
            if np.all(family.values(candidate) >= -feasibility_tol):
                samples.append(candidate)
                break

    if len(samples) < count:
        logger.debug(f"Feasible sampler produced {len(samples)} of {count} points")
    return samples
