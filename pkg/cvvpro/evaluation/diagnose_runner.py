"""Diagnostics Runner: replays a recorded run and checks its structural guarantees"""
import json
import logging
import math
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple, Union

import numpy as np

from ..config import get_settings
from ..constraints import (
    BallConstraints,
    ConstraintFamily,
    evaluate_violations,
    hypersphere_constraint,
    tvc_decay_check,
    tvc_fit_passes,
)
from ..errors import EmptyPolyhedronError, EmissionError
from ..harness import (
    feasible_set,
    game_function_params,
    generate_instance,
    make_stream,
    oracle_constraints,
    resource_constraints,
    round_constraint,
    running_means,
    sample_simplex_uniform,
)
from ..learners import feasibility_convergence_bound, theorem_bounds
from ..observability import run_logger
from ..schemas import FunctionClassParams, LearnerConfig, MetricsLog
from ..solvers import project_onto_polyhedron
from .invariants import (
    IntersectionTracker,
    check_claim_membership,
    check_normal_cone_inequality,
    check_velocity_bound,
    constraint_recursion_check,
    geometric_rounds,
    intersection_violations,
    sample_feasible_points,
)

logger = logging.getLogger(__name__)

CHECKS = ("claim1", "lemma2", "intersection", "recursion", "bounds", "velocity", "tvc")

# The game's averaged constraints do not keep C_T inside the cones of past reports,
# so intersection is opt-in there
DEFAULT_CHECKS: Dict[str, Tuple[str, ...]] = {
    "game": ("claim1", "lemma2", "recursion", "bounds"),
    "synthetic": ("claim1", "lemma2", "intersection", "recursion", "bounds"),
}

INTERSECTION_ASSUMPTION = "C_T lies inside every cone S_l of a past violation report"


class DiagnoseRunner:
    """Runs trajectory checks on a log written by simulate (JSON format)"""

    def __init__(self, log: MetricsLog, samples: Optional[int] = None, seed: int = 0, all_rounds: bool = False):
        self.log = log
        self.samples = get_settings().feasible_samples if samples is None else samples
        self.seed = seed
        self.rounds = list(range(1, log.T + 1)) if all_rounds else geometric_rounds(log.T)

        metadata = log.metadata
        learner = metadata.get("learner", {})
        self.learner_name = learner.get("learner", "cvvpro")
        self.alpha = float(learner.get("alpha", 1.0))
        self.step_offset = int(learner.get("step_offset", 0))
        self.augment = bool(learner.get("augment", False))
        self.experiment = metadata.get("experiment", "game")

        if self.experiment == "game":
            self._setup_game(metadata["instance"])
        elif self.experiment == "synthetic":
            self._setup_synthetic(metadata["instance"])
        else:
            raise ValueError(f"unknown experiment '{self.experiment}' in log metadata")
        self.config = LearnerConfig(
            alpha=self.alpha, step_offset=self.step_offset, augment=self.augment, params=self.params
        )

    def _setup_game(self, description: Dict[str, Any]):
        self.instance = generate_instance(
            description["n"], description["m"], description["capacity"], description["instance_seed"]
        )
        moves = self.log.adversary_moves()
        if moves is None:
            raise ValueError("game log carries no adversary moves")
        self.moves = moves
        self.y_bars = running_means(moves)
        self.params = game_function_params(self.instance)
        self.time_varying = True
        self.domain = "simplex"
        self.radius = 1.0

    def _setup_synthetic(self, description: Dict[str, Any]):
        self.instance = None
        self.balls = BallConstraints(np.asarray(description["centers"]), description["radii"])
        self.params = FunctionClassParams(**description["params"])
        self.time_varying = False
        self.domain = "ball"
        self.radius = self.params.R

    def family_at(self, t: int) -> ConstraintFamily:
        """Constraint family the oracle answered from at round t"""
        if self.instance is None:
            return self.balls
        return oracle_constraints(resource_constraints(self.instance, self.y_bars[t - 1]))

    def _anchor(self, t: int) -> Optional[np.ndarray]:
        if self.instance is None:
            return np.zeros(self.balls.dimension)
        try:
            centroid = np.full(self.instance.n, 1.0 / self.instance.n)
            return project_onto_polyhedron(centroid, feasible_set(self.instance, self.y_bars[t - 1]).polyhedron).v
        except EmptyPolyhedronError:
            return None

    def _feasible_samples(self, t: int) -> List[np.ndarray]:
        rng = make_stream(self.seed * 1_000_003 + t, "samples")
        anchor = self._anchor(t)
        if anchor is None:
            return []
        return sample_feasible_points(
            self.family_at(t), self.samples, rng, domain=self.domain, radius=self.radius, anchor=anchor
        )

    def _result(self, name: str, passed: bool, **details) -> Dict[str, Any]:
        result = {"check": name, "passed": passed}
        result.update(details)
        run_logger.log_check(name, passed, details)
        return result

    def check_sampled(self, name: str) -> Dict[str, Any]:
        """claim1, lemma2 and velocity share the per-round feasible samples"""
        if self.learner_name != "cvvpro":
            return self._result(name, True, skipped="only defined for velocity-projection runs")

        failures = []
        short_rounds = []
        evaluated = 0
        for t in self.rounds:
            record = self.log.records[t - 1]
            samples = self._feasible_samples(t)
            evaluated += len(samples)
            if len(samples) < self.samples:
                # zero samples means C_t was empty or the sampler found nothing
                short_rounds.append({"t": t, "samples": len(samples)})
            if name == "claim1":
                report = evaluate_violations(self.family_at(t), record.x)
                flags = check_claim_membership(report, self.alpha, record.x, samples)
            elif name == "lemma2":
                flags = check_normal_cone_inequality(record.r, record.x, samples)
            else:
                flags = check_velocity_bound(record.v, record.x, record.r - record.v, self.alpha, samples)
            if not all(flags):
                failures.append({"t": t, "failed_samples": flags.count(False)})

        checked = len(self.rounds) - sum(1 for entry in short_rounds if entry["samples"] == 0)
        if self.rounds and not checked:
            return self._result(name, False, error="no feasible samples in any checked round",
                                checked_rounds=0, short_rounds=short_rounds)
        return self._result(name, not failures, checked_rounds=checked, samples_evaluated=evaluated,
                            short_rounds=short_rounds, failures=failures)

    def check_intersection(self) -> Dict[str, Any]:
        """The hindsight point (or a known feasible point) lies in every cone S_l

        Failure means the run broke the assumption that C_T sits inside Q_T, the
        intersection of those cones; the report names the assumption and the cones.
        """
        tracker = IntersectionTracker.from_log(self.log, self.family_at)
        if self.instance is not None:
            if self.log.final_benchmark is None:
                return self._result("intersection", True, cones=len(tracker.cones), violated_cones=0,
                                    worst_margin=None, skipped="C_T is empty, so it lies in Q_T trivially")
            point = self.log.final_benchmark.x_star
        else:
            point = np.zeros(self.balls.dimension)
        excluded, worst = intersection_violations(tracker, point)
        details: Dict[str, Any] = {
            "cones": len(tracker.cones),
            "violated_cones": excluded,
            "worst_margin": _finite(worst),
        }
        if excluded:
            details["assumption_failed"] = INTERSECTION_ASSUMPTION
        return self._result("intersection", not excluded, **details)

    def check_recursion(self) -> Dict[str, Any]:
        if self.learner_name != "cvvpro":
            return self._result("recursion", True, skipped="only defined for velocity-projection runs")
        report = constraint_recursion_check(
            self.log, self.family_at, self.params, self.alpha, self.step_offset, time_varying=self.time_varying
        )
        return self._result(
            "recursion",
            report.passed,
            checked_rounds=report.checked_rounds,
            worst_margin_active=_finite(report.worst_margin_active),
            worst_margin_inactive=_finite(report.worst_margin_inactive),
            velocity_max=report.velocity_max,
            one_step_passed=report.one_step_passed,
            drift_within_bound=report.drift_within_bound,
            drift_asserted=report.drift_asserted,
            drift_exceeded_rounds=report.drift_exceeded_rounds,
            worst_drift_ratio=report.worst_drift_ratio,
            failures=len(report.failures),
        )

    def check_bounds(self) -> Dict[str, Any]:
        """Closed-form guarantees; asserted only where their hypotheses hold"""
        records = self.log.records
        velocity = max((record.velocity_norm for record in records), default=0.0)
        violations: List[Dict[str, Any]] = []
        asserted = self.learner_name == "cvvpro" and not self.time_varying
        theorem = self.config.feasibility_theorem if asserted else None

        inside_ball = True
        for record in records:
            lowest = self.family_at(record.t).values(record.x).min()
            inside_ball = inside_ball and float(np.linalg.norm(record.x)) <= self.params.R
            if asserted and lowest < feasibility_convergence_bound(self.params, velocity, self.alpha, record.eta) - 1e-9:
                violations.append({"t": record.t, "bound": "feasibility_convergence", "value": float(lowest)})
            if theorem and (theorem != "thm1_feasibility" or inside_ball):
                bound = theorem_bounds(self.params, record.t, theorem).value
                if lowest < bound - 1e-9:
                    violations.append({"t": record.t, "bound": theorem, "value": float(lowest)})
            if theorem == "augmented_feasibility":
                attraction, _ = hypersphere_constraint(record.x, self.params.R)
                if attraction < theorem_bounds(self.params, record.t, "thm2_attraction").value - 1e-9:
                    violations.append({"t": record.t, "bound": "thm2_attraction", "value": attraction})
                if record.velocity_norm > theorem_bounds(self.params, record.t, "velocity_bound").value + 1e-9:
                    violations.append({"t": record.t, "bound": "velocity_bound", "value": record.velocity_norm})
                if float(np.linalg.norm(record.x)) > 4.0 * self.params.R + 1e-9:
                    violations.append({"t": record.t, "bound": "radius_4R", "value": float(np.linalg.norm(record.x))})

        regret = self.log.series.get("regret", [])
        final_regret = regret[-1] if regret else None
        if theorem == "augmented_feasibility" and final_regret is not None:
            regret_bound = theorem_bounds(self.params, self.log.T, "thm2_regret").value
            if final_regret > regret_bound:
                violations.append({"t": self.log.T, "bound": "thm2_regret", "value": final_regret})

        return self._result("bounds", not violations, asserted=asserted, theorem=theorem,
                            velocity_max=velocity, violations=violations[:20],
                            violation_count=len(violations))

    def check_tvc(self, points: int = 100) -> Dict[str, Any]:
        """Decay of the averaged game constraints and the averaging identity"""
        if self.instance is None:
            return self._result("tvc", True, skipped="constraints are time-invariant")

        rng = make_stream(self.seed, "samples")
        n = self.instance.n
        sample_points = [sample_simplex_uniform(n, rng) for _ in range(points)]
        results = []
        identity_error = 0.0
        for t in self.rounds:
            if t >= self.log.T:
                continue
            g_prev = resource_constraints(self.instance, self.y_bars[t - 1])
            g_next = resource_constraints(self.instance, self.y_bars[t])
            results.append(tvc_decay_check(g_prev, g_next, sample_points, self.params, t))

            intercepts, slopes = round_constraint(self.instance, self.moves[t])
            for x in sample_points:
                direct = np.abs(g_next.values(x) - g_prev.values(x))
                via_round = np.abs(intercepts + slopes @ x - g_prev.values(x)) / (t + 1)
                identity_error = max(identity_error, float(np.max(np.abs(direct - via_round))) if direct.size else 0.0)

        exact = all(result.passes for result in results)
        # the averaged-constraint bound 2 eta_{t+1}^2 (L_G/R + 3 beta_G)(7 L_F)^2 at each checked t
        average_bounds = [theorem_bounds(self.params, result.t, "average_tvc").value for result in results]
        average = all(
            result.max_diff <= bound * (1.0 + 1e-12) for result, bound in zip(results, average_bounds)
        )
        fit = tvc_fit_passes(results) if len(results) >= 2 else True
        passed = exact and average and fit and identity_error <= 1e-10
        return self._result("tvc", passed, exact_bound_passes=exact, average_tvc_passes=average,
                            fit_passes=fit, identity_error=identity_error, checked_rounds=len(results),
                            max_diffs=[result.max_diff for result in results], average_tvc=average_bounds)

    def run(self, checks: Optional[List[str]] = None) -> Dict[str, Any]:
        """Run the requested checks (the experiment's defaults when none are named) and summarize"""
        checks = list(checks or DEFAULT_CHECKS[self.experiment])
        unknown = [name for name in checks if name not in CHECKS]
        if unknown:
            raise ValueError(f"unknown checks {unknown}; expected a subset of {CHECKS}")

        dispatch: Dict[str, Callable[[], Dict[str, Any]]] = {
            "claim1": lambda: self.check_sampled("claim1"),
            "lemma2": lambda: self.check_sampled("lemma2"),
            "velocity": lambda: self.check_sampled("velocity"),
            "intersection": self.check_intersection,
            "recursion": self.check_recursion,
            "bounds": self.check_bounds,
            "tvc": self.check_tvc,
        }
        results = {name: dispatch[name]() for name in checks}
        passed = [name for name, result in results.items() if result["passed"]]

        return {
            "experiment": self.experiment,
            "learner": self.learner_name,
            "T": self.log.T,
            "checked_rounds": self.rounds,
            "total": len(results),
            "passed": len(passed),
            "failed": len(results) - len(passed),
            "all_passed": len(passed) == len(results),
            "results": results,
        }

    def save_results(self, results: Dict[str, Any], path: Union[str, Path]):
        """Save the diagnostics report as JSON"""
        try:
            with open(path, "w", encoding="utf-8") as f:
                json.dump(results, f, indent=2, sort_keys=True, default=float)
        except OSError as e:
            raise EmissionError(str(path), e) from e
        logger.info(f"Diagnostics saved to {path}")


def _finite(value: float) -> Optional[float]:
    return value if math.isfinite(value) else None
