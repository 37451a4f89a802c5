#!/usr/bin/env python3
"""
Tests for the trajectory diagnostics and the projection self-test
"""
import json

import numpy as np
import pytest

from cvvpro.constraints import AffineConstraints, BallConstraints, NonnegativityConstraints
from cvvpro.evaluation import (
    CHECKS,
    DEFAULT_CHECKS,
    DiagnoseRunner,
    IntersectionTracker,
    RecursionReport,
    check_claim_membership,
    check_normal_cone_inequality,
    check_velocity_bound,
    constraint_recursion_check,
    geometric_rounds,
    intersection_membership,
    intersection_violations,
    run_qp_selftest,
    sample_feasible_points,
)
from cvvpro.harness import (
    game_function_params,
    generate_instance,
    generate_synthetic_instance,
    make_stream,
    run_simulation,
    run_synthetic,
)
from cvvpro.schemas import FunctionClassParams, LearnerConfig, MetricsLog, StepRecord, ViolationReport
from cvvpro.utils import emit, load_log


# Test Fixtures
@pytest.fixture
def x1_report():
    """g(x) = x1 violated at x_t = (-0.5, 0)"""
    return ViolationReport(indices=[0], values=np.array([-0.5]), gradients=np.array([[1.0], [0.0]]))


@pytest.fixture
def game_log():
    instance = generate_instance(6, 2, capacity=1.3, seed=3)
    config = LearnerConfig(alpha=100.0, params=game_function_params(instance))
    return run_simulation(instance, "cvvpro", 32, config, seed=3)


@pytest.fixture
def synthetic_log():
    return run_synthetic(generate_synthetic_instance(n=4, m=3, seed=1), 128, seed=1)


class TestMembershipCheck:
    """Test check_claim_membership"""

    def test_affine_arithmetic(self, x1_report):
        flags = check_claim_membership(x1_report, 1.0, np.array([-0.5, 0.0]), [np.array([0.2, 0.0])])
        assert flags == [True]

    def test_empty_report_is_vacuous(self):
        flags = check_claim_membership(ViolationReport.empty(2), 3.0, np.zeros(2), [np.ones(2), -np.ones(2)])
        assert flags == [True, True]

    def test_detects_infeasible_sample(self, x1_report):
        """x = (-0.6, 0) is not feasible for g(x) = x1 and fails the membership"""
        flags = check_claim_membership(x1_report, 1.0, np.array([-0.5, 0.0]), [np.array([-0.6, 0.0])])
        assert flags == [False]


class TestNormalConeInequality:
    """Test check_normal_cone_inequality"""

    def test_interior_round(self):
        assert check_normal_cone_inequality(np.zeros(2), np.zeros(2), [np.ones(2)]) == [True]

    def test_worked_example(self):
        flags = check_normal_cone_inequality(np.array([2.0, 0.0]), np.zeros(2), [np.array([0.5, 0.3])])
        assert flags == [True]

    def test_violation(self):
        flags = check_normal_cone_inequality(np.array([2.0, 0.0]), np.zeros(2), [np.array([-0.5, 0.3])])
        assert flags == [False]


class TestVelocityBound:
    """Test check_velocity_bound"""

    def test_gradient_step_is_within_bound(self):
        flags = check_velocity_bound(np.array([-1.0, 0.0]), np.zeros(2), np.array([1.0, 0.0]), 2.0, [np.zeros(2)])
        assert flags == [True]

    def test_excessive_speed(self):
        flags = check_velocity_bound(np.array([10.0, 0.0]), np.zeros(2), np.array([1.0, 0.0]), 1.0, [np.zeros(2)])
        assert flags == [False]


class TestIntersection:
    """Test the polyhedral intersection tracker"""

    def test_empty_tracker(self):
        assert intersection_membership(IntersectionTracker(), np.array([7.0, -3.0]))

    def test_single_cone(self):
        tracker = IntersectionTracker()
        tracker.add(np.zeros(2), ViolationReport(indices=[0], values=np.array([0.0]),
                                                 gradients=np.array([[1.0], [0.0]])))
        assert intersection_membership(tracker, np.array([1.0, 0.0]))
        assert not intersection_membership(tracker, np.array([-1.0, 0.0]))

    def test_empty_reports_add_nothing(self):
        tracker = IntersectionTracker()
        tracker.add(np.zeros(2), ViolationReport.empty(2))
        assert tracker.cones == []

    def test_counts_excluding_cones(self):
        tracker = IntersectionTracker()
        for x_l in (np.zeros(2), np.array([0.5, 0.0])):
            tracker.add(x_l, ViolationReport(indices=[0], values=np.array([0.0]),
                                             gradients=np.array([[1.0], [0.0]])))
        assert intersection_violations(tracker, np.array([1.0, 0.0])) == (0, 0.5)
        excluded, worst = intersection_violations(tracker, np.array([0.25, 0.0]))
        assert excluded == 1
        assert worst == pytest.approx(-0.25)
        assert intersection_violations(IntersectionTracker(), np.zeros(2)) == (0, float("inf"))


def _drifting_log():
    """Two rounds at the origin with unit velocity"""
    records = [
        StepRecord(t=t, eta=0.25, x=np.zeros(2), v=np.array([1.0, 0.0]), r=np.array([1.0, 0.0]), cost=0.0)
        for t in (1, 2)
    ]
    return MetricsLog(records=records)


class TestRecursionDrift:
    """Test the drift verdict of constraint_recursion_check"""

    @pytest.fixture
    def shifting_family(self):
        """g_t(x) = x1 + 1 at t = 1 and x1 + 0.5 at t = 2: the family moves by 0.5"""
        families = {1: AffineConstraints([1.0], [[1.0, 0.0]]), 2: AffineConstraints([0.5], [[1.0, 0.0]])}
        return families.__getitem__

    @pytest.fixture
    def unit_params(self):
        return FunctionClassParams(R=1.0, L_F=1.0, L_G=1.0, beta_G=0.0)

    def test_exceeded_drift_fails_where_the_bound_is_asserted(self, shifting_family, unit_params):
        report = constraint_recursion_check(_drifting_log(), shifting_family, unit_params, alpha=1.0, d=15,
                                            time_varying=True)
        assert report.drift_asserted
        assert report.drift_exceeded_rounds == 1
        assert report.worst_drift_ratio == pytest.approx(0.5 / 0.125)
        assert report.one_step_passed
        assert not report.drift_within_bound
        assert not report.passed

    def test_exceeded_drift_is_reported_otherwise(self, shifting_family, unit_params):
        report = constraint_recursion_check(_drifting_log(), shifting_family, unit_params, alpha=100.0, d=0,
                                            time_varying=True)
        assert not report.drift_asserted
        assert not report.drift_within_bound
        assert report.passed

    def test_verdicts(self):
        assert RecursionReport().passed
        assert not RecursionReport(failures=[(3, 0)]).passed
        assert not RecursionReport(drift_exceeded_rounds=2, drift_asserted=True).passed
        assert RecursionReport(drift_exceeded_rounds=2).passed


class TestSampling:
    """Test round selection and feasible sampling"""

    def test_geometric_rounds(self):
        assert geometric_rounds(10) == [1, 2, 4, 8, 10]
        assert geometric_rounds(16) == [1, 2, 4, 8, 16]

    def test_simplex_samples_are_feasible(self):
        family = NonnegativityConstraints(4)
        samples = sample_feasible_points(family, 20, make_stream(0, "samples"))
        assert len(samples) == 20
        for x in samples:
            assert abs(x.sum() - 1.0) <= 1e-12
            assert np.all(family.values(x) >= 0.0)

    def test_thin_set_uses_anchor(self):
        family = BallConstraints(np.array([[0.0, 0.0]]), [0.05])
        samples = sample_feasible_points(
            family, 10, make_stream(1, "samples"), domain="ball", radius=1.0, anchor=np.zeros(2)
        )
        assert len(samples) == 10
        assert all(np.linalg.norm(x) <= 0.05 + 1e-9 for x in samples)

    def test_unknown_domain(self):
        with pytest.raises(ValueError):
            sample_feasible_points(NonnegativityConstraints(2), 1, make_stream(0, "samples"), domain="cube")


@pytest.mark.integration
class TestDiagnoseRunner:
    """Test the runner on recorded trajectories"""

    def test_game_structural_checks(self, game_log):
        results = DiagnoseRunner(game_log, samples=20).run(["claim1", "lemma2", "velocity", "recursion"])

        for name in ("claim1", "lemma2", "velocity"):
            assert results["results"][name]["passed"], name
        assert results["results"]["recursion"]["checked_rounds"] == 31
        assert results["checked_rounds"] == [1, 2, 4, 8, 16, 32]

    def test_game_tvc(self, game_log):
        result = DiagnoseRunner(game_log).run(["tvc"])["results"]["tvc"]
        assert result["exact_bound_passes"]
        assert result["average_tvc_passes"]
        assert result["identity_error"] <= 1e-10
        assert len(result["average_tvc"]) == result["checked_rounds"]
        assert all(diff <= bound for diff, bound in zip(result["max_diffs"], result["average_tvc"]))

    def test_default_checks_depend_on_experiment(self, game_log, synthetic_log):
        game = DiagnoseRunner(game_log, samples=10).run()
        assert set(game["results"]) == set(DEFAULT_CHECKS["game"])
        assert "intersection" not in game["results"]
        synthetic = DiagnoseRunner(synthetic_log, samples=10).run()
        assert set(synthetic["results"]) == set(DEFAULT_CHECKS["synthetic"])

    def test_intersection_reports_assumption(self, game_log):
        result = DiagnoseRunner(game_log).run(["intersection"])["results"]["intersection"]
        assert result["passed"] == (result["violated_cones"] == 0)
        assert result["cones"] >= result["violated_cones"]
        assert ("assumption_failed" in result) != result["passed"]

    def test_recursion_reports_drift_verdict(self, game_log):
        result = DiagnoseRunner(game_log).run(["recursion"])["results"]["recursion"]
        assert result["drift_asserted"] is False
        assert result["drift_within_bound"] == (result["drift_exceeded_rounds"] == 0)
        assert result["passed"] == result["one_step_passed"]

    def test_short_sample_rounds_are_reported(self, game_log, monkeypatch):
        runner = DiagnoseRunner(game_log, samples=5)
        sample = runner._feasible_samples
        monkeypatch.setattr(runner, "_feasible_samples", lambda t: [] if t == 2 else sample(t))
        result = runner.run(["lemma2"])["results"]["lemma2"]

        assert {"t": 2, "samples": 0} in result["short_rounds"]
        assert result["checked_rounds"] <= len(runner.rounds) - 1
        assert result["passed"]

    def test_no_samples_anywhere_fails(self, game_log, monkeypatch):
        runner = DiagnoseRunner(game_log, samples=5)
        monkeypatch.setattr(runner, "_feasible_samples", lambda t: [])
        result = runner.run(["claim1"])["results"]["claim1"]
        assert not result["passed"]
        assert len(result["short_rounds"]) == len(runner.rounds)

    def test_ogd_skips_velocity_checks(self):
        instance = generate_instance(5, 2, capacity=1.3, seed=0)
        config = LearnerConfig(alpha=100.0, params=game_function_params(instance))
        log = run_simulation(instance, "ogd", 8, config, seed=0)
        results = DiagnoseRunner(log, samples=5).run(["claim1", "recursion"])

        assert results["results"]["claim1"]["skipped"]
        assert results["all_passed"]

    @pytest.mark.slow
    def test_synthetic_run_passes_every_check(self, synthetic_log):
        results = DiagnoseRunner(synthetic_log, samples=20).run(list(CHECKS))
        failed = [name for name, result in results["results"].items() if not result["passed"]]
        assert failed == []

    def test_runner_reads_emitted_log(self, game_log, tmp_path):
        path = emit(game_log, "json", tmp_path / "game.json")
        runner = DiagnoseRunner(load_log(path), samples=10)
        results = runner.run(["lemma2"])
        runner.save_results(results, tmp_path / "report.json")

        saved = json.loads((tmp_path / "report.json").read_text())
        assert saved["results"]["lemma2"]["passed"]
        assert saved["learner"] == "cvvpro"

    def test_unknown_check(self, game_log):
        with pytest.raises(ValueError):
            DiagnoseRunner(game_log).run(["lemma9"])


class TestQPSelfTest:
    """Test the projection self-test harness"""

    def test_small_run_agrees(self):
        results = run_qp_selftest(instances=50, seed=7)
        assert results["passed"]
        assert results["agreements"] == 50
        assert results["max_error"] <= 1e-8

    @pytest.mark.slow
    def test_full_run_agrees(self):
        assert run_qp_selftest()["passed"]


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
