#!/usr/bin/env python3
"""
Unit Tests for constraint families, the violation oracle and time-variation checks
"""
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cvvpro.constraints import (
    AffineConstraints,
    AveragedAffineConstraints,
    BallConstraints,
    HypersphereConstraint,
    NonnegativityConstraints,
    StackedConstraints,
    TVCDecayResult,
    averaged_update,
    evaluate_violations,
    fit_decay_exponent,
    hypersphere_constraint,
    start_average,
    tvc_decay_check,
    tvc_fit_passes,
)
from cvvpro.errors import ConstraintEvaluationError, DimensionMismatchError, SampleOutsideDomainError
from cvvpro.harness import generate_instance, make_stream, round_constraint, sample_simplex_uniform
from cvvpro.schemas import FunctionClassParams


# Test Fixtures
@pytest.fixture
def unit_params():
    return FunctionClassParams(R=1.0, L_F=1.0, L_G=1.0, beta_G=0.0)


def constant_family(values):
    """Affine family whose values do not depend on x (n=2)"""
    values = np.asarray(values, dtype=float)
    return AffineConstraints(values, np.zeros((values.shape[0], 2)))


class TestViolationOracle:
    """Test evaluate_violations"""

    def test_strictly_feasible(self):
        family = AffineConstraints([0.0, -1.0], np.eye(2))
        report = evaluate_violations(family, np.array([0.5, 2.0]))

        assert report.indices == []
        assert report.count == 0
        assert report.gradients.shape == (2, 0)

    def test_boundary_counts_as_violated(self):
        report = evaluate_violations(constant_family([0.0, 0.5]), np.zeros(2))
        assert report.indices == [0]
        assert np.array_equal(report.values, [0.0])

    def test_reports_values_and_gradients(self):
        slopes = np.array([[1.0, 0.0], [0.0, 1.0], [2.0, -1.0]])
        family = AffineConstraints([-0.2, 0.3, -0.1], slopes)
        report = evaluate_violations(family, np.zeros(2))

        assert report.indices == [0, 2]
        assert np.allclose(report.values, [-0.2, -0.1])
        assert np.allclose(report.gradients, slopes[[0, 2]].T)

    def test_non_finite_value_names_index(self):
        family = constant_family([-1.0, np.nan, 0.5])
        with pytest.raises(ConstraintEvaluationError) as exc:
            evaluate_violations(family, np.zeros(2))
        assert exc.value.index == 1

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            evaluate_violations(constant_family([1.0]), np.zeros(3))


class TestHypersphere:
    """Test the attraction constraint 1/2 (R^2 - ||x||^2)"""

    def test_origin(self):
        value, gradient = hypersphere_constraint(np.zeros(4), 1.0)
        assert value == 0.5
        assert np.array_equal(gradient, np.zeros(4))

    def test_boundary(self):
        value, _ = hypersphere_constraint(np.array([0.6, 0.8]), 1.0)
        assert abs(value) <= 1e-12

    def test_outside(self):
        value, gradient = hypersphere_constraint(np.array([2.0, 0.0]), 1.0)
        assert value == -1.5
        assert np.array_equal(gradient, [-2.0, 0.0])

    @settings(max_examples=50, deadline=None)
    @given(
        a=st.lists(st.floats(min_value=-5, max_value=5), min_size=3, max_size=3),
        b=st.lists(st.floats(min_value=-5, max_value=5), min_size=3, max_size=3),
        weight=st.floats(min_value=0.0, max_value=1.0),
    )
    def test_concave(self, a, b, weight):
        a, b = np.array(a), np.array(b)
        mixed, _ = hypersphere_constraint(weight * a + (1.0 - weight) * b, 2.0)
        ga, _ = hypersphere_constraint(a, 2.0)
        gb, _ = hypersphere_constraint(b, 2.0)
        assert mixed >= weight * ga + (1.0 - weight) * gb - 1e-9

    def test_family_agrees(self):
        x = np.array([0.3, -1.2])
        values, gradients = HypersphereConstraint(2, 1.0).evaluate(x)
        value, gradient = hypersphere_constraint(x, 1.0)
        assert values[0] == value
        assert np.array_equal(gradients[:, 0], gradient)


class TestFamilies:
    """Test the concrete constraint families"""

    def test_ball_values_and_gradients(self):
        family = BallConstraints(np.array([[0.5, 0.0]]), [1.0])
        values, gradients = family.evaluate(np.array([1.5, 0.0]))

        assert np.allclose(values, [0.0])
        assert np.allclose(gradients[:, 0], [-1.0, 0.0])

    def test_ball_rejects_bad_radii(self):
        with pytest.raises(ValueError):
            BallConstraints(np.zeros((1, 2)), [0.0])

    def test_nonnegativity(self):
        values, gradients = NonnegativityConstraints(3).evaluate(np.array([0.2, -0.1, 0.0]))
        assert np.array_equal(values, [0.2, -0.1, 0.0])
        assert np.array_equal(gradients, np.eye(3))

    def test_stacked_keeps_order(self):
        stacked = StackedConstraints([constant_family([-1.0]), NonnegativityConstraints(2)])
        report = evaluate_violations(stacked, np.array([0.5, -0.5]))

        assert stacked.num_constraints == 3
        assert report.indices == [0, 2]
        assert stacked.is_affine

    def test_stacked_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            StackedConstraints([NonnegativityConstraints(2), NonnegativityConstraints(3)])

    def test_ball_family_is_not_affine(self):
        with pytest.raises(NotImplementedError):
            BallConstraints(np.zeros((1, 2)), [1.0]).affine_rows()


class TestAveragedConstraints:
    """Test the incremental averaging of affine constraints"""

    def test_average_of_two(self):
        state = averaged_update(start_average([1.0], [[0.0]]), [0.0], [[0.0]])
        assert state.round == 2
        assert state.avg_intercepts[0] == 0.5

    def test_fixed_point(self):
        state = start_average([0.3, -0.2], [[1.0, 2.0], [0.0, 1.0]])
        updated = averaged_update(state, state.avg_intercepts, state.avg_slopes)

        assert updated.round == 2
        assert np.array_equal(updated.avg_intercepts, state.avg_intercepts)
        assert np.array_equal(updated.avg_slopes, state.avg_slopes)

    def test_three_rounds(self):
        state = start_average([1.0], [[0.0]])
        for intercept in (0.0, -1.0):
            state = averaged_update(state, [intercept], [[0.0]])
        assert abs(state.avg_intercepts[0]) <= 1e-15

    def test_shape_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            averaged_update(start_average([1.0], [[0.0]]), [1.0, 2.0], [[0.0], [0.0]])

    def test_matches_direct_mean_on_game(self):
        """Incremental average equals (1/t) sum of round constraints at random points"""
        instance = generate_instance(6, 3, capacity=1.0, seed=4)
        rng = make_stream(4, "samples")
        moves = [sample_simplex_uniform(6, rng) for _ in range(25)]

        family = AveragedAffineConstraints(start_average(*round_constraint(instance, moves[0])))
        for y in moves[1:]:
            family.update(*round_constraint(instance, y))

        for _ in range(10):
            x = rng.standard_normal(6)
            direct = np.mean([instance.capacity - instance.C_x @ x - instance.C_y @ y for y in moves], axis=0)
            assert np.max(np.abs(family.values(x) - direct)) <= 1e-10

    def test_snapshot_is_frozen(self):
        family = AveragedAffineConstraints(start_average([1.0], [[1.0, 0.0]]))
        snapshot = family.snapshot()
        family.update([0.0], [[0.0, 0.0]])

        assert snapshot.intercepts[0] == 1.0
        assert family.state.avg_intercepts[0] == 0.5


class TestTimeVariation:
    """Test tvc_decay_check and the decay-rate fit"""

    def test_identical_families(self, unit_params):
        family = constant_family([0.5, -0.5])
        result = tvc_decay_check(family, family, [np.zeros(2), np.ones(2)], unit_params, t=3)

        assert result.max_diff == 0.0
        assert result.passes

    def test_bound_value(self, unit_params):
        result = tvc_decay_check(constant_family([0.0]), constant_family([0.1]), [np.zeros(2)], unit_params, t=4)

        assert np.isclose(result.bound, 98.0 / 20.0)
        assert np.isclose(result.max_diff, 0.1)
        assert np.isclose(result.fit_constant, 0.5)

    def test_sample_outside_domain(self, unit_params):
        family = constant_family([0.0])
        with pytest.raises(SampleOutsideDomainError, match="sample outside domain"):
            tvc_decay_check(family, family, [np.array([5.0, 0.0])], unit_params, t=1)

    def test_fit_recovers_inverse_decay(self):
        results = [
            TVCDecayResult(t=t, max_diff=2.0 / t, bound=1.0, passes=True, fit_constant=2.0 * (t + 1) / t)
            for t in (1, 2, 4, 8, 16, 32)
        ]
        assert np.isclose(fit_decay_exponent(results), -1.0)
        assert tvc_fit_passes(results)

    def test_fit_rejects_slow_decay(self):
        results = [
            TVCDecayResult(t=t, max_diff=t ** -0.5, bound=1.0, passes=True, fit_constant=0.0)
            for t in (1, 4, 16, 64)
        ]
        assert not tvc_fit_passes(results)

    def test_game_family_decays(self):
        """Consecutive averaged game constraints differ by O(1/t)"""
        instance = generate_instance(8, 3, capacity=1.0, seed=2)
        rng = make_stream(2, "adversary")
        params = FunctionClassParams(R=1.0, L_F=1.0, L_G=float(np.max(np.linalg.norm(instance.C_x, axis=1))))
        points = [sample_simplex_uniform(8, rng) for _ in range(100)]

        family = AveragedAffineConstraints(start_average(*round_constraint(instance, points[0])))
        for t in range(1, 50):
            previous = family.snapshot()
            family.update(*round_constraint(instance, sample_simplex_uniform(8, rng)))
            result = tvc_decay_check(previous, family.snapshot(), points, params, t)
            assert result.passes


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
