#!/usr/bin/env python3
"""
Unit Tests for the polyhedral projection solvers
Closed-form halfspace cases, the active-set solver, the brute-force oracle and the simplex projection
"""
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cvvpro.errors import (
    DegenerateConstraintError,
    DimensionMismatchError,
    EmptyPolyhedronError,
    OracleTooLargeError,
)
from cvvpro.evaluation import random_feasible_instance
from cvvpro.schemas import Polyhedron
from cvvpro.solvers import (
    enumerate_active_sets_oracle,
    halfspace_projection,
    kkt_residual,
    project_onto_polyhedron,
    project_onto_simplex,
)


# Test Fixtures
@pytest.fixture
def single_halfspace():
    """v1 >= 1 in the plane"""
    return Polyhedron.from_arrays(2, normals=[[1.0], [0.0]], offsets=[1.0])


@pytest.fixture
def quadrant_corner():
    """v1 >= 1 and v2 >= 1"""
    return Polyhedron.from_arrays(2, normals=np.eye(2), offsets=[1.0, 1.0])


class TestHalfspaceProjection:
    """Test the closed-form single-row projection"""

    def test_moves_onto_boundary(self):
        assert np.allclose(halfspace_projection(np.zeros(2), np.array([1.0, 0.0]), 1.0), [1.0, 0.0])

    def test_feasible_point_unchanged(self):
        p = np.array([2.0, 0.0])
        assert np.array_equal(halfspace_projection(p, np.array([1.0, 0.0]), 1.0), p)

    def test_diagonal_normal(self):
        assert np.allclose(halfspace_projection(np.zeros(2), np.array([1.0, 1.0]), 2.0), [1.0, 1.0])

    def test_zero_normal_rejected(self):
        with pytest.raises(DegenerateConstraintError, match="degenerate constraint normal"):
            halfspace_projection(np.zeros(2), np.zeros(2), 1.0)


class TestActiveSetProjection:
    """Test project_onto_polyhedron"""

    def test_no_constraints_is_identity(self):
        p = np.array([3.0, -2.0])
        result = project_onto_polyhedron(p, Polyhedron.whole_space(2))

        assert np.array_equal(result.v, p)
        assert result.active_set == []
        assert result.kkt_residual == 0.0

    def test_single_row_matches_closed_form(self, single_halfspace):
        result = project_onto_polyhedron(np.zeros(2), single_halfspace)

        assert np.allclose(result.v, [1.0, 0.0])
        assert np.allclose(result.multipliers, [1.0])
        assert result.active_set == [0]
        assert result.kkt_residual <= 1e-9

    def test_two_active_rows(self, quadrant_corner):
        result = project_onto_polyhedron(np.zeros(2), quadrant_corner)

        assert np.allclose(result.v, [1.0, 1.0])
        assert result.active_set == [0, 1]
        assert np.allclose(result.v, enumerate_active_sets_oracle(np.zeros(2), quadrant_corner))

    def test_equality_rows_always_hold(self):
        poly = Polyhedron.from_arrays(
            3, normals=np.eye(3), offsets=np.zeros(3), eq_normals=np.ones((3, 1)), eq_offsets=[1.0]
        )
        result = project_onto_polyhedron(np.array([2.0, -1.0, 0.5]), poly)

        assert abs(result.v.sum() - 1.0) <= 1e-9
        assert np.all(result.v >= -1e-9)
        assert np.allclose(result.v, project_onto_simplex(np.array([2.0, -1.0, 0.5])))

    def test_residual_vector_is_difference(self, single_halfspace):
        p = np.array([-1.0, 0.5])
        result = project_onto_polyhedron(p, single_halfspace)
        assert np.allclose(result.r, result.v - p)

    def test_infeasible_polyhedron(self):
        """v1 >= 1 together with -v1 >= 0"""
        poly = Polyhedron.from_arrays(2, normals=[[1.0, -1.0], [0.0, 0.0]], offsets=[1.0, 0.0])
        with pytest.raises(EmptyPolyhedronError, match="empty polyhedron"):
            project_onto_polyhedron(np.zeros(2), poly)

    def test_dimension_mismatch(self, single_halfspace):
        with pytest.raises(DimensionMismatchError):
            project_onto_polyhedron(np.zeros(3), single_halfspace)

    def test_non_positive_tolerance(self, single_halfspace):
        with pytest.raises(ValueError):
            project_onto_polyhedron(np.zeros(2), single_halfspace, tol=0.0)

    def test_warm_start_gives_same_point(self, quadrant_corner):
        p = np.array([-0.3, 0.2])
        cold = project_onto_polyhedron(p, quadrant_corner)
        warm = project_onto_polyhedron(p, quadrant_corner, warm_start=cold.active_set)

        assert warm.warm_started
        assert np.allclose(warm.v, cold.v, atol=1e-12)
        assert warm.iterations <= cold.iterations

    def test_stale_warm_start_is_dropped(self, quadrant_corner):
        """Seeding a row that should not be active still converges"""
        p = np.array([5.0, -1.0])
        result = project_onto_polyhedron(p, quadrant_corner, warm_start=[0, 1, 7])

        assert np.allclose(result.v, [5.0, 1.0])
        assert result.active_set == [1]


class TestBruteForceOracle:
    """Test enumerate_active_sets_oracle"""

    def test_single_halfspace(self, single_halfspace):
        assert np.allclose(enumerate_active_sets_oracle(np.zeros(2), single_halfspace), [1.0, 0.0])

    def test_interior_point(self):
        poly = Polyhedron.from_arrays(2, normals=np.eye(2), offsets=[0.0, 0.0])
        assert np.allclose(enumerate_active_sets_oracle(np.ones(2), poly), [1.0, 1.0])

    def test_both_rows_active(self):
        """v1 + v2 >= 2 and v1 - v2 >= 0"""
        poly = Polyhedron.from_arrays(2, normals=[[1.0, 1.0], [1.0, -1.0]], offsets=[2.0, 0.0])
        assert np.allclose(enumerate_active_sets_oracle(np.zeros(2), poly), [1.0, 1.0])

    def test_too_large(self):
        poly = Polyhedron.from_arrays(9, normals=np.eye(9), offsets=np.zeros(9))
        with pytest.raises(OracleTooLargeError, match="oracle instance too large"):
            enumerate_active_sets_oracle(np.zeros(9), poly)

    def test_empty(self):
        poly = Polyhedron.from_arrays(1, normals=[[1.0, -1.0]], offsets=[1.0, 0.0])
        with pytest.raises(EmptyPolyhedronError):
            enumerate_active_sets_oracle(np.zeros(1), poly)


class TestKKTResidual:
    """Test the certificate used to accept solver output"""

    def test_exact_solution(self, single_halfspace):
        assert kkt_residual(np.zeros(2), single_halfspace, np.array([1.0, 0.0]), np.array([1.0])) == 0.0

    def test_perturbation_shows_up(self, single_halfspace):
        residual = kkt_residual(np.zeros(2), single_halfspace, np.array([1.01, 0.0]), np.array([1.0]))
        assert residual >= 0.01 - 1e-12

    def test_shape_checked(self, single_halfspace):
        with pytest.raises(DimensionMismatchError):
            kkt_residual(np.zeros(2), single_halfspace, np.zeros(2), np.zeros(3))

    @settings(max_examples=40, deadline=None)
    @given(seed=st.integers(min_value=0, max_value=2 ** 32 - 1))
    def test_solver_output_is_certified(self, seed):
        point, poly = random_feasible_instance(np.random.default_rng(seed))
        result = project_onto_polyhedron(point, poly)
        assert kkt_residual(point, poly, result.v, result.multipliers) <= 1e-9


class TestAgreementWithOracle:
    """Property: the active-set solver matches exhaustive enumeration"""

    @settings(max_examples=60, deadline=None)
    @given(seed=st.integers(min_value=0, max_value=2 ** 32 - 1))
    def test_random_instances(self, seed):
        point, poly = random_feasible_instance(np.random.default_rng(seed))
        solved = project_onto_polyhedron(point, poly).v
        expected = enumerate_active_sets_oracle(point, poly)
        assert np.max(np.abs(solved - expected)) <= 1e-8

    @settings(max_examples=40, deadline=None)
    @given(seed=st.integers(min_value=0, max_value=2 ** 32 - 1))
    def test_projection_is_idempotent(self, seed):
        point, poly = random_feasible_instance(np.random.default_rng(seed))
        once = project_onto_polyhedron(point, poly).v
        twice = project_onto_polyhedron(once, poly).v
        assert np.allclose(once, twice, atol=1e-8)

    @settings(max_examples=40, deadline=None)
    @given(seed=st.integers(min_value=0, max_value=2 ** 32 - 1))
    def test_projection_is_nonexpansive(self, seed):
        rng = np.random.default_rng(seed)
        point, poly = random_feasible_instance(rng)
        other = point + rng.standard_normal(point.shape[0])
        gap = np.linalg.norm(project_onto_polyhedron(point, poly).v - project_onto_polyhedron(other, poly).v)
        assert gap <= np.linalg.norm(point - other) + 1e-8


class TestSimplexProjection:
    """Test the sort-based simplex projection"""

    def test_symmetric_point(self):
        assert np.allclose(project_onto_simplex(np.array([0.8, 0.8])), [0.5, 0.5])

    def test_clips_to_vertex(self):
        assert np.allclose(project_onto_simplex(np.array([1.5, -0.5])), [1.0, 0.0])

    def test_point_on_simplex_unchanged(self):
        y = np.array([0.2, 0.3, 0.5])
        assert np.allclose(project_onto_simplex(y), y)

    def test_non_positive_total(self):
        with pytest.raises(ValueError):
            project_onto_simplex(np.ones(3), total=0.0)

    @settings(max_examples=50, deadline=None)
    @given(values=st.lists(st.floats(min_value=-10, max_value=10), min_size=1, max_size=8))
    def test_matches_polyhedral_solver(self, values):
        y = np.array(values)
        n = y.shape[0]
        poly = Polyhedron.from_arrays(
            n, normals=np.eye(n), offsets=np.zeros(n), eq_normals=np.ones((n, 1)), eq_offsets=[1.0]
        )
        assert np.allclose(project_onto_simplex(y), project_onto_polyhedron(y, poly).v, atol=1e-8)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
