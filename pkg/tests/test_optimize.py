"""Simplex search behavior: convergence, budget accounting, determinism."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qroutelab.optimize import OptimizerConfig, OptTrace, minimize, random_params


def rosenbrock(x):
    return float((1 - x[0]) ** 2 + 100 * (x[1] - x[0] ** 2) ** 2)


class TestRandomParams:
    def test_length_and_ranges(self):
        params = random_params(3, seed=7)
        assert params.shape == (6,)
        assert np.all(params[:3] >= 0) and np.all(params[:3] < 2 * np.pi)
        assert np.all(params[3:] >= 0) and np.all(params[3:] < np.pi)

    def test_deterministic_per_seed(self):
        assert np.array_equal(random_params(2, seed=5), random_params(2, seed=5))
        assert not np.array_equal(random_params(2, seed=5), random_params(2, seed=6))

    def test_ranges_over_many_draws(self):
        draws = np.vstack([random_params(1, seed=s) for s in range(10_000)])
        gammas, betas = draws[:, 0], draws[:, 1]
        assert gammas.min() >= 0 and gammas.max() < 2 * np.pi
        assert betas.min() >= 0 and betas.max() < np.pi
        # both ranges actually get filled
        assert gammas.max() > 6.0 and betas.max() > 3.0

    def test_depth_zero_rejected(self):
        with pytest.raises(ValueError):
            random_params(0, seed=1)


class TestMinimize:
    def test_one_dimensional_bowl(self):
        trace = minimize(lambda x: (x[0] - 1) ** 2, np.zeros(1), OptimizerConfig(max_evals=200))
        assert abs(trace.best_params[0] - 1.0) < 1e-3
        assert trace.converged

    def test_rosenbrock_within_budget(self):
        trace = minimize(rosenbrock, np.zeros(2), OptimizerConfig(max_evals=2000))
        assert trace.best_value < 1e-2

    def test_rosenbrock_matches_scipy_reference(self):
        scipy_opt = pytest.importorskip("scipy.optimize")
        config = OptimizerConfig(max_evals=2000)
        trace = minimize(rosenbrock, np.zeros(2), config)
        simplex = np.vstack([np.zeros(2)] + [0.1 * e for e in np.eye(2)])
        ref = scipy_opt.minimize(
            rosenbrock,
            np.zeros(2),
            method="Nelder-Mead",
            options={
                "maxfev": 2000,
                "fatol": 1e-5,
                "xatol": 1e-12,
                "initial_simplex": simplex,
            },
        )
        # same simplex rules, same stopping scale: agreement to the tolerance
        assert trace.best_value == pytest.approx(ref.fun, abs=1e-3)

    def test_budget_of_one_evaluates_only_x0(self):
        calls = []

        def f(x):
            calls.append(x.copy())
            return float(np.sum(x**2))

        trace = minimize(f, np.array([0.3, 0.4]), OptimizerConfig(max_evals=1))
        assert len(calls) == 1
        assert len(trace.evaluations) == 1
        assert np.array_equal(trace.evaluations[0][0], [0.3, 0.4])
        assert trace.best_value == pytest.approx(0.25)

    def test_budget_is_a_hard_cap(self):
        count = 0

        def f(x):
            nonlocal count
            count += 1
            return rosenbrock(x)

        minimize(f, np.zeros(2), OptimizerConfig(max_evals=57))
        assert count == 57

    def test_trace_records_every_evaluation(self):
        trace = minimize(rosenbrock, np.zeros(2), OptimizerConfig(max_evals=100))
        assert trace.n_evals == len(trace.evaluations)
        values = [v for _, v in trace.evaluations]
        assert trace.best_value == pytest.approx(min(values))
        best_index = values.index(min(values))
        assert np.array_equal(trace.best_params, trace.evaluations[best_index][0])

    def test_best_so_far_is_monotone(self):
        trace = minimize(rosenbrock, np.zeros(2), OptimizerConfig(max_evals=500))
        running = math.inf
        bests = []
        for _, value in trace.evaluations:
            running = min(running, value)
            bests.append(running)
        assert bests == sorted(bests, reverse=True)

    def test_deterministic(self):
        config = OptimizerConfig(max_evals=300)
        a = minimize(rosenbrock, np.array([0.2, -0.3]), config)
        b = minimize(rosenbrock, np.array([0.2, -0.3]), config)
        assert a.best_value == b.best_value
        assert np.array_equal(a.best_params, b.best_params)
        assert len(a.evaluations) == len(b.evaluations)
        assert all(
            np.array_equal(xa, xb) and va == vb
            for (xa, va), (xb, vb) in zip(a.evaluations, b.evaluations)
        )

    def test_non_finite_objective_aborts_with_trace(self):
        def f(x):
            if x[0] > 0.05:
                return math.nan
            return float(np.sum(x**2))

        trace = minimize(f, np.zeros(2), OptimizerConfig(max_evals=500))
        assert trace.error is not None and "non-finite" in trace.error
        assert not trace.converged
        assert len(trace.evaluations) >= 1
        # the recorded best never includes the non-finite evaluation
        assert math.isfinite(trace.best_value)

    def test_convergence_flag_on_flat_objective(self):
        # Flat objective: the simplex shrinks geometrically until the vertex
        # spread collapses below tolerance.
        trace = minimize(lambda x: 1.0, np.zeros(3), OptimizerConfig(max_evals=200))
        assert trace.converged
        assert trace.n_evals < 150

    def test_no_stall_on_symmetric_straddle(self):
        # A simplex straddling the minimum has zero value spread but must keep
        # contracting rather than report convergence.
        trace = minimize(lambda x: (x[0] - 1) ** 2, np.zeros(1), OptimizerConfig(max_evals=200))
        assert trace.converged
        assert abs(trace.best_params[0] - 1.0) < 1e-5

    def test_invalid_config_rejected(self):
        with pytest.raises(ValueError):
            OptimizerConfig(max_evals=0)

    @given(st.integers(0, 2**16), st.integers(2, 40))
    @settings(max_examples=20, deadline=None)
    def test_budget_respected_on_random_quadratics(self, seed, budget):
        rng = np.random.default_rng(seed)
        center = rng.uniform(-2, 2, 3)
        count = 0

        def f(x):
            nonlocal count
            count += 1
            return float(np.sum((x - center) ** 2))

        trace = minimize(f, np.zeros(3), OptimizerConfig(max_evals=budget))
        assert count <= budget
        assert trace.n_evals == count
        assert trace.best_value <= f(np.zeros(3)) + 1e-12
        count -= 1  # the comparison call above is outside the search


class TestOptTrace:
    def test_defaults(self):
        trace = OptTrace()
        assert trace.evaluations == []
        assert trace.best_value == math.inf
        assert trace.best_params is None
        assert not trace.converged and trace.error is None
