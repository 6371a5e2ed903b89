import math
from collections import Counter

import numpy as np
import pytest
from numpy.testing import assert_allclose

from harrisproc.birth import (
    ProcessParams,
    Trajectory,
    empirical_distribution,
    incentive_pmf,
    process_moments,
    simulate_many,
    simulate_trajectory,
    solve_forward_odes,
)
from harrisproc.distribution import (
    HarrisParams,
    decap_geometric_pmf,
    harris_mean_var,
    harris_pmf,
)
from harrisproc.errors import ResourceLimitError
from harrisproc.sampling import RngStream
from harrisproc.validation import chi_square_gof

E = math.e


class TestProcessParams:
    @pytest.mark.parametrize("lam,k", [(0.0, 1), (-0.5, 1), (1.0, 0), (1.0, 2.5)])
    def test_validation(self, lam, k):
        with pytest.raises(ValueError):
            ProcessParams(lam, k)

    def test_linear_rates(self):
        params = ProcessParams(0.5, 2)
        assert [params.rate_after(n) for n in range(3)] == [0.5, 1.5, 2.5]

    def test_induced_scale(self):
        params = ProcessParams(0.5, 2)
        assert params.scale_at(1.0) == pytest.approx(E, rel=1e-15)
        assert params.harris_at(1.0) == HarrisParams(params.scale_at(1.0), 2)


class TestTrajectory:
    def test_starts_at_one(self):
        traj = simulate_trajectory(RngStream(0, 0), ProcessParams(0.5, 2), 1.0)
        assert traj.state_at(0.0) == 1
        assert traj.incentives_at(0.0) == 0

    @pytest.mark.parametrize("seed", range(5))
    def test_structural_invariants(self, seed):
        params = ProcessParams(1.0, 3)
        traj = simulate_trajectory(RngStream(seed, 0), params, 2.0)
        assert traj.jump_times[0] == 0.0 and traj.states[0] == 1
        assert np.all(np.diff(traj.jump_times) > 0.0)
        assert traj.jump_times[-1] <= traj.horizon
        assert np.all(np.diff(traj.states) == 3)
        assert traj.coupling_violations() == 0

    def test_coupling_identity_at_query_times(self):
        params = ProcessParams(1.0, 2)
        traj = simulate_trajectory(RngStream(1, 4), params, 3.0)
        for t in np.linspace(0.0, 3.0, 13):
            assert traj.state_at(t) == 1 + 2 * traj.incentives_at(t)

    def test_query_outside_horizon_rejected(self):
        traj = simulate_trajectory(RngStream(0, 0), ProcessParams(0.5, 1), 1.0)
        with pytest.raises(ValueError):
            traj.state_at(1.5)

    def test_invalid_construction_rejected(self):
        params = ProcessParams(1.0, 2)
        with pytest.raises(ValueError):
            Trajectory(params, np.array([0.0, 0.5]), np.array([1, 2]), 1.0)
        with pytest.raises(ValueError):
            Trajectory(params, np.array([0.1, 0.5]), np.array([1, 3]), 1.0)

    def test_event_cap(self):
        with pytest.raises(ResourceLimitError):
            simulate_trajectory(RngStream(0, 0), ProcessParams(5.0, 2), 10.0,
                                max_events=3)


class TestEmpiricalDistribution:
    def test_single_trajectory_at_zero(self):
        traj = simulate_trajectory(RngStream(0, 0), ProcessParams(0.5, 2), 1.0)
        assert empirical_distribution([traj], 0.0) == {1: 1}

    def test_vanishing_rate_concentrates_at_one(self):
        trajs = simulate_many(ProcessParams(1e-9, 2), 1.0, 200, seed=0)
        assert empirical_distribution(trajs, 1.0) == {1: 200}

    def test_horizon_violation_rejected(self):
        trajs = simulate_many(ProcessParams(0.5, 1), 1.0, 3, seed=0)
        with pytest.raises(ValueError):
            empirical_distribution(trajs, 2.0)

    def test_counts_sum_to_replicas(self):
        trajs = simulate_many(ProcessParams(0.5, 2), 1.0, 500, seed=3)
        counts = empirical_distribution(trajs, 1.0)
        assert sum(counts.values()) == 500
        assert all((s - 1) % 2 == 0 for s in counts)


class TestMonteCarloLaw:
    def test_mean_and_gof_against_closed_form(self):
        params = ProcessParams(0.5, 2)
        trajs = simulate_many(params, 1.0, 20_000, seed=42)
        states = np.array([tr.state_at(1.0) for tr in trajs])
        mean, var = process_moments(params, 1.0)
        assert abs(states.mean() - mean) < 3 * math.sqrt(var / len(states))
        marginal = params.harris_at(1.0)
        result = chi_square_gof(
            Counter(states.tolist()),
            lambda v: harris_pmf(marginal, (v - 1) // 2),
            marginal.support_values(),
            len(states),
            0.001,
        )
        assert result.passed

    def test_yule_furry_reduction(self):
        # k = 1 marginal is the decapitated geometric with q = exp(-lam*t)
        params = ProcessParams(1.0, 1)
        trajs = simulate_many(params, 0.7, 20_000, seed=7)
        states = np.array([tr.state_at(0.7) for tr in trajs])
        q = math.exp(-0.7)
        result = chi_square_gof(
            Counter(states.tolist()),
            lambda v: decap_geometric_pmf(q, v),
            params.harris_at(0.7).support_values(),
            len(states),
            0.001,
        )
        assert result.passed

    def test_thread_count_does_not_change_results(self):
        params = ProcessParams(0.5, 2)
        serial = simulate_many(params, 1.0, 64, seed=9, threads=1)
        pooled = simulate_many(params, 1.0, 64, seed=9, threads=4)
        for a, b in zip(serial, pooled):
            assert np.array_equal(a.jump_times, b.jump_times)
        assert empirical_distribution(serial, 1.0) == empirical_distribution(pooled, 1.0)

    @pytest.mark.parametrize("lam", [0.25, 0.5, 1.0])
    @pytest.mark.parametrize("k", [1, 2, 3])
    @pytest.mark.parametrize("t", [0.5, 1.0])
    def test_three_way_agreement(self, lam, k, t):
        # Monte Carlo, forward equations, and the closed form must tell one
        # story at every grid point.
        params = ProcessParams(lam, k)
        marginal = params.harris_at(t)

        solution = solve_forward_odes(params, t)
        closed = harris_pmf(marginal, np.arange(solution.n_max + 1))
        assert np.abs(solution.probs - closed).max() < 1e-8

        trajectories = simulate_many(params, t, 100_000, seed=11)
        observed = empirical_distribution(trajectories, t)
        gof = chi_square_gof(
            observed,
            lambda x: harris_pmf(marginal, (x - 1) // k),
            marginal.support_values(),
            100_000,
            0.001,
        )
        assert gof.passed


class TestForwardEquations:
    def test_time_zero_returns_initial_law(self):
        sol = solve_forward_odes(ProcessParams(0.5, 2), 0.0)
        assert_allclose(sol.probs, [1.0])
        assert sol.truncation_tail == 0.0

    def test_short_time_stays_near_initial_law(self):
        sol = solve_forward_odes(ProcessParams(0.5, 2), 1e-8)
        assert sol.probs[0] == pytest.approx(1.0, abs=1e-7)
        assert sol.probs[1:].sum() < 1e-7

    def test_matches_closed_form(self):
        params = ProcessParams(0.5, 2)
        sol = solve_forward_odes(params, 1.0)
        closed = harris_pmf(params.harris_at(1.0), np.arange(sol.n_max + 1))
        assert np.abs(sol.probs - closed).max() < 1e-8

    def test_matches_decapitated_geometric(self):
        sol = solve_forward_odes(ProcessParams(1.0, 1), 0.7)
        q = math.exp(-0.7)
        closed = decap_geometric_pmf(q, np.arange(1, sol.n_max + 2))
        assert np.abs(sol.probs - closed).max() < 1e-8

    def test_mass_conservation(self):
        for t in (0.25, 0.5, 1.0):
            sol = solve_forward_odes(ProcessParams(1.0, 3), t)
            assert abs(sol.total - 1.0) < 1e-9

    def test_state_cap(self):
        with pytest.raises(ResourceLimitError):
            solve_forward_odes(ProcessParams(1.0, 3), 1.0, state_cap=100)

    def test_negative_time_rejected(self):
        with pytest.raises(ValueError):
            solve_forward_odes(ProcessParams(1.0, 1), -0.1)


class TestMoments:
    def test_degenerate_start(self):
        assert process_moments(ProcessParams(0.5, 2), 0.0) == (1.0, 0.0)

    def test_closed_form_at_unit_exponent(self):
        mean, var = process_moments(ProcessParams(0.5, 2), 1.0)
        assert mean == pytest.approx(E, rel=1e-15)
        assert var == pytest.approx(2 * E * (E - 1), rel=1e-15)

    @pytest.mark.parametrize("lam,k,t", [(0.25, 1, 0.5), (0.5, 2, 1.0), (1.0, 3, 0.8)])
    def test_agrees_with_distribution_moments(self, lam, k, t):
        params = ProcessParams(lam, k)
        assert process_moments(params, t) == harris_mean_var(params.harris_at(t))

    def test_mean_strictly_increasing(self):
        # the process is not stationary: its marginal mean grows with t
        params = ProcessParams(0.7, 2)
        means = [process_moments(params, t)[0] for t in np.linspace(0.0, 2.0, 9)]
        assert np.all(np.diff(means) > 0.0)


class TestIncentiveLaw:
    def test_zero_count_value(self):
        params = ProcessParams(0.5, 2)
        assert incentive_pmf(params, 1.0, 0) == pytest.approx(math.exp(-0.5), rel=1e-14)

    def test_identity_with_state_law(self):
        params = ProcessParams(0.5, 2)
        marginal = params.harris_at(1.0)
        for n in range(30):
            assert incentive_pmf(params, 1.0, n) == harris_pmf(marginal, n)

    def test_truncated_mean(self):
        params = ProcessParams(0.5, 2)
        ns = np.arange(300)
        mean = float((ns * incentive_pmf(params, 1.0, ns)).sum())
        assert mean == pytest.approx((E - 1) / 2, abs=1e-9)
