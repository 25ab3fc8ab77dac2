import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bgsa import _kernels
from bgsa.bits import run_rng
from bgsa.engine import (
    EngineConfig,
    ExponentialGravity,
    FitnessDistanceGravity,
    LinearGravity,
    ObjectiveSpec,
    bgsa_config,
    bnaggsa_config,
    compute_masses,
    init_swarm,
    kbest_indices,
    kbest_size,
    run,
    scalar_gravity,
    step,
    transfer_flip,
    update_velocity,
)


def ones_objective(dimension=8, sense="max"):
    def fn(bits, rng):
        return bits.sum(axis=1).astype(np.float64)
    return ObjectiveSpec(fn=fn, dimension=dimension, sense=sense, name="ones")


class TestMasses:
    def test_hand_case_minimize(self):
        m = compute_masses([1.0, 2.0, 3.0], "min")
        assert m == pytest.approx([2 / 3, 1 / 3, 0.0], abs=1e-15)

    def test_all_equal(self):
        assert compute_masses([5.0, 5.0, 5.0], "min") == pytest.approx([1 / 3] * 3)

    def test_single_particle(self):
        assert compute_masses([2.5], "max") == pytest.approx([1.0])

    def test_maximize_mirrors(self):
        m = compute_masses([1.0, 2.0, 3.0], "max")
        assert m == pytest.approx([0.0, 1 / 3, 2 / 3], abs=1e-15)

    @given(st.lists(st.floats(-1e6, 1e6, allow_nan=False), min_size=2, max_size=40),
           st.sampled_from(["min", "max"]))
    @settings(max_examples=100, deadline=None)
    def test_properties(self, fits, sense):
        fits = np.array(fits)
        m = compute_masses(fits, sense)
        assert m.sum() == pytest.approx(1.0, abs=1e-12)
        best = np.argmin(fits) if sense == "min" else np.argmax(fits)
        assert m[best] == m.max()
        if np.unique(fits).size > 1:
            assert m.min() == 0.0


class TestKbest:
    def test_schedule_start(self):
        assert kbest_size(0, 500, 50) == 50

    def test_schedule_end(self):
        assert kbest_size(499, 500, 50) == 1

    def test_midpoint_rounding(self):
        # 50 - 49*250/499 = 25.45..., round-half-up -> 25
        assert kbest_size(250, 500, 50) == 25

    def test_single_iteration_run(self):
        assert kbest_size(0, 1, 50) == 50

    @given(st.integers(2, 40), st.integers(2, 400))
    @settings(max_examples=100, deadline=None)
    def test_endpoints_and_monotone(self, n, t_max):
        sizes = [kbest_size(t, t_max, n) for t in range(t_max)]
        assert sizes[0] == n
        assert sizes[-1] == 1
        assert all(1 <= s <= n for s in sizes)
        assert all(a >= b for a, b in zip(sizes, sizes[1:]))

    def test_indices_fitness_sorted_stable(self):
        fits = np.array([3.0, 1.0, 1.0, 2.0])
        assert list(kbest_indices(fits, 3, "min")) == [1, 2, 3]
        assert list(kbest_indices(fits, 2, "max")) == [0, 3]


class TestScalarGravity:
    def test_linear_endpoints(self):
        assert scalar_gravity(LinearGravity(100.0), 0, 500) == 100.0
        assert scalar_gravity(LinearGravity(100.0), 500, 500) == 0.0

    def test_exponential_at_final(self):
        g = scalar_gravity(ExponentialGravity(100.0, 20.0), 500, 500)
        assert g == pytest.approx(2.061153622438558e-07, rel=1e-12)

    def test_fitness_distance_rejected(self):
        with pytest.raises(TypeError):
            scalar_gravity(FitnessDistanceGravity(), 0, 500)


class TestAcceleration:
    def test_equal_positions_zero_force(self):
        bits = np.tile(np.array([1, 0, 1, 1, 0], dtype=np.uint8), (2, 1))
        elite = np.array([0, 1], dtype=np.int64)
        dists = _kernels.hamming_to_subset(bits, elite)
        acc = _kernels.kbest_acceleration(
            bits, np.array([0.5, 0.5]), elite, dists, np.ones((2, 2)), 100.0, 1e-12
        )
        assert np.all(acc == 0.0)

    def test_single_neighbour_hand_value(self):
        # j differs from i only at bit 3 with x_j=1; rand=1, G=100, M_j=0.5, R=2
        bits = np.zeros((2, 6), dtype=np.uint8)
        bits[1, 3] = 1
        bits[1, 5] = 1
        bits[0, 5] = 1
        bits[1, 5] = 0  # now rows differ at bits 3 and 5 -> R=2, j has 1 at d=3
        elite = np.array([1], dtype=np.int64)
        dists = _kernels.hamming_to_subset(bits, elite)
        assert dists[0, 0] == 2
        acc = _kernels.kbest_acceleration(
            bits, np.array([0.0, 0.5]), elite, dists, np.ones((2, 1)), 100.0, 0.0
        )
        # a^3 = 1 * 100 * 0.5 / 2 * (1 - 0) = 25; a^5 = -25 (i has the extra bit)
        assert acc[0, 3] == pytest.approx(25.0)
        assert acc[0, 5] == pytest.approx(-25.0)
        assert np.all(acc[0, [0, 1, 2, 4]] == 0.0)

    def test_empty_neighbourhood_zero_vector(self):
        # elite = {i} only: the best particle has no one to interact with
        bits = np.array([[1, 0, 1], [0, 1, 0]], dtype=np.uint8)
        elite = np.array([0], dtype=np.int64)
        dists = _kernels.hamming_to_subset(bits, elite)
        acc = _kernels.kbest_acceleration(
            bits, np.array([0.9, 0.1]), elite, dists, np.ones((2, 1)), 50.0, 1e-12
        )
        assert np.all(acc[0] == 0.0)
        assert np.any(acc[1] != 0.0)


class TestVelocityAndFlip:
    def test_zero_stays_zero(self):
        v = update_velocity(np.zeros((1, 4)), np.zeros((1, 4)), np.array([0.7]))
        assert np.all(v == 0.0)

    def test_clamp_boundary(self):
        v = update_velocity(np.full((1, 1), 5.0), np.full((1, 1), 3.0), np.array([1.0]))
        assert v[0, 0] == 6.0

    def test_hand_value(self):
        v = update_velocity(np.full((1, 1), 4.0), np.full((1, 1), 1.0), np.array([0.5]))
        assert v[0, 0] == 3.0

    def test_zero_velocity_never_flips(self):
        rng = np.random.default_rng(0)
        bits = rng.integers(0, 2, (5, 30)).astype(np.uint8)
        out = transfer_flip(bits, np.zeros((5, 30)), rng.random((5, 30)))
        assert np.array_equal(out, bits)

    @pytest.mark.parametrize("velocity", [6.0, -2.0, 0.5])
    def test_flip_rate_matches_tanh(self, velocity):
        draws = 200_000
        rng = np.random.default_rng(99)
        bits = np.zeros((1, draws), dtype=np.uint8)
        v = np.full((1, draws), velocity)
        flipped = transfer_flip(bits, v, rng.random((1, draws)))
        rate = flipped.mean()
        p = abs(math.tanh(velocity))
        se = math.sqrt(p * (1 - p) / draws)
        assert abs(rate - p) <= 3 * se + 1e-12


class TestStepAndRun:
    def test_identical_particles_stay_put(self):
        # equal positions + zero velocity: no force, no flips
        obj = ones_objective(dimension=6)
        config = bgsa_config(swarm_size=2, max_iterations=10)
        rng = run_rng(0, 0)
        state = init_swarm(obj, config, rng)
        state.positions = np.tile(np.array([1, 0, 1, 0, 1, 0], dtype=np.uint8), (2, 1))
        before = state.positions.copy()
        step(state, obj, config, rng)
        assert np.array_equal(state.positions, before)
        assert state.best_fitness == 3.0

    def test_determinism(self):
        obj = ones_objective()
        config = bgsa_config(swarm_size=10, max_iterations=40)
        a = run(obj, config, run_rng(7, 0))
        b = run(obj, config, run_rng(7, 0))
        assert a.best_fitness == b.best_fitness
        assert np.array_equal(a.best_position, b.best_position)
        assert np.array_equal(a.trace, b.trace)

    def test_best_so_far_never_worsens(self):
        obj = ones_objective()
        config = bgsa_config(swarm_size=8, max_iterations=60)
        for seed in (1, 2):
            trace = run(obj, config, seed).trace
            assert np.all(np.diff(trace) >= 0.0)

    def test_counting_ones_found(self):
        obj = ones_objective(dimension=8)
        for make in (bgsa_config, bnaggsa_config):
            result = run(obj, make(swarm_size=20, max_iterations=100), 3)
            assert result.best_fitness == 8.0

    def test_single_iteration_trace(self):
        obj = ones_objective()
        result = run(obj, bgsa_config(swarm_size=5, max_iterations=1), 0)
        assert result.trace.shape == (1,)

    def test_velocity_bound_holds(self):
        obj = ones_objective(dimension=16)
        config = bgsa_config(swarm_size=12, max_iterations=50)
        seen = []
        run(obj, config, 5, on_step=lambda s: seen.append(np.abs(s.velocities).max()))
        assert max(seen) <= 6.0

    def test_archive_sizes_exposed_for_bnaggsa(self):
        obj = ones_objective(dimension=10)
        config = bnaggsa_config(swarm_size=6, max_iterations=20)
        sizes = []
        run(obj, config, 1, on_step=lambda s: sizes.append(s.archive_sizes.copy()))
        stacked = np.concatenate(sizes)
        assert stacked.min() >= 2 and stacked.max() <= 5


class TestConfigValidation:
    def test_swarm_too_small(self):
        with pytest.raises(ValueError):
            EngineConfig(swarm_size=1)

    def test_mismatched_strategy_pairs(self):
        with pytest.raises(ValueError):
            EngineConfig(gravity=FitnessDistanceGravity(), neighbour_source="kbest")
        with pytest.raises(ValueError):
            EngineConfig(gravity=LinearGravity(), neighbour_source="archives")

    def test_bad_sense(self):
        with pytest.raises(ValueError):
            ObjectiveSpec(fn=lambda b, r: b.sum(1), dimension=4, sense="upward")
