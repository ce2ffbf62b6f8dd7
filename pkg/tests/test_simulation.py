import numpy as np
import pytest

from app.core.exceptions import DimensionMismatchError, InfeasibleSpecError
from app.core.rng import make_rng
from app.models.params import GraphSpec, SpaceConfig
from app.models.trajectory import InitialDistribution
from app.processors.param_validator import validate
from app.services.simulation_service import bernoulli_argument, generate_graph, simulate, step
from app.services.stats_service import count_transitions
from app.utils.states import all_states
from tests.conftest import random_params


class TestGenerateGraph:
    def test_positive_graph_is_valid(self):
        config = SpaceConfig.default(10)
        spec = GraphSpec(p=10, d_max=5, a_min=0.1)
        params = generate_graph(spec, config, seed=7)
        assert validate(params, config).is_valid
        degrees = np.count_nonzero(params.A, axis=1)
        assert np.all(degrees >= 1) and np.all(degrees <= 5)
        assert np.all(params.A[params.A > 0] >= 0.1 - 1e-12)

    def test_signed_graph_is_valid(self):
        config = SpaceConfig.default(8)
        spec = GraphSpec(p=8, d_max=3, a_min=0.1, signed=True)
        params = generate_graph(spec, config, seed=2)
        assert validate(params, config).is_valid
        assert np.all(params.A * params.A_tilde == 0.0)
        np.testing.assert_allclose(params.A.sum(axis=1) + params.A_tilde.sum(axis=1) + params.b, 1.0, atol=1e-12)

    def test_same_seed_same_graph(self):
        config = SpaceConfig.default(6)
        spec = GraphSpec(p=6, d_max=3, a_min=0.1)
        first = generate_graph(spec, config, seed=42)
        second = generate_graph(spec, config, seed=42)
        np.testing.assert_array_equal(first.A, second.A)
        np.testing.assert_array_equal(first.b, second.b)
        np.testing.assert_array_equal(first.rho_w, second.rho_w)

    def test_infeasible_spec(self):
        config = SpaceConfig.default(6)
        spec = GraphSpec(p=6, d_max=5, a_min=0.3)
        with pytest.raises(InfeasibleSpecError):
            generate_graph(spec, config, seed=0)

    def test_config_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            generate_graph(GraphSpec(p=4, d_max=2, a_min=0.1), SpaceConfig.default(5), seed=0)


class TestBernoulliArgument:
    def test_positive(self, positive2):
        np.testing.assert_allclose(bernoulli_argument(positive2, np.array([0, 0])), [0.25, 0.2])
        np.testing.assert_allclose(bernoulli_argument(positive2, np.array([1, 0])), [0.75, 0.45])

    def test_generic(self, generic2):
        np.testing.assert_allclose(bernoulli_argument(generic2, np.array([0, 0])), [0.35, 0.65])
        np.testing.assert_allclose(bernoulli_argument(generic2, np.array([0, 1])), [0.15, 0.35])

    def test_wrong_state_length(self, positive2):
        with pytest.raises(DimensionMismatchError):
            bernoulli_argument(positive2, np.array([1, 0, 1]))

    @pytest.mark.parametrize("signed", [False, True])
    def test_probabilities_stay_inside_band(self, signed):
        params, config = random_params(5, seed=3, signed=signed, d_max=3)
        lower = config.b_min * config.rho_min
        upper = 1.0 - config.b_min * (1.0 - config.rho_max)
        for x in all_states(5):
            prob = bernoulli_argument(params, x)
            assert np.all(prob >= lower - 1e-12) and np.all(prob <= upper + 1e-12)


class TestSimulate:
    def test_step_is_deterministic(self, positive2):
        x = np.array([1, 1], dtype=np.uint8)
        first = step(positive2, x, make_rng(5, "step"))
        second = step(positive2, x, make_rng(5, "step"))
        np.testing.assert_array_equal(first, second)

    def test_matches_repeated_steps(self, positive2):
        initial = InitialDistribution.point_mass([1, 0])
        traj = simulate(positive2, 50, initial, seed=9)
        rng = make_rng(9, "simulate")
        x = np.array([1, 0], dtype=np.uint8)
        for k in range(50):
            x = step(positive2, x, rng)
            np.testing.assert_array_equal(traj.states[k + 1], x)

    def test_same_seed_same_trajectory(self, generic2):
        first = simulate(generic2, 200, seed=1)
        second = simulate(generic2, 200, seed=1)
        np.testing.assert_array_equal(first.states, second.states)

    def test_zero_length(self, positive2):
        traj = simulate(positive2, 0, seed=0)
        assert traj.T == 0
        assert traj.states.shape == (1, 2)

    def test_negative_length(self, positive2):
        with pytest.raises(ValueError):
            simulate(positive2, -1)

    def test_point_mass_start(self, positive2):
        traj = simulate(positive2, 10, InitialDistribution.point_mass([0, 1]), seed=4)
        np.testing.assert_array_equal(traj.states[0], [0, 1])

    def test_point_mass_dimension(self, positive2):
        with pytest.raises(DimensionMismatchError):
            simulate(positive2, 10, InitialDistribution.point_mass([0, 1, 1]))

    def test_conditional_frequencies(self, positive2):
        counts = count_transitions(simulate(positive2, 100_000, seed=12))
        expected = np.array([bernoulli_argument(positive2, x) for x in all_states(2)])
        for k, u in enumerate(counts.states):
            freq = counts.ones[k] / counts.visits[k]
            np.testing.assert_allclose(freq, expected[int(u)], atol=0.02)
