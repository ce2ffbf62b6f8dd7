import numpy as np
import pytest

from app.core.exceptions import DimensionMismatchError, RankDeficientError, ZeroStateUnvisitedError
from app.models.estimate import OptimizerOptions
from app.models.params import SpaceConfig
from app.models.trajectory import Trajectory
from app.processors.optimizer import projected_gradient_ascent
from app.processors.param_validator import validate
from app.services.estimation_service import (
    ClosedFormEstimator,
    MLEstimator,
    closed_form_estimate,
    closed_form_estimate_generic,
    get_estimator,
    ml_estimate,
    ml_estimate_generic,
)
from app.services.evaluation_service import evaluate_estimate
from app.services.exact_service import expected_counts
from app.services.likelihood_service import params_log_likelihood
from app.services.simulation_service import simulate
from app.services.stats_service import count_transitions
from tests.conftest import random_params


@pytest.fixture
def wide1() -> SpaceConfig:
    return SpaceConfig(p=1, b_min=0.1, rho_min=0.1, rho_max=0.9)


def _max_error(estimate, truth) -> float:
    M1, c1 = estimate.affine_form()
    M2, c2 = truth.affine_form()
    return max(float(np.max(np.abs(M1 - M2))), float(np.max(np.abs(c1 - c2))))


class TestMaximumLikelihood:
    @pytest.mark.parametrize("solver", ["pga", "slsqp"])
    def test_single_node_interior_optimum(self, p1_counts, wide1, solver):
        result = ml_estimate(p1_counts, wide1, OptimizerOptions(solver=solver))
        np.testing.assert_allclose(result.reparam.A, [[0.375]], atol=1e-4)
        np.testing.assert_allclose(result.reparam.c, [0.25], atol=1e-4)
        assert result.method == "ml"

    def test_pga_converges_tightly(self, p1_counts, wide1):
        result = ml_estimate(p1_counts, wide1)
        assert result.converged
        assert result.diagnostics["projected_grad_norm"] <= 1e-8
        np.testing.assert_allclose(result.reparam.A, [[0.375]], atol=1e-6)
        assert result.params.b[0] == pytest.approx(0.625, abs=1e-6)
        assert result.params.rho_w[0] == pytest.approx(0.4, abs=1e-5)

    def test_recovers_truth_from_expected_counts(self, positive2, config2):
        counts = expected_counts(positive2, 1000.0)
        result = ml_estimate(counts, config2)
        assert _max_error(result.params, positive2) <= 1e-5

    def test_output_is_valid(self, config2, positive2):
        counts = count_transitions(simulate(positive2, 3000, seed=2))
        result = ml_estimate(counts, config2)
        assert validate(result.params, config2).is_valid
        assert len(result.diagnostics["active_constraints"]) == 2

    def test_dimension_mismatch(self, p1_counts, config2):
        with pytest.raises(DimensionMismatchError):
            ml_estimate(p1_counts, config2)

    def test_generic_recovers_truth(self, generic2, config2):
        counts = expected_counts(generic2, 1000.0)
        result = ml_estimate_generic(counts, config2)
        assert result.params.is_generic
        assert _max_error(result.params, generic2) <= 1e-4
        assert np.all(result.params.A * result.params.A_tilde == 0.0)
        np.testing.assert_array_equal(result.params.A > 1e-3, generic2.A > 0.0)
        np.testing.assert_array_equal(result.params.A_tilde > 1e-3, generic2.A_tilde > 0.0)
        np.testing.assert_allclose(result.params.rho_w, generic2.rho_w, atol=1e-3)
        assert result.diagnostics["relaxation_gap"] == pytest.approx(0.0, abs=1e-6)

    def test_generic_agrees_with_positive_on_expected_counts(self, positive2, config2):
        counts = expected_counts(positive2, 1000.0)
        generic = ml_estimate_generic(counts, config2)
        positive = ml_estimate(counts, config2)
        assert generic.likelihood == pytest.approx(positive.likelihood, abs=1e-7)
        assert _max_error(generic.params, positive.params) <= 1e-4

    def test_generic_likelihood_at_least_positive(self, positive2, config2):
        # Θ ⊂ Θ̃: com dados finitos o ótimo genérico pode ser estritamente maior
        counts = count_transitions(simulate(positive2, 2000, seed=6))
        generic = ml_estimate_generic(counts, config2)
        positive = ml_estimate(counts, config2)
        assert generic.likelihood >= positive.likelihood - 1e-7

    @pytest.mark.parametrize("signed", [False, True])
    @pytest.mark.parametrize("seed", range(4))
    def test_dominates_true_parameters(self, signed, seed):
        truth, config = random_params(3, seed=seed, signed=signed)
        counts = count_transitions(simulate(truth, 2000, seed=seed))
        result = get_estimator("ml", generic=signed).estimate(counts, config)
        assert result.likelihood >= params_log_likelihood(counts, truth).total - 1e-6

    @pytest.mark.parametrize("seed", range(8))
    def test_generic_output_validates(self, seed):
        truth, config = random_params(4, seed=seed, signed=True, d_max=3)
        counts = count_transitions(simulate(truth, 400, seed=seed))
        result = ml_estimate_generic(counts, config)
        assert validate(result.params, config).is_valid

    def test_generic_on_sampled_data(self, generic2, config2):
        counts = count_transitions(simulate(generic2, 3000, seed=8))
        result = ml_estimate_generic(counts, config2)
        assert np.all(result.params.A * result.params.A_tilde == 0.0)
        assert result.unprojected is not None
        assert result.diagnostics["projection_displacement"] >= 0.0


class TestOptimizer:
    def test_ill_conditioned_quadratic(self):
        # curvaturas 1 e 1e4; com passo fixo seriam ~1e5 iterações
        weights = np.array([1.0, 1e4, 10.0])
        target = np.array([0.3, 0.7, 1.5])

        def fun(z):
            return -0.5 * float(weights @ (z - target) ** 2)

        def grad(z):
            return -weights * (z - target)

        outcome = projected_gradient_ascent(fun, grad, lambda z: np.clip(z, 0.0, 1.0), np.zeros(3),
                                            OptimizerOptions(max_iters=2_000))
        assert outcome.converged
        assert outcome.iterations < 500
        np.testing.assert_allclose(outcome.z, [0.3, 0.7, 1.0], atol=1e-6)

    def test_node_iterations_reported(self, positive2, config2):
        counts = count_transitions(simulate(positive2, 1000, seed=3))
        result = ml_estimate(counts, config2)
        assert result.converged
        assert max(result.diagnostics["node_iterations"]) < OptimizerOptions().max_iters


class TestClosedForm:
    def test_hand_example(self, hand_trajectory):
        result = closed_form_estimate(count_transitions(hand_trajectory))
        np.testing.assert_allclose(result.unprojected.A, [[-1 / 3, -1 / 3], [-1 / 3, -1 / 3]], atol=1e-12)
        np.testing.assert_allclose(result.unprojected.c, [1 / 3, 1 / 3], atol=1e-12)
        np.testing.assert_allclose(result.params.A, np.zeros((2, 2)), atol=1e-12)
        np.testing.assert_allclose(result.params.b, [1.0, 1.0], atol=1e-12)
        np.testing.assert_allclose(result.params.rho_w, [1 / 3, 1 / 3], atol=1e-12)
        assert result.diagnostics["projection_displacement"] == pytest.approx(1 / 3)

    def test_zero_state_unvisited(self):
        traj = Trajectory(states=[[1, 1], [1, 0], [0, 1], [1, 1]])
        with pytest.raises(ZeroStateUnvisitedError):
            closed_form_estimate(count_transitions(traj))

    def test_rank_deficient(self):
        traj = Trajectory(states=[[0, 0], [1, 1], [0, 0], [1, 1]])
        with pytest.raises(RankDeficientError) as info:
            closed_form_estimate(count_transitions(traj))
        assert info.value.rank == 1

    def test_exact_on_expected_counts(self, positive2, config2):
        result = closed_form_estimate(expected_counts(positive2, 500.0), config=config2)
        np.testing.assert_allclose(result.unprojected.A, positive2.A, atol=1e-10)
        np.testing.assert_allclose(result.unprojected.c, positive2.c, atol=1e-10)
        assert _max_error(result.params, positive2) <= 1e-10

    def test_generic_exact_on_expected_counts(self, generic2, config2):
        result = closed_form_estimate_generic(expected_counts(generic2, 500.0), config=config2)
        M, c = generic2.affine_form()
        np.testing.assert_allclose(result.unprojected.A_bar, M, atol=1e-10)
        np.testing.assert_allclose(result.unprojected.c_bar, c, atol=1e-10)
        np.testing.assert_allclose(result.params.A, generic2.A, atol=1e-8)
        np.testing.assert_allclose(result.params.A_tilde, generic2.A_tilde, atol=1e-8)
        assert np.all(result.params.A * result.params.A_tilde == 0.0)

    def test_generic_output_validates(self):
        checked = 0
        for seed in range(40):
            truth, config = random_params(4, seed=seed, signed=True, d_max=3)
            counts = count_transitions(simulate(truth, 400, seed=seed))
            try:
                result = closed_form_estimate_generic(counts, config=config)
            except (RankDeficientError, ZeroStateUnvisitedError):
                continue
            report = validate(result.params, config)
            assert report.is_valid, report.errors
            checked += 1
        assert checked >= 30

    def test_shared_noise(self, positive2, config2):
        result = closed_form_estimate(expected_counts(positive2, 500.0), config=config2, shared_noise=True)
        np.testing.assert_allclose(result.unprojected.c, [0.225, 0.225], atol=1e-12)
        assert result.diagnostics["shared_noise"]

    def test_ml_dominates_closed_form(self, positive2, config2):
        counts = count_transitions(simulate(positive2, 5000, seed=17))
        ml = ml_estimate(counts, config2)
        cf = closed_form_estimate(counts, config=config2)
        assert validate(cf.params, config2).is_valid
        assert ml.likelihood >= cf.likelihood - 1e-9


class TestEstimatorRegistry:
    def test_lookup(self):
        assert isinstance(get_estimator("ml"), MLEstimator)
        assert isinstance(get_estimator("closed-form", shared_noise=True), ClosedFormEstimator)

    def test_unknown(self):
        with pytest.raises(ValueError):
            get_estimator("lasso")

    def test_generic_dispatch(self, generic2, config2):
        counts = expected_counts(generic2, 500.0)
        result = get_estimator("closed-form", generic=True).estimate(counts, config2)
        assert result.params.is_generic


@pytest.mark.slow
class TestConsistency:
    @pytest.mark.parametrize("signed", [False, True])
    def test_large_sample_error(self, signed):
        truth, config = random_params(3, seed=31, signed=signed)
        counts = count_transitions(simulate(truth, 100_000, seed=31))
        ml = get_estimator("ml", generic=signed).estimate(counts, config)
        cf = get_estimator("closed-form", generic=signed).estimate(counts, config)
        assert _max_error(ml.params, truth) <= 0.05
        assert _max_error(cf.params, truth) <= 0.08
        if signed:
            M_true, _ = truth.affine_form()
            strong = np.abs(M_true) >= 0.1
            for result in (ml, cf):
                M_hat, _ = result.params.affine_form()
                np.testing.assert_array_equal(np.sign(M_hat[strong]), np.sign(M_true[strong]))
                assert np.all(result.params.A * result.params.A_tilde == 0.0)
                np.testing.assert_allclose(result.params.rho_w, truth.rho_w, atol=0.15)

    @pytest.mark.parametrize("method", ["ml", "closed-form"])
    def test_error_shrinks_with_T(self, method):
        truth, config = random_params(3, seed=5)
        estimator = get_estimator(method)
        errors = []
        for T in (1_000, 10_000, 100_000):
            runs = [_max_error(estimator.estimate(count_transitions(simulate(truth, T, seed=s)), config).params, truth)
                    for s in range(5)]
            errors.append(float(np.median(runs)))
        assert errors[0] > errors[1] > errors[2]
        assert errors[2] <= 0.08

    def test_ml_recovers_edges_at_least_as_well(self):
        f1 = {"ml": [], "closed-form": []}
        for seed in range(8):
            truth, config = random_params(6, seed=seed, d_max=3)
            for T in (300, 1_000):
                counts = count_transitions(simulate(truth, T, seed=seed))
                for name in f1:
                    try:
                        estimate = get_estimator(name).estimate(counts, config).params
                    except (RankDeficientError, ZeroStateUnvisitedError):
                        f1[name].append(0.0)
                        continue
                    f1[name].append(evaluate_estimate(estimate, truth, 0.1, 0.5).f1)
        assert np.mean(f1["ml"]) >= np.mean(f1["closed-form"]) - 0.02
