import numpy as np
import pytest

from app.core.exceptions import DimensionMismatchError, DomainError
from app.models.params import ReparamPositive, ReparamSigned
from app.models.trajectory import Trajectory
from app.processors.reparam import to_reparam, to_reparam_signed
from app.services.likelihood_service import (
    log_likelihood,
    log_likelihood_gradient,
    pairwise_log_likelihood,
    params_log_likelihood,
    trajectory_log_likelihood,
)
from app.services.simulation_service import simulate
from app.services.stats_service import count_transitions
from tests.conftest import random_params


def _p1(a: float, c: float) -> ReparamPositive:
    return ReparamPositive(A=[[a]], c=[c])


def _with_entry(rep, which: str, index, delta: float):
    if isinstance(rep, ReparamSigned):
        M, c = np.array(rep.A_bar), np.array(rep.c_bar)
    else:
        M, c = np.array(rep.A), np.array(rep.c)
    target = M if which == "M" else c
    target[index] += delta
    if isinstance(rep, ReparamSigned):
        return ReparamSigned(A_bar=M, c_bar=c)
    return ReparamPositive(A=M, c=c)


class TestLogLikelihood:
    def test_single_node_formula(self, p1_counts):
        a, c = 0.3, 0.2
        expected = (15 * np.log(c) + 45 * np.log(1 - c) + 25 * np.log(a + c) + 15 * np.log(1 - a - c)) / 100
        value = log_likelihood(p1_counts, _p1(a, c))
        assert value.total == pytest.approx(expected)
        np.testing.assert_allclose(value.per_node, [expected])

    def test_single_self_transition(self):
        counts = count_transitions(Trajectory(states=[[0], [0]]))
        assert log_likelihood(counts, _p1(0.5, 0.3)).total == pytest.approx(np.log(0.7))

    @pytest.mark.parametrize("fixture", ["positive2", "generic2"])
    def test_forms_agree(self, fixture, request):
        params = request.getfixturevalue(fixture)
        traj = simulate(params, 2000, seed=4)
        counts = count_transitions(traj)
        per_node = params_log_likelihood(counts, params).total
        assert pairwise_log_likelihood(counts, params) == pytest.approx(per_node, abs=1e-10)
        assert trajectory_log_likelihood(traj.codes, traj.p, params) == pytest.approx(per_node, abs=1e-10)

    def test_outside_domain(self, p1_counts):
        with pytest.raises(DomainError) as info:
            log_likelihood(p1_counts, _p1(0.3, 0.0))
        assert info.value.node == 0
        assert info.value.state == 0

    def test_dimension_mismatch(self, p1_counts, positive2):
        with pytest.raises(DimensionMismatchError):
            log_likelihood(p1_counts, to_reparam(positive2))


class TestGradient:
    def test_zero_at_interior_optimum(self, p1_counts):
        grad = log_likelihood_gradient(p1_counts, _p1(0.375, 0.25))
        np.testing.assert_allclose(grad.A, [[0.0]], atol=1e-12)
        np.testing.assert_allclose(grad.c, [0.0], atol=1e-12)

    @pytest.mark.parametrize("seed", range(20))
    def test_finite_differences(self, seed):
        params, _ = random_params(2, seed=seed, signed=seed % 2 == 1)
        counts = count_transitions(simulate(params, 3000, seed=seed))
        rep = to_reparam_signed(params) if params.is_generic else to_reparam(params)
        grad = log_likelihood_gradient(counts, rep)
        grad_M, grad_c = grad.affine_form()
        h = 1e-6

        def central(which, index):
            up = log_likelihood(counts, _with_entry(rep, which, index, h)).total
            down = log_likelihood(counts, _with_entry(rep, which, index, -h)).total
            return (up - down) / (2 * h)

        for i in range(2):
            for j in range(2):
                assert grad_M[i, j] == pytest.approx(central("M", (i, j)), rel=1e-5, abs=1e-7)
            assert grad_c[i] == pytest.approx(central("c", i), rel=1e-5, abs=1e-7)

    def test_concave_along_segments(self, p1_counts):
        rng = np.random.default_rng(1)
        for _ in range(100):
            a1, a2 = rng.uniform(0.0, 0.5, size=2)
            c1, c2 = rng.uniform(0.05, 0.45, size=2)
            mid = log_likelihood(p1_counts, _p1((a1 + a2) / 2, (c1 + c2) / 2)).total
            ends = log_likelihood(p1_counts, _p1(a1, c1)).total + log_likelihood(p1_counts, _p1(a2, c2)).total
            assert mid >= ends / 2 - 1e-12
