import numpy as np
import pytest

from app.core.exceptions import DimensionMismatchError, SingularNoiseError
from app.models.params import BarParams, GenericBarParams, ReparamPositive, SpaceConfig
from app.processors.param_validator import ParamsValidator, validate
from app.processors.reparam import (
    from_reparam,
    from_reparam_signed,
    split_signed,
    to_reparam,
    to_reparam_signed,
)


class TestSpaceConfig:
    def test_rejects_inverted_rho_band(self):
        with pytest.raises(ValueError):
            SpaceConfig(p=2, b_min=0.2, rho_min=0.8, rho_max=0.2)

    def test_default_uses_settings_and_overrides(self):
        config = SpaceConfig.default(3, b_min=0.1)
        assert config.p == 3
        assert config.b_min == 0.1
        assert config.rho_min == 0.2
        assert config.weight_cap == pytest.approx(0.9)

    def test_probability_bounds(self, config2):
        assert config2.probability_floor == pytest.approx(0.04)
        assert config2.probability_ceiling == pytest.approx(0.96)


class TestValidation:
    def test_valid_positive(self, positive2, config2):
        report = validate(positive2, config2)
        assert report.ok
        assert report.errors == []

    def test_valid_generic(self, generic2, config2):
        assert ParamsValidator().is_valid(generic2, config2)

    def test_row_sum_violation_names_row(self, config2):
        params = BarParams(A=[[0.9, 0.2], [0.0, 0.5]], b=[0.2, 0.5], rho_w=[0.5, 0.5])
        report = validate(params, config2)
        assert not report.ok
        assert any(error.startswith("row 0 sum ≠ 1") for error in report.errors)
        assert not any(error.startswith("row 1") for error in report.errors)

    def test_noise_bounds(self, config2):
        params = BarParams(A=[[0.9, 0.0], [0.0, 0.5]], b=[0.1, 0.5], rho_w=[0.5, 0.9])
        errors = validate(params, config2).errors
        assert any("row 0 b=" in error for error in errors)
        assert any("row 1 rho_w=" in error for error in errors)

    def test_overlapping_supports(self, config2):
        params = GenericBarParams(
            A=[[0.3, 0.0], [0.0, 0.0]],
            A_tilde=[[0.2, 0.0], [0.0, 0.0]],
            b=[0.5, 1.0],
            rho_w=[0.5, 0.5],
        )
        errors = validate(params, config2).errors
        assert any("overlap" in error for error in errors)

    def test_dimension_mismatch(self, positive2):
        with pytest.raises(DimensionMismatchError):
            validate(positive2, SpaceConfig(p=3, b_min=0.2, rho_min=0.2, rho_max=0.8))

    def test_shape_mismatch_in_model(self):
        with pytest.raises(DimensionMismatchError):
            BarParams(A=[[0.5, 0.0]], b=[0.5, 0.5], rho_w=[0.5, 0.5])

    def test_arrays_are_read_only(self, positive2):
        with pytest.raises(ValueError):
            positive2.A[0, 0] = 0.1


class TestReparam:
    def test_to_reparam(self, positive2):
        rep = to_reparam(positive2)
        np.testing.assert_allclose(rep.c, [0.25, 0.2])
        np.testing.assert_array_equal(rep.A, positive2.A)

    def test_zero_weights_give_rho(self, config2):
        params = BarParams(A=np.zeros((2, 2)), b=[1.0, 1.0], rho_w=[0.3, 0.7])
        np.testing.assert_allclose(to_reparam(params).c, [0.3, 0.7])

    def test_round_trip(self, positive2, config2):
        back = from_reparam(to_reparam(positive2), config2)
        np.testing.assert_allclose(back.A, positive2.A, atol=1e-14)
        np.testing.assert_allclose(back.b, positive2.b, atol=1e-14)
        np.testing.assert_allclose(back.rho_w, positive2.rho_w, atol=1e-14)

    def test_singular_noise(self):
        config = SpaceConfig(p=1, b_min=0.2, rho_min=0.2, rho_max=0.8)
        with pytest.raises(SingularNoiseError):
            from_reparam(ReparamPositive(A=[[1.0]], c=[0.1]), config)

    def test_signed_example(self, generic2):
        rep = to_reparam_signed(generic2)
        np.testing.assert_allclose(rep.A_bar[0], [0.5, -0.2])
        assert rep.c_bar[0] == pytest.approx(0.35)

    def test_signed_reduces_to_positive(self, positive2):
        generic = GenericBarParams(A=positive2.A, A_tilde=np.zeros((2, 2)), b=positive2.b, rho_w=positive2.rho_w)
        rep = to_reparam_signed(generic)
        np.testing.assert_array_equal(rep.A_bar, positive2.A)
        np.testing.assert_allclose(rep.c_bar, to_reparam(positive2).c)

    def test_signed_round_trip(self, generic2, config2):
        back = from_reparam_signed(to_reparam_signed(generic2), config2)
        np.testing.assert_allclose(back.A, generic2.A, atol=1e-14)
        np.testing.assert_allclose(back.A_tilde, generic2.A_tilde, atol=1e-14)
        np.testing.assert_allclose(back.b, generic2.b, atol=1e-14)
        np.testing.assert_allclose(back.rho_w, generic2.rho_w, atol=1e-14)

    def test_split_signed_disjoint(self):
        A, A_tilde = split_signed(np.array([[0.3, -0.2], [-0.1, 0.0]]))
        assert np.all(A * A_tilde == 0.0)
        np.testing.assert_array_equal(A, [[0.3, 0.0], [0.0, 0.0]])
        np.testing.assert_array_equal(A_tilde, [[0.0, 0.2], [0.1, 0.0]])
