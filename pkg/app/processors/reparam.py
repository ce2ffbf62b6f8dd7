import numpy as np

from app.core.exceptions import DimensionMismatchError, SingularNoiseError
from app.models.params import (
    BarParams,
    GenericBarParams,
    ReparamPositive,
    ReparamSigned,
    SpaceConfig,
)


def _check_p(p: int, config: SpaceConfig) -> None:
    if p != config.p:
        raise DimensionMismatchError(f"reparameterization has p={p}, config expects p={config.p}")


def _noise_probabilities(c: np.ndarray, b: np.ndarray) -> np.ndarray:
    singular = np.flatnonzero(b <= 0.0)
    if singular.size:
        raise SingularNoiseError(f"b_i = 1 - sum_j |a_ij| is not positive for rows {singular.tolist()}")
    return c / b


def to_reparam(params: BarParams) -> ReparamPositive:
    """(A, b, ρ_w) -> (A, c), c = diag(b)ρ_w"""
    return ReparamPositive(A=params.A, c=params.b * params.rho_w)


def from_reparam(rep: ReparamPositive, config: SpaceConfig) -> BarParams:
    """(A, c) -> (A, b = 1 - A1, ρ_w = diag(b)^{-1} c)"""
    _check_p(rep.p, config)
    A = np.asarray(rep.A)
    b = 1.0 - A.sum(axis=1)
    return BarParams(A=A, b=b, rho_w=_noise_probabilities(np.asarray(rep.c), b))


def to_reparam_signed(params: GenericBarParams) -> ReparamSigned:
    """(A, Ã, b, ρ_w) -> (Ā = A - Ã, c̄ = Ã1 + diag(b)ρ_w)"""
    A_bar, c_bar = params.affine_form()
    return ReparamSigned(A_bar=A_bar, c_bar=c_bar)


def split_signed(A_bar: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Separa Ā pelo sinal: A = max(Ā, 0), Ã = max(-Ā, 0)"""
    A_bar = np.asarray(A_bar)
    return np.maximum(A_bar, 0.0), np.maximum(-A_bar, 0.0)


def from_reparam_signed(rep: ReparamSigned, config: SpaceConfig) -> GenericBarParams:
    _check_p(rep.p, config)
    A, A_tilde = split_signed(rep.A_bar)
    b = 1.0 - (A + A_tilde).sum(axis=1)
    c = np.asarray(rep.c_bar) - A_tilde.sum(axis=1)
    return GenericBarParams(A=A, A_tilde=A_tilde, b=b, rho_w=_noise_probabilities(c, b))
