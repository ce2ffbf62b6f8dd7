"""Projeções euclidianas em Θ (coordenadas (A, c)) e Θ̃ (coordenadas (Ā, c̄)).

A projeção é feita linha a linha. Para uma linha com padrão de sinais σ
(+1: ā_j >= 0, -1: ā_j <= 0, 0: ā_j = 0) o conjunto viável é o ortante de σ
intersectado com três semiespaços em z = (ā, c̄):

    σᵀā <= 1 - b_min
    c̄ + (n + ρ_min σ)ᵀā >= ρ_min
    c̄ + (n + ρ_max σ)ᵀā <= ρ_max

onde n_j = 1 quando σ_j = -1. Com σ = +1 em tudo recupera-se o conjunto K_i
do modelo positivo.
"""

import logging
from typing import List, Optional, Tuple

import numpy as np

from app.core.config import settings
from app.core.exceptions import DimensionMismatchError
from app.models.params import ReparamPositive, ReparamSigned, SpaceConfig

logger = logging.getLogger(__name__)

Halfspace = Tuple[np.ndarray, float]


def sign_pattern(A_bar: np.ndarray) -> np.ndarray:
    """Padrão de sinais de um ponto: -1 onde negativo, +1 caso contrário"""
    return np.where(np.asarray(A_bar) < 0.0, -1, 1).astype(np.int8)


def _positive_row_exact(a0: np.ndarray, c0: float, cap: float,
                        rho_min: float, rho_max: float) -> Tuple[np.ndarray, float]:
    """Projeção exata de (a0, c0) em K = {a >= 0, Σa <= cap, banda de c}.

    Para s = Σa fixo, a parte em a é a projeção no simplex de massa s
    (a = max(a0 - τ(s), 0)) e c é truncado na banda [ρ_min(1-s), ρ_max(1-s)].
    A distância ao quadrado é convexa em s com derivada -τ(s) + h(s),
    linear por partes; a raiz é achada exatamente entre os nós.
    """
    u = np.sort(a0)[::-1]
    css = np.cumsum(u)
    k = np.arange(1, u.size + 1)
    tau_knots = css - k * u

    def tau(s: np.ndarray) -> np.ndarray:
        idx = np.clip(np.searchsorted(tau_knots, s, side="right") - 1, 0, u.size - 1)
        return (css[idx] - s) / (idx + 1)

    def slope(s: np.ndarray) -> np.ndarray:
        hi = rho_max * (1.0 - s)
        lo = rho_min * (1.0 - s)
        band = np.where(c0 > hi, (c0 - hi) * rho_max, np.where(c0 < lo, -(lo - c0) * rho_min, 0.0))
        return -tau(s) + band

    candidates = np.concatenate([
        [0.0, cap],
        tau_knots,
        [1.0 - c0 / rho_max, 1.0 - c0 / rho_min],
    ])
    candidates = np.unique(candidates[(candidates >= 0.0) & (candidates <= cap)])
    g = slope(candidates)

    if g[0] >= 0.0:
        s_star = 0.0
    elif g[-1] <= 0.0:
        s_star = cap
    else:
        j = int(np.argmax(g >= 0.0))
        s0, s1, g0, g1 = candidates[j - 1], candidates[j], g[j - 1], g[j]
        s_star = s0 - g0 * (s1 - s0) / (g1 - g0)

    if s_star <= 0.0:
        a = np.zeros_like(a0)
    else:
        a = np.maximum(a0 - tau(np.array([s_star]))[0], 0.0)
    c = float(np.clip(c0, rho_min * (1.0 - s_star), rho_max * (1.0 - s_star)))
    return a, c


def _row_halfspaces(sigma: np.ndarray, cap: float, rho_min: float, rho_max: float) -> List[Halfspace]:
    """Semiespaços wᵀz <= β da linha, z = (ā, c̄)"""
    sigma = sigma.astype(float)
    n = (sigma < 0).astype(float)
    return [
        (np.append(sigma, 0.0), cap),
        (np.append(-(n + rho_min * sigma), -1.0), -rho_min),
        (np.append(n + rho_max * sigma, 1.0), rho_max),
    ]


def _project_orthant(z: np.ndarray, sigma: np.ndarray) -> np.ndarray:
    out = z.copy()
    a = out[:-1]
    a[sigma > 0] = np.maximum(a[sigma > 0], 0.0)
    a[sigma < 0] = np.minimum(a[sigma < 0], 0.0)
    a[sigma == 0] = 0.0
    return out


def _project_halfspace(z: np.ndarray, w: np.ndarray, beta: float) -> np.ndarray:
    excess = float(w @ z) - beta
    if excess <= 0.0:
        return z
    return z - (excess / float(w @ w)) * w


def dykstra_row(a0: np.ndarray, c0: float, sigma: np.ndarray, config: SpaceConfig,
                tolerance: Optional[float] = None,
                max_iters: Optional[int] = None) -> Tuple[np.ndarray, float, int]:
    """Projeção de Dykstra (projeções alternadas com correção) de uma linha"""
    tolerance = settings.projection_tolerance if tolerance is None else tolerance
    max_iters = settings.projection_max_iters if max_iters is None else max_iters

    halfspaces = _row_halfspaces(sigma, config.weight_cap, config.rho_min, config.rho_max)
    x = np.append(np.asarray(a0, dtype=float), float(c0))
    corrections = [np.zeros_like(x) for _ in range(len(halfspaces) + 1)]

    iteration = 0
    for iteration in range(1, max_iters + 1):
        previous = x
        tmp = x + corrections[0]
        x = _project_orthant(tmp, sigma)
        corrections[0] = tmp - x
        for k, (w, beta) in enumerate(halfspaces, start=1):
            tmp = x + corrections[k]
            x = _project_halfspace(tmp, w, beta)
            corrections[k] = tmp - x
        if np.max(np.abs(x - previous)) <= tolerance:
            break
    else:
        logger.warning(f"⚠️ Dykstra atingiu {max_iters} iterações sem convergir")

    a, c = restore_feasibility(x[:-1], float(x[-1]), sigma, config)
    return a, c, iteration


def restore_feasibility(a: np.ndarray, c: float, sigma: np.ndarray,
                        config: SpaceConfig) -> Tuple[np.ndarray, float]:
    """Último passo exato após Dykstra, que só converge até a tolerância.

    Fixa o ortante, encolhe ā até Σ|ā| <= 1 - b_min e trunca c̄ na banda
    [Σā⁻ + ρ_min·b, Σā⁻ + ρ_max·b]. O ponto se move no máximo da ordem da
    tolerância de parada.
    """
    sigma = np.asarray(sigma)
    a = np.asarray(a, dtype=float).copy()
    a[sigma > 0] = np.maximum(a[sigma > 0], 0.0)
    a[sigma < 0] = np.minimum(a[sigma < 0], 0.0)
    a[sigma == 0] = 0.0

    mass = float(np.abs(a).sum())
    if mass > config.weight_cap:
        a *= config.weight_cap / mass
        mass = float(np.abs(a).sum())

    b = 1.0 - mass
    negative = float(np.maximum(-a, 0.0).sum())
    c = float(np.clip(c, negative + config.rho_min * b, negative + config.rho_max * b))
    return a, c


def project_positive_row(a0: np.ndarray, c0: float, config: SpaceConfig,
                         method: Optional[str] = None) -> Tuple[np.ndarray, float]:
    """Projeção de uma linha (a_i, c_i) em K_i; aceita a com qualquer comprimento"""
    method = settings.projection_method if method is None else method
    a0 = np.asarray(a0, dtype=float)
    if method == "exact":
        return _positive_row_exact(a0, float(c0), config.weight_cap, config.rho_min, config.rho_max)
    if method == "dykstra":
        a, c, _ = dykstra_row(a0, c0, np.ones(a0.size, dtype=np.int8), config)
        return a, c
    raise ValueError(f"unknown projection method: {method}")


def project_theta(raw: ReparamPositive, config: SpaceConfig, method: Optional[str] = None) -> ReparamPositive:
    """[·]⁺ do modelo positivo: projeção euclidiana linha a linha em Θ"""
    if raw.p != config.p:
        raise DimensionMismatchError(f"point has p={raw.p}, config expects p={config.p}")
    A = np.empty((raw.p, raw.p))
    c = np.empty(raw.p)
    for i in range(raw.p):
        A[i], c[i] = project_positive_row(raw.A[i], raw.c[i], config, method)
    return ReparamPositive(A=A, c=c)


def project_signed_row(a0: np.ndarray, c0: float, sigma: np.ndarray, config: SpaceConfig,
                       tolerance: Optional[float] = None,
                       max_iters: Optional[int] = None) -> Tuple[np.ndarray, float]:
    sigma = np.asarray(sigma)
    if np.all(sigma > 0):
        return _positive_row_exact(np.asarray(a0, dtype=float), float(c0),
                                   config.weight_cap, config.rho_min, config.rho_max)
    a, c, _ = dykstra_row(a0, c0, sigma, config, tolerance, max_iters)
    return a, c


def project_theta_signed(raw: ReparamSigned, config: SpaceConfig,
                         preserve_support: Optional[np.ndarray] = None,
                         tolerance: Optional[float] = None,
                         max_iters: Optional[int] = None) -> ReparamSigned:
    """[·]⁺ do modelo genérico, dentro do ortante do padrão de sinais.

    Sem padrão, usa o padrão do próprio ponto; a separação (A, Ã) da saída
    respeita o padrão.
    """
    if raw.p != config.p:
        raise DimensionMismatchError(f"point has p={raw.p}, config expects p={config.p}")
    pattern = sign_pattern(raw.A_bar) if preserve_support is None else np.asarray(preserve_support)
    if pattern.shape != (raw.p, raw.p):
        raise DimensionMismatchError(f"sign pattern must have shape ({raw.p}, {raw.p}), got {pattern.shape}")

    A_bar = np.empty((raw.p, raw.p))
    c_bar = np.empty(raw.p)
    for i in range(raw.p):
        A_bar[i], c_bar[i] = project_signed_row(raw.A_bar[i], raw.c_bar[i], pattern[i], config, tolerance, max_iters)
    return ReparamSigned(A_bar=A_bar, c_bar=c_bar)
