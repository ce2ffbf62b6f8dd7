"""Oráculo exato para p pequeno: P, π, taxa de entropia, diagnósticos."""

import logging
from typing import Iterator, Optional, Tuple

import numpy as np
import scipy.linalg
from scipy.special import rel_entr, xlogy

from app.core.config import settings
from app.core.exceptions import (
    DimensionMismatchError,
    InfiniteDivergenceError,
    StateSpaceTooLargeError,
    StationaryMismatchError,
)
from app.models.chain import EmpiricalRow, ExactChain
from app.models.counts import TransitionCounts
from app.models.params import AnyParams
from app.utils.states import all_states

logger = logging.getLogger(__name__)

ROW_BLOCK = 256


def _check_size(p: int) -> None:
    if p > settings.exact_max_p:
        raise StateSpaceTooLargeError(p, settings.exact_max_p)


def success_table(params: AnyParams) -> np.ndarray:
    """θ[u, i] = M_i·u + c_i para os 2^p estados u (ordem de codificação)"""
    _check_size(params.p)
    M, c = params.affine_form()
    return all_states(params.p).astype(float) @ M.T + c


def _rows_from_table(theta: np.ndarray) -> np.ndarray:
    """Linhas de P a partir de θ: produto de Kronecker dos fatores por nó.

    O nó i é o dígito 2^i, então cada nó dobra o bloco de colunas à direita.
    """
    rows = np.ones((theta.shape[0], 1))
    for i in range(theta.shape[1]):
        t = theta[:, i:i + 1]
        rows = np.concatenate([rows * (1.0 - t), rows * t], axis=1)
    return rows


def iter_row_blocks(theta: np.ndarray, block: int = ROW_BLOCK) -> Iterator[Tuple[int, np.ndarray]]:
    for start in range(0, theta.shape[0], block):
        yield start, _rows_from_table(theta[start:start + block])


def transition_prob(params: AnyParams, u: np.ndarray, v: np.ndarray) -> float:
    """p_uv = Π_i θ_i^{v_i} (1 - θ_i)^{1 - v_i}, θ_i = M_i·u + c_i"""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape != (params.p,) or v.shape != (params.p,):
        raise DimensionMismatchError(f"states must have {params.p} bits")
    M, c = params.affine_form()
    theta = M @ u + c
    return float(np.prod(np.where(v > 0.5, theta, 1.0 - theta)))


def transition_matrix(params: AnyParams) -> np.ndarray:
    if params.p > settings.dense_max_p:
        raise StateSpaceTooLargeError(params.p, settings.dense_max_p)
    return _rows_from_table(success_table(params))


def _left_multiply(theta: np.ndarray, pi: np.ndarray) -> np.ndarray:
    """πP sem guardar P"""
    out = np.zeros(theta.shape[0])
    for start, rows in iter_row_blocks(theta):
        out += pi[start:start + rows.shape[0]] @ rows
    return out


def _power_iteration(apply, n: int, tolerance: float, max_iters: int) -> Tuple[np.ndarray, int]:
    pi = np.full(n, 1.0 / n)
    for iteration in range(1, max_iters + 1):
        nxt = apply(pi)
        nxt /= nxt.sum()
        residual = float(np.abs(nxt - pi).sum())
        pi = nxt
        if residual <= tolerance:
            return pi, iteration
    logger.warning(f"⚠️ Iteração de potência sem convergir após {max_iters} iterações")
    return pi, max_iters


def _direct_stationary(P: np.ndarray) -> np.ndarray:
    """Resolve (Pᵀ - I)π = 0 trocando a última equação por 1ᵀπ = 1"""
    n = P.shape[0]
    system = P.T - np.eye(n)
    system[-1, :] = 1.0
    rhs = np.zeros(n)
    rhs[-1] = 1.0
    return scipy.linalg.solve(system, rhs)


def build_chain(params: AnyParams) -> ExactChain:
    _check_size(params.p)
    theta = success_table(params)
    n = theta.shape[0]

    if params.p <= settings.dense_max_p:
        P = _rows_from_table(theta)
        pi_power, iterations = _power_iteration(lambda x: x @ P, n, settings.stationary_tolerance,
                                                settings.power_max_iters)
        pi_direct = _direct_stationary(P)
        gap = float(np.max(np.abs(pi_power - pi_direct)))
        if gap > settings.stationary_agreement:
            raise StationaryMismatchError(
                f"stationary methods disagree by {gap:.3e} (limit {settings.stationary_agreement:.0e})"
            )
        logger.info(f"🔗 Cadeia exata: p={params.p}, {iterations} iterações de potência, |Δπ|={gap:.2e}")
        return ExactChain(p=params.p, P=P, pi=pi_power, theta=theta, pi_direct=pi_direct,
                          power_iterations=iterations)

    pi_power, iterations = _power_iteration(lambda x: _left_multiply(theta, x), n,
                                            settings.stationary_tolerance, settings.power_max_iters)
    logger.info(f"🔗 Cadeia exata sem matriz: p={params.p}, {iterations} iterações de potência")
    return ExactChain(p=params.p, P=None, pi=pi_power, theta=theta, power_iterations=iterations)


def entropy_rate(chain: ExactChain) -> float:
    """-Σ_u π_u Σ_v p_uv log p_uv.

    Cada linha de P é um produto de Bernoullis independentes, logo a entropia
    da linha é a soma das entropias binárias dos nós.
    """
    theta = chain.theta
    row_entropy = -(xlogy(theta, theta) + xlogy(1.0 - theta, 1.0 - theta)).sum(axis=1)
    return float(chain.pi @ row_entropy)


def empirical_row(counts: TransitionCounts, u: int) -> EmpiricalRow:
    _check_size(counts.p)
    n = 2 ** counts.p
    visits = counts.visit_count(u)
    if visits == 0:
        return EmpiricalRow(u=int(u), Q=np.full(n, 1.0 / n), visited=False)
    Q = np.zeros(n)
    mask = counts.pair_from == np.uint64(u)
    Q[counts.pair_to[mask].astype(np.int64)] = counts.pair_count[mask]
    return EmpiricalRow(u=int(u), Q=Q / visits, visited=True)


def _as_distributions(q, p) -> Tuple[np.ndarray, np.ndarray]:
    q = np.asarray(q, dtype=float)
    p = np.asarray(p, dtype=float)
    if q.shape != p.shape:
        raise DimensionMismatchError(f"distributions differ in support size: {q.shape} vs {p.shape}")
    return q, p


def kl_divergence(q, p) -> float:
    """D_KL(q || p) = Σ q log(q/p), com 0·log 0 = 0 (log natural)"""
    q, p = _as_distributions(q, p)
    terms = rel_entr(q, p)
    if np.any(np.isinf(terms)):
        bad = int(np.flatnonzero(np.isinf(terms))[0])
        raise InfiniteDivergenceError(f"infinite divergence: q[{bad}] > 0 where p[{bad}] = 0")
    return float(terms.sum())


def tv_distance(q, p) -> float:
    q, p = _as_distributions(q, p)
    return 0.5 * float(np.abs(q - p).sum())


def identifiability_probe(theta: AnyParams, theta_prime: AnyParams) -> float:
    """‖vec P(θ) - vec P(θ')‖_∞, exato, por blocos de linhas"""
    if theta.p != theta_prime.p:
        raise DimensionMismatchError(f"parameter sets differ in p: {theta.p} vs {theta_prime.p}")
    t1 = success_table(theta)
    t2 = success_table(theta_prime)
    gap = 0.0
    for start in range(0, t1.shape[0], ROW_BLOCK):
        rows1 = _rows_from_table(t1[start:start + ROW_BLOCK])
        rows2 = _rows_from_table(t2[start:start + ROW_BLOCK])
        gap = max(gap, float(np.max(np.abs(rows1 - rows2))))
    return gap


def expected_counts(params: AnyParams, T: float, chain: Optional[ExactChain] = None) -> TransitionCounts:
    """Contagens esperadas T·π_u·p_uv (todos os estados visitados).

    Versão populacional dos dados: os estimadores devem recuperar θ exatamente.
    """
    chain = build_chain(params) if chain is None else chain
    if not chain.dense:
        raise StateSpaceTooLargeError(params.p, settings.dense_max_p)
    n = chain.n_states
    visits = T * chain.pi
    ones = visits[:, None] * chain.theta
    flows = visits[:, None] * chain.P
    codes = np.arange(n, dtype=np.uint64)
    return TransitionCounts(
        p=params.p,
        T=float(T),
        states=codes,
        visits=visits,
        ones=ones,
        pair_from=np.repeat(codes, n),
        pair_to=np.tile(codes, n),
        pair_count=flows.reshape(-1),
    )


def occupancy(counts: TransitionCounts) -> np.ndarray:
    """N_u / T em vetor denso de 2^p posições"""
    _check_size(counts.p)
    freq = np.zeros(2 ** counts.p)
    freq[counts.states.astype(np.int64)] = counts.visits / counts.T
    return freq
