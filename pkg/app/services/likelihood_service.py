"""Log-verossimilhança reescalada L_T e gradiente analítico.

A forma por nó usa só N_{u,i,1} e N_{u,i,0} dos estados visitados; o termo
da distribuição inicial não entra (não depende dos parâmetros).
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.special import xlogy

from app.core.exceptions import DimensionMismatchError, DomainError
from app.models.counts import TransitionCounts
from app.models.estimate import LikelihoodValue
from app.models.params import AnyParams, AnyReparam, ReparamPositive, ReparamSigned
from app.utils.states import decode_states

logger = logging.getLogger(__name__)

CLIP_EPS = 1e-12


@dataclass(frozen=True)
class NodeProblem:
    """Dados do subproblema do nó i: ϑ(u) = X[u]·z[:-1] + z[-1]

    X é a matriz de desenho (linhas = estados visitados); no modelo positivo
    é U_m, no relaxado do genérico é [U_m, 1 - U_m].
    """

    node: int
    X: np.ndarray
    states: np.ndarray
    n1: np.ndarray
    n0: np.ndarray
    T: float

    def success(self, z: np.ndarray) -> np.ndarray:
        return self.X @ z[:-1] + z[-1]

    def value(self, z: np.ndarray, clip: bool = False) -> float:
        """Contribuição do nó; -inf fora do domínio, ou ϑ truncado com `clip`"""
        theta = self.success(z)
        if clip:
            theta = np.clip(theta, CLIP_EPS, 1.0 - CLIP_EPS)
        elif np.any(theta <= 0.0) or np.any(theta >= 1.0):
            return -np.inf
        return float((xlogy(self.n1, theta) + xlogy(self.n0, 1.0 - theta)).sum() / self.T)

    def gradient(self, z: np.ndarray, clip: bool = False) -> np.ndarray:
        theta = self.success(z)
        if clip:
            theta = np.clip(theta, CLIP_EPS, 1.0 - CLIP_EPS)
        score = (self.n1 / theta - self.n0 / (1.0 - theta)) / self.T
        return np.append(self.X.T @ score, score.sum())


def visited_design(counts: TransitionCounts) -> np.ndarray:
    return decode_states(counts.states, counts.p).astype(np.float64)


def node_problems(counts: TransitionCounts, lifted: bool = False) -> list[NodeProblem]:
    U = visited_design(counts)
    X = np.hstack([U, 1.0 - U]) if lifted else U
    zeros = counts.zeros
    return [
        NodeProblem(node=i, X=X, states=counts.states, n1=counts.ones[:, i], n0=zeros[:, i], T=counts.T)
        for i in range(counts.p)
    ]


def _success_table(counts: TransitionCounts, rep: AnyReparam) -> np.ndarray:
    if rep.p != counts.p:
        raise DimensionMismatchError(f"parameters have p={rep.p}, counts have p={counts.p}")
    M, c = rep.affine_form()
    theta = visited_design(counts) @ M.T + c
    outside = np.argwhere((theta <= 0.0) | (theta >= 1.0))
    if outside.size:
        k, i = (int(v) for v in outside[0])
        u = int(counts.states[k])
        raise DomainError(
            f"success probability {theta[k, i]:.6g} of node {i} at visited state {u} is outside (0, 1)",
            node=i,
            state=u,
        )
    return theta


def log_likelihood(counts: TransitionCounts, rep: AnyReparam) -> LikelihoodValue:
    """L_T = (1/T) Σ_i Σ_u [N_{u,i,1} log ϑ + N_{u,i,0} log(1 - ϑ)]"""
    theta = _success_table(counts, rep)
    terms = xlogy(counts.ones, theta) + xlogy(counts.zeros, 1.0 - theta)
    per_node = terms.sum(axis=0) / counts.T
    return LikelihoodValue(total=float(per_node.sum()), per_node=per_node)


def log_likelihood_gradient(counts: TransitionCounts, rep: AnyReparam) -> AnyReparam:
    """Gradiente nas mesmas coordenadas de `rep`: (A, c) ou (Ā, c̄)"""
    theta = _success_table(counts, rep)
    score = (counts.ones / theta - counts.zeros / (1.0 - theta)) / counts.T
    grad_M = score.T @ visited_design(counts)
    grad_c = score.sum(axis=0)
    if isinstance(rep, ReparamSigned):
        return ReparamSigned(A_bar=grad_M, c_bar=grad_c)
    return ReparamPositive(A=grad_M, c=grad_c)


def params_log_likelihood(counts: TransitionCounts, params: AnyParams) -> LikelihoodValue:
    M, c = params.affine_form()
    if params.is_generic:
        return log_likelihood(counts, ReparamSigned(A_bar=M, c_bar=c))
    return log_likelihood(counts, ReparamPositive(A=M, c=c))


def pairwise_log_likelihood(counts: TransitionCounts, params: AnyParams) -> float:
    """Σ_{u,v} (N_uv/T) log p_uv, avaliando p_uv pela forma produto"""
    if params.p != counts.p:
        raise DimensionMismatchError(f"parameters have p={params.p}, counts have p={counts.p}")
    M, c = params.affine_form()
    src = decode_states(counts.pair_from, counts.p).astype(np.float64)
    dst = decode_states(counts.pair_to, counts.p)
    theta = src @ M.T + c
    factors = np.where(dst == 1, theta, 1.0 - theta)
    if np.any(factors <= 0.0):
        k, i = (int(v) for v in np.argwhere(factors <= 0.0)[0])
        raise DomainError(
            f"transition {int(counts.pair_from[k])}->{int(counts.pair_to[k])} has zero probability at node {i}",
            node=i,
            state=int(counts.pair_from[k]),
        )
    return float(counts.pair_count @ np.log(factors).sum(axis=1) / counts.T)


def trajectory_log_likelihood(codes: np.ndarray, p: int, params: AnyParams,
                              T: Optional[int] = None) -> float:
    """(1/T) Σ_k log p_{x(k) x(k+1)}, direto sobre a sequência codificada"""
    T = len(codes) - 1 if T is None else T
    M, c = params.affine_form()
    bits = decode_states(np.asarray(codes, dtype=np.uint64), p)
    theta = bits[:-1].astype(np.float64) @ M.T + c
    factors = np.where(bits[1:] == 1, theta, 1.0 - theta)
    return float(np.log(factors).sum() / T)
