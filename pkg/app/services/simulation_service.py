from typing import Optional

import logging
import numpy as np

from app.core.config import settings
from app.core.exceptions import DimensionMismatchError, InfeasibleSpecError
from app.core.rng import make_rng
from app.models.params import AnyParams, BarParams, GenericBarParams, GraphSpec, SpaceConfig
from app.models.trajectory import InitialDistribution, Trajectory

logger = logging.getLogger(__name__)


class NetworkGenerator:
    """Gera redes BAR verdadeiras que satisfazem Θ ou Θ̃ com peso mínimo a_min.

    Por nó i (ordem 0..p-1): grau d_i ~ U{1..d_max}; d_i pais distintos;
    b_i ~ U[b_min, b_cap_i]; pesos ~ U[a_min, w_max] reescalados para somar
    1 - b_i, re-sorteando (b_i e pesos) se algum peso cair abaixo de a_min;
    no modelo genérico cada aresta vai para A ou Ã com probabilidade 1/2;
    ρ_wi ~ U[ρ_min, ρ_max].
    """

    def __init__(self, w_max: Optional[float] = None, b_cap: Optional[float] = None,
                 max_attempts: Optional[int] = None):
        self.w_max = settings.graph_w_max if w_max is None else w_max
        self.b_cap = settings.graph_b_cap if b_cap is None else b_cap
        self.max_attempts = settings.graph_max_attempts if max_attempts is None else max_attempts

    def _check_feasible(self, spec: GraphSpec, config: SpaceConfig) -> None:
        if spec.p != config.p:
            raise DimensionMismatchError(f"graph spec has p={spec.p}, config expects p={config.p}")
        if spec.d_max * spec.a_min > config.weight_cap + 1e-15:
            raise InfeasibleSpecError(
                f"infeasible graph spec: d_max*a_min = {spec.d_max * spec.a_min:.6g} > 1 - b_min = {config.weight_cap:.6g}"
            )
        if self.w_max < spec.a_min:
            raise InfeasibleSpecError(f"w_max ({self.w_max}) must be >= a_min ({spec.a_min})")

    def _row_weights(self, rng: np.random.Generator, degree: int, a_min: float,
                     config: SpaceConfig, node: int) -> tuple[np.ndarray, float]:
        b_hi = max(config.b_min, min(self.b_cap, 1.0 - degree * a_min))
        for _ in range(self.max_attempts):
            b = rng.uniform(config.b_min, b_hi)
            raw = rng.uniform(a_min, self.w_max, size=degree)
            weights = raw * ((1.0 - b) / raw.sum())
            if weights.min() >= a_min:
                return weights, b
        raise InfeasibleSpecError(
            f"node {node}: no weight draw with every weight >= a_min after {self.max_attempts} attempts"
        )

    def generate(self, spec: GraphSpec, config: SpaceConfig, seed: int) -> AnyParams:
        self._check_feasible(spec, config)
        rng = make_rng(seed, "graph")
        p = spec.p
        A = np.zeros((p, p))
        A_tilde = np.zeros((p, p))
        b = np.empty(p)

        for i in range(p):
            degree = int(rng.integers(1, spec.d_max + 1))
            parents = rng.choice(p, size=degree, replace=False)
            weights, b[i] = self._row_weights(rng, degree, spec.a_min, config, i)
            if spec.signed:
                negative = rng.random(degree) < 0.5
                A[i, parents[~negative]] = weights[~negative]
                A_tilde[i, parents[negative]] = weights[negative]
            else:
                A[i, parents] = weights
            # Fecha a linha exatamente: Σ_j (a_ij + ã_ij) + b_i = 1
            b[i] = 1.0 - A[i].sum() - A_tilde[i].sum()

        rho_w = rng.uniform(config.rho_min, config.rho_max, size=p)
        edges = int(np.count_nonzero(A) + np.count_nonzero(A_tilde))
        logger.info(f"🕸️ Rede gerada: p={p}, d_max={spec.d_max}, {edges} arestas, seed={seed}")

        if spec.signed:
            return GenericBarParams(A=A, A_tilde=A_tilde, b=b, rho_w=rho_w)
        return BarParams(A=A, b=b, rho_w=rho_w)


def generate_graph(spec: GraphSpec, config: SpaceConfig, seed: int) -> AnyParams:
    return NetworkGenerator().generate(spec, config, seed)


def bernoulli_argument(params: AnyParams, state: np.ndarray) -> np.ndarray:
    """P(X_i(k+1) = 1 | X(k) = x) = M_i·x + c_i para todo i"""
    M, c = params.affine_form()
    x = np.asarray(state, dtype=float)
    if x.shape != (params.p,):
        raise DimensionMismatchError(f"state has {x.shape[0] if x.ndim else 0} bits, expected {params.p}")
    return M @ x + c


def step(params: AnyParams, state: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Um passo da cadeia; consome exatamente p uniformes, na ordem dos nós"""
    prob = bernoulli_argument(params, state)
    return (rng.random(params.p) < prob).astype(np.uint8)


def simulate(params: AnyParams, T: int, initial: Optional[InitialDistribution] = None,
             seed: int = 0) -> Trajectory:
    """x(0) ~ initial, x(k+1) = step(x(k)); determinístico dada a seed.

    As uniformes dos T passos são tiradas em bloco (T, p), o que consome o
    fluxo na mesma ordem que T chamadas de `step`.
    """
    if T < 0:
        raise ValueError(f"T must be >= 0, got {T}")
    initial = InitialDistribution() if initial is None else initial
    rng = make_rng(seed, "simulate")
    p = params.p
    M, c = params.affine_form()

    states = np.empty((T + 1, p), dtype=np.uint8)
    states[0] = initial.sample(rng, p)
    uniforms = rng.random((T, p))
    x = states[0].astype(float)
    for k in range(T):
        nxt = uniforms[k] < M @ x + c
        states[k + 1] = nxt
        x = nxt.astype(float)

    logger.info(f"🎲 Trajetória simulada: p={p}, T={T}, seed={seed}")
    return Trajectory(states=states)
