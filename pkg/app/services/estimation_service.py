import logging
from typing import Dict, List, Optional, Type

import numpy as np
import scipy.linalg

from app.core.exceptions import (
    DimensionMismatchError,
    RankDeficientError,
    ZeroStateUnvisitedError,
)
from app.interfaces.data_interfaces import Estimator
from app.models.counts import DesignMatrix, TransitionCounts
from app.models.estimate import EstimateResult, OptimizerOptions
from app.models.params import ReparamPositive, ReparamSigned, SpaceConfig
from app.processors.optimizer import OptimizeOutcome, maximize
from app.processors.projection import (
    project_positive_row,
    project_theta,
    project_theta_signed,
    sign_pattern,
)
from app.processors.reparam import from_reparam, from_reparam_signed
from app.services.likelihood_service import NodeProblem, log_likelihood, node_problems
from app.services.stats_service import build_design

logger = logging.getLogger(__name__)

ACTIVE_TOLERANCE = 1e-9


def _check_p(counts: TransitionCounts, config: SpaceConfig) -> None:
    if counts.p != config.p:
        raise DimensionMismatchError(f"counts have p={counts.p}, config expects p={config.p}")


def active_constraints(a: np.ndarray, c: float, config: SpaceConfig) -> List[str]:
    """Restrições de K_i ativas num ponto da linha (a, c)"""
    s = float(a.sum())
    active = [f"a[{j}]>=0" for j in np.flatnonzero(a <= ACTIVE_TOLERANCE)]
    if s >= config.weight_cap - ACTIVE_TOLERANCE:
        active.append("sum<=1-b_min")
    if c <= config.rho_min * (1.0 - s) + ACTIVE_TOLERANCE:
        active.append("c>=rho_min*b")
    if c >= config.rho_max * (1.0 - s) - ACTIVE_TOLERANCE:
        active.append("c<=rho_max*b")
    return active


def _solve_node(problem: NodeProblem, n_weights: int, config: SpaceConfig,
                opts: OptimizerOptions) -> OptimizeOutcome:
    def project(z: np.ndarray) -> np.ndarray:
        a, c = project_positive_row(z[:-1], z[-1], config)
        return np.append(a, c)

    # ponto interior: a = 0, c no meio da banda
    z0 = np.append(np.zeros(n_weights), 0.5 * (config.rho_min + config.rho_max))
    clip = opts.solver == "slsqp"
    return maximize(
        lambda z: problem.value(z, clip=clip),
        lambda z: problem.gradient(z, clip=clip),
        project,
        z0,
        config,
        opts,
    )


def _run_nodes(counts: TransitionCounts, config: SpaceConfig, opts: OptimizerOptions,
               lifted: bool) -> List[OptimizeOutcome]:
    n_weights = 2 * counts.p if lifted else counts.p
    return [_solve_node(problem, n_weights, config, opts) for problem in node_problems(counts, lifted)]


def _optimizer_diagnostics(outcomes: List[OptimizeOutcome], solver: str) -> Dict:
    return {
        "solver": solver,
        "node_iterations": [o.iterations for o in outcomes],
        "node_converged": [o.converged for o in outcomes],
        "projected_grad_norm": max(o.grad_norm for o in outcomes),
    }


def ml_estimate(counts: TransitionCounts, config: SpaceConfig,
                opts: Optional[OptimizerOptions] = None) -> EstimateResult:
    """θ̂_T ∈ arg max_Θ L_T: p problemas côncavos independentes, um por nó"""
    _check_p(counts, config)
    opts = OptimizerOptions() if opts is None else opts

    outcomes = _run_nodes(counts, config, opts, lifted=False)
    A = np.vstack([o.z[:-1] for o in outcomes])
    c = np.array([o.z[-1] for o in outcomes])
    rep = ReparamPositive(A=A, c=c)
    params = from_reparam(rep, config)
    likelihood = log_likelihood(counts, rep).total

    diagnostics = _optimizer_diagnostics(outcomes, opts.solver)
    diagnostics["active_constraints"] = [active_constraints(A[i], c[i], config) for i in range(counts.p)]
    converged = all(o.converged for o in outcomes)
    iterations = max(o.iterations for o in outcomes)
    logger.info(f"✅ ML (positivo): p={counts.p}, L_T={likelihood:.6f}, {iterations} iterações, convergiu={converged}")
    return EstimateResult(
        method="ml",
        params=params,
        reparam=rep,
        converged=converged,
        iterations=iterations,
        likelihood=likelihood,
        diagnostics=diagnostics,
    )


def ml_estimate_generic(counts: TransitionCounts, config: SpaceConfig,
                        opts: Optional[OptimizerOptions] = None) -> EstimateResult:
    """ML do modelo genérico pela relaxação convexa e projeção em Θ̃.

    Cada nó é otimizado em z = (a⁺, a⁻, c) com ϑ(u) = a⁺·u + a⁻·(1 - u) + c
    sobre o conjunto K com 2p pesos; o ponto é colapsado em
    ā = a⁺ - a⁻, c̄ = Σa⁻ + c e projetado em Θ̃ com o padrão de sinais de ā.
    """
    _check_p(counts, config)
    opts = OptimizerOptions() if opts is None else opts
    p = counts.p

    outcomes = _run_nodes(counts, config, opts, lifted=True)
    A_bar = np.vstack([o.z[:p] - o.z[p:2 * p] for o in outcomes])
    c_bar = np.array([o.z[p:2 * p].sum() + o.z[-1] for o in outcomes])
    relaxed = ReparamSigned(A_bar=A_bar, c_bar=c_bar)

    projected = project_theta_signed(relaxed, config, preserve_support=sign_pattern(A_bar),
                                     tolerance=opts.projection_tolerance,
                                     max_iters=opts.projection_max_iters)
    displacement = float(max(np.max(np.abs(projected.A_bar - A_bar)), np.max(np.abs(projected.c_bar - c_bar))))
    moved = displacement > opts.projection_tolerance
    if moved:
        logger.warning(f"⚠️ Projeção em Θ̃ moveu o ótimo relaxado em {displacement:.2e}")

    params = from_reparam_signed(projected, config)
    likelihood = log_likelihood(counts, projected).total
    relaxed_likelihood = sum(o.value for o in outcomes)

    diagnostics = _optimizer_diagnostics(outcomes, opts.solver)
    diagnostics.update({
        "relaxed_likelihood": relaxed_likelihood,
        "relaxation_gap": relaxed_likelihood - likelihood,
        "projection_displacement": displacement,
        "projection_moved": moved,
        "active_constraints": [active_constraints(o.z[:-1], o.z[-1], config) for o in outcomes],
    })
    converged = all(o.converged for o in outcomes)
    iterations = max(o.iterations for o in outcomes)
    logger.info(f"✅ ML (genérico): p={p}, L̃_T={likelihood:.6f}, {iterations} iterações, convergiu={converged}")
    return EstimateResult(
        method="ml",
        params=params,
        reparam=projected,
        converged=converged,
        iterations=iterations,
        likelihood=likelihood,
        diagnostics=diagnostics,
        unprojected=relaxed,
    )


def _least_squares(counts: TransitionCounts, design: Optional[DesignMatrix]):
    """ĉ pelas visitas a 0_p e â_r = argmin ‖U_m a - (y_r - ĉ_r 1)‖ por QR pivotado"""
    design = build_design(counts) if design is None else design
    zero_visits = counts.visit_count(0)
    if zero_visits == 0:
        raise ZeroStateUnvisitedError("closed-form requires a visit to the all-zeros state")
    if design.rank_deficient:
        raise RankDeficientError(
            f"rank-deficient design: rank(U_m)={design.rank} < p={design.p} over m={design.m} visited states",
            rank=design.rank,
            p=design.p,
        )

    # estados em ordem crescente: 0_p é a primeira linha
    c_hat = design.Y[0].copy()

    Q, R, perm = scipy.linalg.qr(design.U, mode="economic", pivoting=True)
    return c_hat, Q, R, perm, design


def _normal_solution(Q: np.ndarray, R: np.ndarray, perm: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    solution = np.empty((R.shape[1], rhs.shape[1]))
    solution[perm] = scipy.linalg.solve_triangular(R, Q.T @ rhs)
    return solution


def _closed_form_raw(counts: TransitionCounts, design: Optional[DesignMatrix],
                     shared_noise: bool) -> tuple[np.ndarray, np.ndarray, DesignMatrix]:
    c_hat, Q, R, perm, design = _least_squares(counts, design)
    if shared_noise:
        c_hat = np.full_like(c_hat, c_hat.mean())
    # coluna r de W é â_r; a linha r de Â é â_rᵀ
    W = _normal_solution(Q, R, perm, design.Y - c_hat[None, :])
    return W.T, c_hat, design


def _displacement(before: np.ndarray, after: np.ndarray, c_before: np.ndarray, c_after: np.ndarray) -> float:
    return float(max(np.max(np.abs(after - before)), np.max(np.abs(c_after - c_before))))


def closed_form_estimate(counts: TransitionCounts, design: Optional[DesignMatrix] = None,
                         config: Optional[SpaceConfig] = None, shared_noise: bool = False) -> EstimateResult:
    """Estimador de forma fechada do modelo positivo, projetado em Θ"""
    config = SpaceConfig.default(counts.p) if config is None else config
    _check_p(counts, config)
    A_raw, c_raw, design = _closed_form_raw(counts, design, shared_noise)
    raw = ReparamPositive(A=A_raw, c=c_raw)
    rep = project_theta(raw, config)
    displacement = _displacement(A_raw, rep.A, c_raw, rep.c)
    params = from_reparam(rep, config)
    likelihood = log_likelihood(counts, rep).total

    logger.info(f"✅ Forma fechada (positivo): p={counts.p}, m={design.m}, deslocamento da projeção={displacement:.2e}")
    return EstimateResult(
        method="closed-form",
        params=params,
        reparam=rep,
        converged=True,
        iterations=0,
        likelihood=likelihood,
        diagnostics={
            "rank": design.rank,
            "m": design.m,
            "zero_state_visits": counts.visit_count(0),
            "shared_noise": shared_noise,
            "projection_displacement": displacement,
        },
        unprojected=raw,
    )


def closed_form_estimate_generic(counts: TransitionCounts, design: Optional[DesignMatrix] = None,
                                 config: Optional[SpaceConfig] = None) -> EstimateResult:
    """Estimador de forma fechada do modelo genérico.

    Â e Ã̂ saem dos sinais de Ā̂; a projeção em Θ̃ preserva esses suportes.
    """
    config = SpaceConfig.default(counts.p) if config is None else config
    _check_p(counts, config)
    A_bar_raw, c_bar_raw, design = _closed_form_raw(counts, design, shared_noise=False)
    raw = ReparamSigned(A_bar=A_bar_raw, c_bar=c_bar_raw)
    rep = project_theta_signed(raw, config, preserve_support=sign_pattern(A_bar_raw))
    displacement = _displacement(A_bar_raw, rep.A_bar, c_bar_raw, rep.c_bar)
    params = from_reparam_signed(rep, config)
    likelihood = log_likelihood(counts, rep).total

    logger.info(f"✅ Forma fechada (genérico): p={counts.p}, m={design.m}, deslocamento da projeção={displacement:.2e}")
    return EstimateResult(
        method="closed-form",
        params=params,
        reparam=rep,
        converged=True,
        iterations=0,
        likelihood=likelihood,
        diagnostics={
            "rank": design.rank,
            "m": design.m,
            "zero_state_visits": counts.visit_count(0),
            "projection_displacement": displacement,
        },
        unprojected=raw,
    )


class MLEstimator(Estimator):
    name = "ml"

    def __init__(self, generic: bool = False, opts: Optional[OptimizerOptions] = None):
        self.generic = generic
        self.opts = opts

    def estimate(self, counts: TransitionCounts, config: SpaceConfig) -> EstimateResult:
        if self.generic:
            return ml_estimate_generic(counts, config, self.opts)
        return ml_estimate(counts, config, self.opts)


class ClosedFormEstimator(Estimator):
    name = "closed-form"

    def __init__(self, generic: bool = False, shared_noise: bool = False):
        self.generic = generic
        self.shared_noise = shared_noise

    def estimate(self, counts: TransitionCounts, config: SpaceConfig) -> EstimateResult:
        if self.generic:
            return closed_form_estimate_generic(counts, None, config)
        return closed_form_estimate(counts, None, config, self.shared_noise)


ESTIMATORS: Dict[str, Type[Estimator]] = {
    MLEstimator.name: MLEstimator,
    ClosedFormEstimator.name: ClosedFormEstimator,
}


def get_estimator(name: str, generic: bool = False, opts: Optional[OptimizerOptions] = None,
                  shared_noise: bool = False) -> Estimator:
    if name not in ESTIMATORS:
        raise ValueError(f"unknown estimator '{name}', expected one of {sorted(ESTIMATORS)}")
    if name == MLEstimator.name:
        return MLEstimator(generic=generic, opts=opts)
    return ClosedFormEstimator(generic=generic, shared_noise=shared_noise)
