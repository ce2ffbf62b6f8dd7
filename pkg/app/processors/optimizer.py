"""Maximização côncava com restrições convexas, por subproblema de nó."""

import logging
from dataclasses import dataclass
from typing import Callable, List, Optional

import numpy as np
import scipy.optimize

from app.models.estimate import OptimizerOptions
from app.models.params import SpaceConfig

logger = logging.getLogger(__name__)

Objective = Callable[[np.ndarray], float]
Gradient = Callable[[np.ndarray], np.ndarray]
Projection = Callable[[np.ndarray], np.ndarray]

MIN_STEP = 1e-20
MIN_BB_STEP = 1e-10
MAX_BB_STEP = 1e10


@dataclass(frozen=True)
class OptimizeOutcome:
    z: np.ndarray
    value: float
    iterations: int
    converged: bool
    grad_norm: float


def projected_gradient_ascent(fun: Objective, grad: Gradient, project: Projection,
                              z0: np.ndarray, opts: OptimizerOptions) -> OptimizeOutcome:
    """Subida de gradiente projetada com busca de Armijo.

    O passo inicial de cada busca é o de Barzilai-Borwein (sᵀs / sᵀy, com
    y = g_anterior - g); sem curvatura positiva volta a step_init.
    Parada quando ‖z - [z + ∇f(z)]⁺‖ <= grad_tolerance (gradiente projetado)
    ou ao atingir max_iters.
    """
    z = project(np.asarray(z0, dtype=float))
    value = fun(z)
    g = grad(z)
    grad_norm = float(np.linalg.norm(z - project(z + g)))
    trial = opts.step_init

    for iteration in range(1, opts.max_iters + 1):
        if grad_norm <= opts.grad_tolerance:
            return OptimizeOutcome(z, value, iteration - 1, True, grad_norm)

        step = trial
        while True:
            candidate = project(z + step * g)
            cand_value = fun(candidate)
            if cand_value >= value + opts.armijo_slope * float(g @ (candidate - z)):
                break
            step *= opts.step_shrink
            if step < MIN_STEP:
                logger.warning(f"⚠️ Busca de passo esgotada (‖g‖proj={grad_norm:.2e})")
                return OptimizeOutcome(z, value, iteration, False, grad_norm)

        s = candidate - z
        g_next = grad(candidate)
        curvature = float(s @ (g - g_next))
        trial = float(np.clip(s @ s / curvature, MIN_BB_STEP, MAX_BB_STEP)) if curvature > 0.0 else opts.step_init

        z, value, g = candidate, cand_value, g_next
        grad_norm = float(np.linalg.norm(z - project(z + g)))

    converged = grad_norm <= opts.grad_tolerance
    if not converged:
        logger.warning(f"⚠️ Otimizador atingiu {opts.max_iters} iterações (‖g‖proj={grad_norm:.2e})")
    return OptimizeOutcome(z, value, opts.max_iters, converged, grad_norm)


def row_constraints(n_weights: int, config: SpaceConfig) -> List[dict]:
    """Restrições de K_i para z = (a, c) no formato do SLSQP (g(z) >= 0)"""
    cap, lo, hi = config.weight_cap, config.rho_min, config.rho_max
    ones = np.append(np.ones(n_weights), 0.0)
    unit_c = np.append(np.zeros(n_weights), 1.0)
    return [
        {"type": "ineq", "fun": lambda z: cap - z[:-1].sum(), "jac": lambda z: -ones},
        {"type": "ineq", "fun": lambda z: z[-1] - lo * (1.0 - z[:-1].sum()), "jac": lambda z: unit_c + lo * ones},
        {"type": "ineq", "fun": lambda z: hi * (1.0 - z[:-1].sum()) - z[-1], "jac": lambda z: -unit_c - hi * ones},
    ]


def slsqp_ascent(fun: Objective, grad: Gradient, project: Projection, z0: np.ndarray,
                 config: SpaceConfig, opts: OptimizerOptions) -> OptimizeOutcome:
    """Mesmo subproblema resolvido pelo SLSQP do scipy; a saída é reprojetada"""
    z0 = project(np.asarray(z0, dtype=float))
    n_weights = z0.size - 1
    bounds = [(0.0, None)] * n_weights + [(None, None)]
    result = scipy.optimize.minimize(
        lambda z: -fun(z),
        z0,
        jac=lambda z: -grad(z),
        method="SLSQP",
        bounds=bounds,
        constraints=row_constraints(n_weights, config),
        options={"maxiter": opts.max_iters, "ftol": opts.grad_tolerance * 1e-4},
    )
    z = project(result.x)
    if not result.success:
        logger.warning(f"⚠️ SLSQP não convergiu: {result.message}")
    grad_norm = float(np.linalg.norm(z - project(z + grad(z))))
    return OptimizeOutcome(z, fun(z), int(result.nit), bool(result.success), grad_norm)


def maximize(fun: Objective, grad: Gradient, project: Projection, z0: np.ndarray,
             config: SpaceConfig, opts: Optional[OptimizerOptions] = None) -> OptimizeOutcome:
    opts = OptimizerOptions() if opts is None else opts
    if opts.solver == "slsqp":
        return slsqp_ascent(fun, grad, project, z0, config, opts)
    return projected_gradient_ascent(fun, grad, project, z0, opts)
