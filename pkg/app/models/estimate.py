from dataclasses import dataclass, field
from typing import Any, Dict, Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from app.core.config import settings
from app.models.params import AnyParams, AnyReparam


@dataclass(frozen=True)
class LikelihoodValue:
    """L_T (ou L̃_T) reescalada e as contribuições por nó; sem o termo inicial"""

    total: float
    per_node: np.ndarray


class OptimizerOptions(BaseModel):
    model_config = ConfigDict(frozen=True)

    solver: Literal["pga", "slsqp"] = Field(default_factory=lambda: settings.solver)
    max_iters: int = Field(default_factory=lambda: settings.max_iters, gt=0)
    grad_tolerance: float = Field(default_factory=lambda: settings.grad_tolerance, gt=0)
    step_init: float = Field(default_factory=lambda: settings.step_init, gt=0)
    step_shrink: float = Field(default_factory=lambda: settings.step_shrink, gt=0, lt=1)
    armijo_slope: float = Field(default_factory=lambda: settings.armijo_slope, gt=0, lt=1)
    projection_tolerance: float = Field(default_factory=lambda: settings.projection_tolerance, gt=0)
    projection_max_iters: int = Field(default_factory=lambda: settings.projection_max_iters, gt=0)


@dataclass(frozen=True)
class EstimateResult:
    method: str
    params: AnyParams
    reparam: AnyReparam
    converged: bool
    iterations: int
    likelihood: Optional[float]
    diagnostics: Dict[str, Any] = field(default_factory=dict)
    unprojected: Optional[AnyReparam] = None
