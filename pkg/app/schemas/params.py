from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field, model_validator

from app.models.estimate import EstimateResult
from app.models.params import AnyParams, BarParams, GenericBarParams, SpaceConfig


class SpaceConfigBody(BaseModel):
    b_min: float
    rho_min: float
    rho_max: float


class ParamsDocument(BaseModel):
    """Esquema JSON dos arquivos de parâmetros (matrizes por linha)"""

    p: int = Field(..., ge=1)
    A: List[List[float]]
    A_tilde: Optional[List[List[float]]] = None
    b: List[float]
    rho_w: List[float]
    config: SpaceConfigBody
    diagnostics: Optional[Dict[str, Any]] = None

    @model_validator(mode="after")
    def _check_shapes(self) -> "ParamsDocument":
        p = self.p
        if len(self.b) != p or len(self.rho_w) != p:
            raise ValueError(f"b and rho_w must have length p={p}, got {len(self.b)} and {len(self.rho_w)}")
        matrices = {"A": self.A} if self.A_tilde is None else {"A": self.A, "A_tilde": self.A_tilde}
        for name, rows in matrices.items():
            if len(rows) != p or any(len(row) != p for row in rows):
                raise ValueError(f"{name} must be {p}x{p}")
        return self

    def to_params(self) -> AnyParams:
        if self.A_tilde is not None:
            params = GenericBarParams(A=self.A, A_tilde=self.A_tilde, b=self.b, rho_w=self.rho_w)
        else:
            params = BarParams(A=self.A, b=self.b, rho_w=self.rho_w)
        return params

    def to_config(self) -> SpaceConfig:
        return SpaceConfig(p=self.p, **self.config.model_dump())

    @classmethod
    def from_params(cls, params: AnyParams, config: SpaceConfig,
                    diagnostics: Optional[Dict[str, Any]] = None) -> "ParamsDocument":
        return cls(
            p=params.p,
            A=params.A.tolist(),
            A_tilde=params.A_tilde.tolist() if params.is_generic else None,
            b=params.b.tolist(),
            rho_w=params.rho_w.tolist(),
            config=SpaceConfigBody(b_min=config.b_min, rho_min=config.rho_min, rho_max=config.rho_max),
            diagnostics=diagnostics,
        )

    @classmethod
    def from_estimate(cls, result: EstimateResult, config: SpaceConfig) -> "ParamsDocument":
        diagnostics = {
            "method": result.method,
            "converged": result.converged,
            "iterations": result.iterations,
            "log_likelihood": result.likelihood,
            **result.diagnostics,
        }
        return cls.from_params(result.params, config, diagnostics)

    def dump(self) -> str:
        return self.model_dump_json(indent=2, exclude_none=True) + "\n"
