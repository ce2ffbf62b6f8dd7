from typing import List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from app.core.config import settings
from app.models.params import GraphSpec, SpaceConfig
from app.models.trajectory import InitialDistribution

EstimatorName = Literal["ml", "closed-form"]


class ExperimentConfig(BaseModel):
    """Grade (estimador x T x seed) de um experimento de recuperação de rede"""

    model_config = ConfigDict(frozen=True)

    variant: Literal["positive", "generic"] = "positive"
    p: int = Field(..., ge=1)
    d_max: int = Field(..., ge=1)
    a_min: float = Field(default_factory=lambda: settings.a_min)
    b_min: float = Field(default_factory=lambda: settings.b_min)
    rho_min: float = Field(default_factory=lambda: settings.rho_min)
    rho_max: float = Field(default_factory=lambda: settings.rho_max)
    T_grid: List[int] = Field(..., min_length=1)
    seeds: List[int] = Field(..., min_length=1)
    estimators: List[EstimatorName] = Field(default_factory=lambda: ["ml", "closed-form"], min_length=1)
    c_thresh: float = Field(default_factory=lambda: settings.c_thresh, gt=0.0, lt=1.0)
    output_dir: str = "results"
    master_seed: int = Field(0, ge=0)
    solver: Optional[Literal["pga", "slsqp"]] = None
    shared_noise: bool = False
    workers: int = Field(default_factory=lambda: settings.workers, ge=1)
    record_runtime: bool = False
    initial: InitialDistribution = Field(default_factory=InitialDistribution)

    @model_validator(mode="after")
    def _check_upstream(self) -> "ExperimentConfig":
        if any(T < 1 for T in self.T_grid):
            raise ValueError("every T in T_grid must be >= 1")
        if any(seed < 0 for seed in self.seeds):
            raise ValueError("seeds must be non-negative")
        try:
            self.space_config()
            self.graph_spec()
        except ValidationError as exc:
            raise ValueError(str(exc)) from None
        return self

    def space_config(self) -> SpaceConfig:
        return SpaceConfig(p=self.p, b_min=self.b_min, rho_min=self.rho_min, rho_max=self.rho_max)

    def graph_spec(self) -> GraphSpec:
        return GraphSpec(p=self.p, d_max=self.d_max, a_min=self.a_min, signed=self.variant == "generic")
