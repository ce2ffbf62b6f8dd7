from typing import List, Literal, Optional, Tuple

from pydantic import BaseModel, Field

from app.models.evaluation import ScoreReport
from app.models.trajectory import InitialDistribution
from app.schemas.params import ParamsDocument


class SpaceOverrides(BaseModel):
    b_min: Optional[float] = None
    rho_min: Optional[float] = None
    rho_max: Optional[float] = None


class GenerateRequest(SpaceOverrides):
    p: int = Field(..., ge=1, le=64)
    d_max: int = Field(..., ge=1)
    a_min: Optional[float] = None
    signed: bool = False
    seed: int = Field(0, ge=0)


class ValidationResponse(BaseModel):
    is_valid: bool
    errors: List[str]


class SimulateRequest(BaseModel):
    params: ParamsDocument
    T: int = Field(..., ge=0)
    seed: int = Field(0, ge=0)
    initial: InitialDistribution = Field(default_factory=InitialDistribution)


class TrajectoryBody(BaseModel):
    p: int
    T: int
    states: List[List[int]]


class EstimateRequest(SpaceOverrides):
    states: List[List[int]]
    method: Literal["ml", "closed-form"] = "ml"
    variant: Literal["positive", "generic"] = "positive"
    solver: Optional[Literal["pga", "slsqp"]] = None
    shared_noise: bool = False


class ExactRequest(BaseModel):
    params: ParamsDocument
    include_matrix: bool = False


class ExactResponse(BaseModel):
    p: int
    pi: List[float]
    entropy_rate: float
    power_iterations: int
    P: Optional[List[List[float]]] = None


class ScoreRequest(BaseModel):
    truth: ParamsDocument
    estimate: ParamsDocument
    a_min: Optional[float] = None
    c_thresh: Optional[float] = None


class ScoreResponse(ScoreReport):
    true_edges: List[Tuple[int, int]]
    inferred_edges: List[Tuple[int, int]]
