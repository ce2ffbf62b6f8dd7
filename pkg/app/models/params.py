from typing import Annotated, Any, List, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PlainSerializer, PlainValidator, model_validator

from app.core.config import settings
from app.core.exceptions import DimensionMismatchError
from app.utils.arrays import clean_array


def _as_array(value: Any) -> np.ndarray:
    return clean_array(value, "array")


# ndarray somente-leitura dentro de modelos pydantic; serializa como lista
Array = Annotated[
    np.ndarray,
    PlainValidator(_as_array),
    PlainSerializer(lambda a: a.tolist(), return_type=list),
]


def _check_matrix(name: str, m: np.ndarray, p: int) -> None:
    if m.shape != (p, p):
        raise DimensionMismatchError(f"{name}: expected shape ({p}, {p}), got {m.shape}")


def _check_vector(name: str, v: np.ndarray, p: int) -> None:
    if v.shape != (p,):
        raise DimensionMismatchError(f"{name}: expected shape ({p},), got {v.shape}")


class SpaceConfig(BaseModel):
    """Limites do espaço de parâmetros Θ / Θ̃"""

    model_config = ConfigDict(frozen=True)

    p: int = Field(..., ge=1)
    b_min: float = Field(..., gt=0.0, lt=1.0)
    rho_min: float = Field(..., gt=0.0, lt=1.0)
    rho_max: float = Field(..., gt=0.0, lt=1.0)

    @model_validator(mode="after")
    def _check_rho_band(self) -> "SpaceConfig":
        if not self.rho_min < self.rho_max:
            raise ValueError(f"rho_min ({self.rho_min}) must be < rho_max ({self.rho_max})")
        return self

    @classmethod
    def default(cls, p: int, **overrides: float) -> "SpaceConfig":
        values = {"b_min": settings.b_min, "rho_min": settings.rho_min, "rho_max": settings.rho_max}
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(p=p, **values)

    @property
    def weight_cap(self) -> float:
        """Limite de Σ_j a_ij (ou Σ_j |ā_ij|)"""
        return 1.0 - self.b_min

    @property
    def probability_floor(self) -> float:
        return self.b_min * self.rho_min

    @property
    def probability_ceiling(self) -> float:
        return 1.0 - self.b_min * (1.0 - self.rho_max)


class _ArrayModel(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)


class BarParams(_ArrayModel):
    """θ = (A, b, ρ_w) do modelo só com correlações positivas"""

    A: Array
    b: Array
    rho_w: Array

    @model_validator(mode="after")
    def _check_shapes(self) -> "BarParams":
        p = self.b.shape[0] if self.b.ndim == 1 else -1
        _check_vector("b", self.b, p)
        _check_matrix("A", self.A, p)
        _check_vector("rho_w", self.rho_w, p)
        return self

    @property
    def p(self) -> int:
        return self.b.shape[0]

    @property
    def is_generic(self) -> bool:
        return False

    @property
    def c(self) -> np.ndarray:
        return self.b * self.rho_w

    def affine_form(self) -> Tuple[np.ndarray, np.ndarray]:
        """(M, c) tais que P(X_i(k+1)=1 | x) = M_i·x + c_i"""
        return np.asarray(self.A), self.c


class GenericBarParams(_ArrayModel):
    """θ̃ = (A, Ã, b, ρ_w) do modelo genérico (influências negativas em Ã)"""

    A: Array
    A_tilde: Array
    b: Array
    rho_w: Array

    @model_validator(mode="after")
    def _check_shapes(self) -> "GenericBarParams":
        p = self.b.shape[0] if self.b.ndim == 1 else -1
        _check_vector("b", self.b, p)
        _check_matrix("A", self.A, p)
        _check_matrix("A_tilde", self.A_tilde, p)
        _check_vector("rho_w", self.rho_w, p)
        return self

    @property
    def p(self) -> int:
        return self.b.shape[0]

    @property
    def is_generic(self) -> bool:
        return True

    @property
    def c(self) -> np.ndarray:
        return self.b * self.rho_w

    def affine_form(self) -> Tuple[np.ndarray, np.ndarray]:
        A_bar = self.A - self.A_tilde
        c_bar = self.A_tilde.sum(axis=1) + self.b * self.rho_w
        return A_bar, c_bar


AnyParams = Union[BarParams, GenericBarParams]


class ReparamPositive(_ArrayModel):
    """Coordenadas (A, c), c_i = b_i·ρ_wi; aceita pontos fora de Θ"""

    A: Array
    c: Array

    @model_validator(mode="after")
    def _check_shapes(self) -> "ReparamPositive":
        p = self.c.shape[0] if self.c.ndim == 1 else -1
        _check_vector("c", self.c, p)
        _check_matrix("A", self.A, p)
        return self

    @property
    def p(self) -> int:
        return self.c.shape[0]

    def affine_form(self) -> Tuple[np.ndarray, np.ndarray]:
        return np.asarray(self.A), np.asarray(self.c)


class ReparamSigned(_ArrayModel):
    """Coordenadas (Ā, c̄) do modelo genérico; aceita pontos fora de Θ̃"""

    A_bar: Array
    c_bar: Array

    @model_validator(mode="after")
    def _check_shapes(self) -> "ReparamSigned":
        p = self.c_bar.shape[0] if self.c_bar.ndim == 1 else -1
        _check_vector("c_bar", self.c_bar, p)
        _check_matrix("A_bar", self.A_bar, p)
        return self

    @property
    def p(self) -> int:
        return self.c_bar.shape[0]

    def affine_form(self) -> Tuple[np.ndarray, np.ndarray]:
        return np.asarray(self.A_bar), np.asarray(self.c_bar)


AnyReparam = Union[ReparamPositive, ReparamSigned]


class GraphSpec(BaseModel):
    """Parâmetros das redes sintéticas"""

    model_config = ConfigDict(frozen=True)

    p: int = Field(..., ge=1)
    d_max: int = Field(..., ge=1)
    a_min: float = Field(..., gt=0.0, lt=1.0)
    signed: bool = False

    @model_validator(mode="after")
    def _check_degree(self) -> "GraphSpec":
        if self.d_max > self.p:
            raise ValueError(f"d_max ({self.d_max}) must be <= p ({self.p})")
        return self


class ValidationReport(BaseModel):
    is_valid: bool = True
    errors: List[str] = Field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.is_valid
