from typing import FrozenSet, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

Edge = Tuple[int, int]


class EdgeSet(BaseModel):
    """Arestas dirigidas (j, i) = j -> i, nós indexados a partir de 0"""

    model_config = ConfigDict(frozen=True)

    p: int = Field(..., ge=1)
    edges: FrozenSet[Edge] = frozenset()

    @model_validator(mode="after")
    def _check_range(self) -> "EdgeSet":
        for j, i in self.edges:
            if not (0 <= j < self.p and 0 <= i < self.p):
                raise ValueError(f"edge ({j}, {i}) outside [0, {self.p})^2")
        return self

    def __len__(self) -> int:
        return len(self.edges)

    def __contains__(self, edge: Edge) -> bool:
        return tuple(edge) in self.edges


class ParameterErrors(BaseModel):
    """Erros máximo-absoluto e de Frobenius por bloco de parâmetros"""

    max_abs_A: float
    frob_A: float
    max_abs_A_tilde: float = 0.0
    frob_A_tilde: float = 0.0
    max_abs_b: float
    frob_b: float
    max_abs_rho: float
    frob_rho: float


class ScoreReport(BaseModel):
    precision: float = Field(..., ge=0.0, le=1.0)
    recall: float = Field(..., ge=0.0, le=1.0)
    f1: float = Field(..., ge=0.0, le=1.0)
    true_positives: int
    false_positives: int
    false_negatives: int
    errors: Optional[ParameterErrors] = None
