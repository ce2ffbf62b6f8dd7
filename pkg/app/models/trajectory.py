from typing import Annotated, Any, List, Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PlainSerializer, PlainValidator, model_validator

from app.core.exceptions import DimensionMismatchError
from app.utils.states import encode_states


def _as_bits(value: Any) -> np.ndarray:
    try:
        arr = np.array(value, dtype=np.int64)
    except (ValueError, TypeError):
        raise ValueError("states: invalid values")
    if arr.ndim != 2:
        raise DimensionMismatchError(f"states: expected (T+1, p) array, got shape {arr.shape}")
    if arr.size and not np.all((arr == 0) | (arr == 1)):
        raise ValueError("states: entries must be 0 or 1")
    bits = arr.astype(np.uint8)
    bits.setflags(write=False)
    return bits


BitMatrix = Annotated[
    np.ndarray,
    PlainValidator(_as_bits),
    PlainSerializer(lambda a: a.tolist(), return_type=list),
]


class Trajectory(BaseModel):
    """Sequência observada x(0), ..., x(T) de estados com p bits"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    states: BitMatrix

    @model_validator(mode="after")
    def _check_length(self) -> "Trajectory":
        if self.states.shape[0] < 1 or self.states.shape[1] < 1:
            raise DimensionMismatchError("a trajectory holds at least one state of at least one bit")
        return self

    @property
    def p(self) -> int:
        return self.states.shape[1]

    @property
    def T(self) -> int:
        return self.states.shape[0] - 1

    @property
    def codes(self) -> np.ndarray:
        return encode_states(self.states)


class InitialDistribution(BaseModel):
    """Distribuição de X(0): massa pontual, uniforme ou produto de Bernoullis"""

    model_config = ConfigDict(frozen=True)

    kind: Literal["point", "uniform", "product"] = "uniform"
    state: Optional[List[int]] = None
    q: Optional[List[float]] = None

    @model_validator(mode="after")
    def _check_kind(self) -> "InitialDistribution":
        if self.kind == "point":
            if self.state is None or any(bit not in (0, 1) for bit in self.state):
                raise ValueError("point-mass initial distribution needs a 0/1 state")
        if self.kind == "product":
            if self.q is None or any(not 0.0 <= qi <= 1.0 for qi in self.q):
                raise ValueError("product initial distribution needs q in [0, 1]^p")
        return self

    @classmethod
    def point_mass(cls, bits: List[int]) -> "InitialDistribution":
        return cls(kind="point", state=[int(b) for b in bits])

    def sample(self, rng: np.random.Generator, p: int) -> np.ndarray:
        """Sorteia x(0); uniforme e produto consomem p uniformes, massa pontual nenhuma"""
        if self.kind == "point":
            if len(self.state) != p:
                raise DimensionMismatchError(f"initial state has {len(self.state)} bits, expected {p}")
            return np.array(self.state, dtype=np.uint8)
        if self.kind == "uniform":
            q = np.full(p, 0.5)
        else:
            if len(self.q) != p:
                raise DimensionMismatchError(f"initial q has {len(self.q)} entries, expected {p}")
            q = np.asarray(self.q, dtype=float)
        return (rng.random(p) < q).astype(np.uint8)
