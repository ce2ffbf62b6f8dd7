from dataclasses import dataclass, field
from typing import Dict, Tuple

import numpy as np


@dataclass(frozen=True)
class TransitionCounts:
    """Estatísticas suficientes de uma trajetória.

    Os estados de partida visitados ficam em `states` (codificação inteira,
    ordem crescente); `visits[k]` = N_u e `ones[k, r]` = N_{u,r,1} para
    u = states[k]. Os pares (u, v) ficam em arrays paralelos ordenados.
    Contagens em float64: inteiras para dados observados, fracionárias para
    contagens esperadas.
    """

    p: int
    T: float
    states: np.ndarray
    visits: np.ndarray
    ones: np.ndarray
    pair_from: np.ndarray
    pair_to: np.ndarray
    pair_count: np.ndarray
    _index: Dict[int, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        for name in ("states", "visits", "ones", "pair_from", "pair_to", "pair_count"):
            getattr(self, name).setflags(write=False)
        object.__setattr__(self, "_index", {int(u): k for k, u in enumerate(self.states)})

    @property
    def m(self) -> int:
        return self.states.shape[0]

    @property
    def zeros(self) -> np.ndarray:
        """N_{u,r,0} = N_u - N_{u,r,1}"""
        return self.visits[:, None] - self.ones

    def visit_count(self, u: int) -> float:
        k = self._index.get(int(u))
        return 0.0 if k is None else float(self.visits[k])

    def marginal_count(self, u: int, r: int, l: int) -> float:
        k = self._index.get(int(u))
        if k is None:
            return 0.0
        ones = float(self.ones[k, r])
        return ones if l == 1 else float(self.visits[k]) - ones

    @property
    def visit_counts(self) -> Dict[int, float]:
        return {int(u): float(n) for u, n in zip(self.states, self.visits)}

    @property
    def pair_counts(self) -> Dict[Tuple[int, int], float]:
        return {
            (int(u), int(v)): float(n)
            for u, v, n in zip(self.pair_from, self.pair_to, self.pair_count)
        }

    @property
    def marginal_counts(self) -> Dict[Tuple[int, int, int], float]:
        out: Dict[Tuple[int, int, int], float] = {}
        for k, u in enumerate(self.states):
            for r in range(self.p):
                ones = float(self.ones[k, r])
                out[(int(u), r, 1)] = ones
                out[(int(u), r, 0)] = float(self.visits[k]) - ones
        return out


@dataclass(frozen=True)
class DesignMatrix:
    """U_m (estados visitados distintos) e as colunas y_{m,r} = N_{u,r,1}/N_u"""

    U: np.ndarray
    Y: np.ndarray
    states: np.ndarray
    rank: int

    @property
    def m(self) -> int:
        return self.U.shape[0]

    @property
    def p(self) -> int:
        return self.U.shape[1]

    @property
    def full_rank(self) -> bool:
        return self.rank == self.p

    @property
    def rank_deficient(self) -> bool:
        return not self.full_rank

    def y(self, r: int) -> np.ndarray:
        return self.Y[:, r]
