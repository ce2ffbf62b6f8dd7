from dataclasses import dataclass
from typing import Optional

import numpy as np


@dataclass(frozen=True)
class ExactChain:
    """Cadeia BAR completa: P (2^p x 2^p, linha-estocástica) e π estacionária.

    Para p acima do limite denso, `P` fica None e π vem só da iteração de
    potência sem matriz; `pi_direct` fica None nesse caso.
    """

    p: int
    P: Optional[np.ndarray]
    pi: np.ndarray
    theta: np.ndarray
    pi_direct: Optional[np.ndarray] = None
    power_iterations: int = 0

    @property
    def n_states(self) -> int:
        return 2 ** self.p

    @property
    def dense(self) -> bool:
        return self.P is not None


@dataclass(frozen=True)
class EmpiricalRow:
    """Q_u = N_uv/N_u, com Q_u = 2^{-p}·1 quando N_u = 0"""

    u: int
    Q: np.ndarray
    visited: bool
