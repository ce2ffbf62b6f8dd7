from typing import Dict, Tuple

import numpy as np
import pytest

from app.models.counts import TransitionCounts
from app.models.params import BarParams, GenericBarParams, GraphSpec, SpaceConfig
from app.models.trajectory import Trajectory
from app.services.simulation_service import generate_graph


def make_counts(p: int, pairs: Dict[Tuple[int, int], float]) -> TransitionCounts:
    """Contagens a partir de N_uv (códigos inteiros), com N_u e N_{u,r,1} derivados"""
    states = np.array(sorted({u for u, _ in pairs}), dtype=np.uint64)
    index = {int(u): k for k, u in enumerate(states)}
    visits = np.zeros(states.size)
    ones = np.zeros((states.size, p))
    for (u, v), n in pairs.items():
        visits[index[u]] += n
        ones[index[u]] += n * ((v >> np.arange(p)) & 1)
    keys = sorted(pairs)
    return TransitionCounts(
        p=p,
        T=float(sum(pairs.values())),
        states=states,
        visits=visits,
        ones=ones,
        pair_from=np.array([u for u, _ in keys], dtype=np.uint64),
        pair_to=np.array([v for _, v in keys], dtype=np.uint64),
        pair_count=np.array([pairs[k] for k in keys], dtype=float),
    )


def p1_example_pairs() -> Dict[Tuple[int, int], float]:
    # N_0 = 60 (15 para 1), N_1 = 40 (25 para 1)
    return {(0, 0): 45, (0, 1): 15, (1, 0): 15, (1, 1): 25}


def p1_example_states() -> list:
    """Trajetória com exatamente as contagens de `p1_example_pairs`"""
    states = [0] * 46 + [1] * 26 + [0]
    for _ in range(14):
        states += [1, 0]
    return states


@pytest.fixture
def config2() -> SpaceConfig:
    return SpaceConfig(p=2, b_min=0.2, rho_min=0.2, rho_max=0.8)


@pytest.fixture
def positive2() -> BarParams:
    return BarParams(A=[[0.5, 0.0], [0.25, 0.25]], b=[0.5, 0.5], rho_w=[0.5, 0.4])


@pytest.fixture
def generic2() -> GenericBarParams:
    return GenericBarParams(
        A=[[0.5, 0.0], [0.0, 0.0]],
        A_tilde=[[0.0, 0.2], [0.0, 0.3]],
        b=[0.3, 0.7],
        rho_w=[0.5, 0.5],
    )


@pytest.fixture
def hand_trajectory() -> Trajectory:
    # 00, 10, 00, 01, 00, 00 com o nó 0 à esquerda
    return Trajectory(states=[[0, 0], [1, 0], [0, 0], [0, 1], [0, 0], [0, 0]])


@pytest.fixture
def p1_counts() -> TransitionCounts:
    return make_counts(1, p1_example_pairs())


@pytest.fixture
def mild3() -> BarParams:
    """p=3 com probabilidades perto de 1/2 (mistura rápida)"""
    A = np.array([[0.1, 0.1, 0.0], [0.0, 0.15, 0.05], [0.1, 0.0, 0.1]])
    b = 1.0 - A.sum(axis=1)
    return BarParams(A=A, b=b, rho_w=[0.45, 0.5, 0.55])


def random_params(p: int, seed: int, signed: bool = False, d_max: int = 2, a_min: float = 0.1):
    config = SpaceConfig.default(p)
    spec = GraphSpec(p=p, d_max=min(d_max, p), a_min=a_min, signed=signed)
    return generate_graph(spec, config, seed), config
