import logging
from typing import Iterable

import numpy as np
import scipy.linalg

from app.core.config import settings
from app.core.exceptions import DimensionMismatchError, NoTransitionsError
from app.models.counts import DesignMatrix, TransitionCounts
from app.models.trajectory import Trajectory
from app.utils.states import decode_states

logger = logging.getLogger(__name__)


def count_transitions(traj: Trajectory) -> TransitionCounts:
    """N_uv, N_u e N_{u,r,l} sobre k = 0..T-1"""
    if traj.T < 1:
        raise NoTransitionsError("no transitions: trajectory has T = 0")

    codes = traj.codes
    src, dst = codes[:-1], codes[1:]
    nxt_bits = traj.states[1:].astype(np.float64)

    states, inverse, visits = np.unique(src, return_inverse=True, return_counts=True)
    ones = np.zeros((states.size, traj.p))
    np.add.at(ones, inverse, nxt_bits)

    pairs, pair_count = np.unique(np.stack([src, dst], axis=1), axis=0, return_counts=True)

    return TransitionCounts(
        p=traj.p,
        T=float(traj.T),
        states=states,
        visits=visits.astype(np.float64),
        ones=ones,
        pair_from=pairs[:, 0].copy(),
        pair_to=pairs[:, 1].copy(),
        pair_count=pair_count.astype(np.float64),
    )


def merge_counts(parts: Iterable[TransitionCounts]) -> TransitionCounts:
    """Soma ponto a ponto de contagens parciais (trechos de trajetória)"""
    parts = list(parts)
    if not parts:
        raise NoTransitionsError("no transitions: nothing to merge")
    p = parts[0].p
    if any(part.p != p for part in parts):
        raise DimensionMismatchError("cannot merge counts with different p")

    all_states = np.concatenate([part.states for part in parts])
    states, inverse = np.unique(all_states, return_inverse=True)
    visits = np.zeros(states.size)
    ones = np.zeros((states.size, p))
    np.add.at(visits, inverse, np.concatenate([part.visits for part in parts]))
    np.add.at(ones, inverse, np.concatenate([part.ones for part in parts]))

    all_pairs = np.concatenate([np.stack([part.pair_from, part.pair_to], axis=1) for part in parts])
    pairs, pair_inverse = np.unique(all_pairs, axis=0, return_inverse=True)
    pair_count = np.zeros(pairs.shape[0])
    np.add.at(pair_count, pair_inverse.reshape(-1), np.concatenate([part.pair_count for part in parts]))

    return TransitionCounts(
        p=p,
        T=float(sum(part.T for part in parts)),
        states=states,
        visits=visits,
        ones=ones,
        pair_from=pairs[:, 0].copy(),
        pair_to=pairs[:, 1].copy(),
        pair_count=pair_count,
    )


def numerical_rank(U: np.ndarray, threshold: float | None = None) -> int:
    """Posto por QR com pivoteamento: |R_kk| > threshold·|R_00|"""
    threshold = settings.rank_threshold if threshold is None else threshold
    if U.size == 0:
        return 0
    R = scipy.linalg.qr(U, mode="r", pivoting=True)[0]
    diag = np.abs(np.diag(R))
    if diag.size == 0 or diag[0] == 0.0:
        return 0
    return int(np.count_nonzero(diag > threshold * diag[0]))


def build_design(counts: TransitionCounts) -> DesignMatrix:
    """U_m com linhas em ordem crescente de codificação e Y[:, r] = y_{m,r}"""
    if counts.m == 0:
        raise NoTransitionsError("no transitions: empty counts")
    U = decode_states(counts.states, counts.p).astype(np.float64)
    Y = counts.ones / counts.visits[:, None]
    rank = numerical_rank(U)
    if rank < counts.p:
        logger.warning(f"⚠️ U_m com posto deficiente: posto {rank} < p={counts.p} (m={counts.m})")
    return DesignMatrix(U=U, Y=Y, states=counts.states, rank=rank)
