"""Exportações CSV: contagens `u,v,count`, P (`state_u,state_v,prob`) e π (`state,pi`)."""

from pathlib import Path

import numpy as np
import pandas as pd

from app.models.chain import ExactChain
from app.models.counts import TransitionCounts


def counts_frame(counts: TransitionCounts) -> pd.DataFrame:
    return pd.DataFrame({
        "u": counts.pair_from.astype(np.uint64),
        "v": counts.pair_to.astype(np.uint64),
        "count": counts.pair_count,
    })


def write_counts_csv(counts: TransitionCounts, path: str | Path) -> str:
    frame = counts_frame(counts)
    if np.all(np.mod(counts.pair_count, 1.0) == 0.0):
        frame["count"] = frame["count"].astype(np.int64)
    frame.to_csv(path, index=False)
    return str(path)


def write_transition_csv(chain: ExactChain, path: str | Path) -> str:
    n = chain.n_states
    frame = pd.DataFrame({
        "state_u": np.repeat(np.arange(n), n),
        "state_v": np.tile(np.arange(n), n),
        "prob": chain.P.reshape(-1),
    })
    frame.to_csv(path, index=False, float_format="%.17g")
    return str(path)


def write_stationary_csv(chain: ExactChain, path: str | Path) -> str:
    frame = pd.DataFrame({"state": np.arange(chain.n_states), "pi": chain.pi})
    frame.to_csv(path, index=False, float_format="%.17g")
    return str(path)
