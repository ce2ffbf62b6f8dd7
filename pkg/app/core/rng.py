"""Fluxos aleatórios reprodutíveis.

Todo sorteio do toolkit passa por aqui: um gerador Philox (baseado em
contador, 64 bits) por par (seed, propósito), derivado via SeedSequence.
Mesma seed, mesmos bytes, em qualquer plataforma.
"""

import hashlib
from typing import Tuple

import numpy as np


def _purpose_word(purpose: str) -> int:
    digest = hashlib.sha256(purpose.encode("utf-8")).digest()
    return int.from_bytes(digest[:4], "little")


class RandomStreams:
    """Fábrica de sub-fluxos independentes a partir de uma seed mestre"""

    def __init__(self, seed: int):
        if seed < 0:
            raise ValueError(f"seed must be non-negative, got {seed}")
        self._seed = int(seed)

    @property
    def seed(self) -> int:
        return self._seed

    def _sequence(self, purpose: str, indices: Tuple[int, ...]) -> np.random.SeedSequence:
        key = (_purpose_word(purpose),) + tuple(int(i) for i in indices)
        return np.random.SeedSequence(entropy=self._seed, spawn_key=key)

    def generator(self, purpose: str, *indices: int) -> np.random.Generator:
        return np.random.Generator(np.random.Philox(self._sequence(purpose, indices)))

    def child_seed(self, purpose: str, *indices: int) -> int:
        """Seed derivada (63 bits) para repassar a outro processo"""
        state = self._sequence(purpose, indices).generate_state(1, dtype=np.uint64)[0]
        return int(state >> np.uint64(1))


def make_rng(seed: int, purpose: str, *indices: int) -> np.random.Generator:
    return RandomStreams(seed).generator(purpose, *indices)
