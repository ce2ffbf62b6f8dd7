"""Codificação inteira dos estados: o bit i é o dígito 2^i."""

import numpy as np

MAX_ENCODED_P = 64


def bit_weights(p: int) -> np.ndarray:
    if p > MAX_ENCODED_P:
        raise ValueError(f"integer encoding supports p <= {MAX_ENCODED_P}, got {p}")
    return np.left_shift(np.uint64(1), np.arange(p, dtype=np.uint64))


def encode_states(bits: np.ndarray) -> np.ndarray:
    """(n, p) de 0/1 -> (n,) uint64"""
    bits = np.asarray(bits)
    weights = bit_weights(bits.shape[-1])
    return (bits.astype(np.uint64) * weights).sum(axis=-1, dtype=np.uint64)


def decode_states(codes: np.ndarray, p: int) -> np.ndarray:
    """(n,) inteiros -> (n, p) uint8"""
    codes = np.asarray(codes, dtype=np.uint64)
    shifts = np.arange(p, dtype=np.uint64)
    return ((codes[:, None] >> shifts) & np.uint64(1)).astype(np.uint8)


def all_states(p: int) -> np.ndarray:
    """Os 2^p estados em ordem crescente de codificação, (2^p, p)"""
    return decode_states(np.arange(2 ** p, dtype=np.uint64), p)
