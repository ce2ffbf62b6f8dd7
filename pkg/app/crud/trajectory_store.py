"""Arquivos de trajetória: texto (`p=<p> T=<T>` + uma linha de bits por passo)
e binário (cabeçalho de 16 bytes + um u64 little-endian por estado)."""

import logging
import struct
from pathlib import Path

import numpy as np

from app.core.exceptions import DimensionMismatchError
from app.models.trajectory import Trajectory
from app.utils.states import MAX_ENCODED_P, decode_states, encode_states

logger = logging.getLogger(__name__)

MAGIC = b"BAR1"
HEADER = struct.Struct("<4sIQ")
BINARY_SUFFIXES = {".bin", ".bar"}


def write_text(traj: Trajectory, path: str | Path) -> str:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    rows = (" ".join(map(str, row)) for row in traj.states.tolist())
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(f"p={traj.p} T={traj.T}\n")
        for row in rows:
            handle.write(row + "\n")
    return str(path)


def _parse_header(line: str) -> tuple[int, int]:
    try:
        fields = dict(item.split("=", 1) for item in line.split())
        return int(fields["p"]), int(fields["T"])
    except (KeyError, ValueError):
        raise ValueError(f"invalid trajectory header: {line.strip()!r}")


def read_text(path: str | Path) -> Trajectory:
    with open(path, "r", encoding="utf-8") as handle:
        p, T = _parse_header(handle.readline())
        rows = [line.split() for line in handle if line.strip()]
    if len(rows) != T + 1:
        raise DimensionMismatchError(f"header declares T={T} but file holds {len(rows)} states")
    if any(len(row) != p for row in rows):
        raise DimensionMismatchError(f"every state line must hold p={p} bits")
    return Trajectory(states=np.array([[int(bit) for bit in row] for row in rows], dtype=np.int64))


def write_binary(traj: Trajectory, path: str | Path) -> str:
    if traj.p > MAX_ENCODED_P:
        raise DimensionMismatchError(f"binary format supports p <= {MAX_ENCODED_P}")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "wb") as handle:
        handle.write(HEADER.pack(MAGIC, traj.p, traj.T))
        handle.write(encode_states(traj.states).astype("<u8").tobytes())
    return str(path)


def read_binary(path: str | Path) -> Trajectory:
    data = Path(path).read_bytes()
    if len(data) < HEADER.size:
        raise ValueError("binary trajectory shorter than its header")
    magic, p, T = HEADER.unpack_from(data)
    if magic != MAGIC:
        raise ValueError(f"bad magic {magic!r}, expected {MAGIC!r}")
    codes = np.frombuffer(data, dtype="<u8", offset=HEADER.size)
    if codes.size != T + 1:
        raise DimensionMismatchError(f"header declares T={T} but file holds {codes.size} states")
    return Trajectory(states=decode_states(codes.astype(np.uint64), p))


def is_binary(path: str | Path) -> bool:
    return Path(path).suffix.lower() in BINARY_SUFFIXES


def save_trajectory(traj: Trajectory, path: str | Path) -> str:
    written = write_binary(traj, path) if is_binary(path) else write_text(traj, path)
    logger.info(f"💾 Trajetória (p={traj.p}, T={traj.T}) salva em {written}")
    return written


def load_trajectory(path: str | Path) -> Trajectory:
    return read_binary(path) if is_binary(path) else read_text(path)
