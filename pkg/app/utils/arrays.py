from typing import Any, Optional, Tuple

import numpy as np

from app.core.exceptions import DimensionMismatchError


def clean_array(values: Any, name: str, shape: Optional[Tuple[int, ...]] = None,
                ndim: Optional[int] = None) -> np.ndarray:
    """Converte e valida um array numérico, devolvendo cópia somente-leitura"""

    # 1. Valor obrigatório
    if values is None:
        raise ValueError(f"{name} is required")

    # 2. Conversão para float
    try:
        arr = np.array(values, dtype=float)
    except (ValueError, TypeError):
        raise ValueError(f"{name}: invalid numeric values")

    # 3. Dimensões
    if ndim is not None and arr.ndim != ndim:
        raise DimensionMismatchError(f"{name}: expected {ndim}-d array, got shape {arr.shape}")
    if shape is not None and arr.shape != shape:
        raise DimensionMismatchError(f"{name}: expected shape {shape}, got {arr.shape}")

    # 4. NaN/Inf
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name}: NaN/Inf entries")

    arr.setflags(write=False)
    return arr
