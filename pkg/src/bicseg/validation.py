"""Input validation helpers used at the public entry points."""

from __future__ import annotations

import numpy as np

from .errors import InvalidInput


def as_matrix(data, name: str = "series") -> np.ndarray:
    """Coerce array-like (or anything with a ``.values`` matrix) to T x d float64.

    1-D input becomes a single-column matrix.  Raises InvalidInput on empty or
    non-finite data.
    """
    values = getattr(data, "values", data)
    try:
        arr = np.asarray(values, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise InvalidInput(f"{name} is not numeric: {exc}") from exc
    if arr.ndim == 1:
        arr = arr[:, None]
    if arr.ndim != 2:
        raise InvalidInput(f"{name} must be 1- or 2-dimensional, got ndim={arr.ndim}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise InvalidInput(f"{name} must have at least one row and one column")
    if not np.all(np.isfinite(arr)):
        raise InvalidInput(f"{name} contains non-finite values")
    return np.ascontiguousarray(arr)


def check_positive_int(value, name: str, minimum: int = 1) -> int:
    if not isinstance(value, (int, np.integer)) or isinstance(value, bool):
        raise InvalidInput(f"{name} must be an integer, got {value!r}")
    if value < minimum:
        raise InvalidInput(f"{name} must be >= {minimum}, got {value}")
    return int(value)


def check_nonnegative(value, name: str) -> float:
    value = float(value)
    if not np.isfinite(value) or value < 0:
        raise InvalidInput(f"{name} must be a finite value >= 0, got {value}")
    return value
