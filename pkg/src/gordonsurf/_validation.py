"""Input validation helpers shared across the kernel.

All helpers convert to float64 numpy arrays and raise ValueError with a
message naming the offending argument, so callers can pass user input
through unchecked.
"""

from __future__ import annotations

import numpy as np


def as_point_array(points, name: str = "points", dim: int | None = None) -> np.ndarray:
    """Coerce to a read-only (n, dim) float array of points."""
    arr = np.array(points, dtype=float, copy=True)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be a 2-D array of points, got ndim={arr.ndim}")
    if dim is not None and arr.shape[1] != dim:
        raise ValueError(f"{name} must have {dim} coordinates per point, got {arr.shape[1]}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")
    arr.setflags(write=False)
    return arr


def as_vector(v, name: str = "vector", dim: int = 3) -> np.ndarray:
    arr = np.asarray(v, dtype=float).reshape(-1)
    if arr.size != dim:
        raise ValueError(f"{name} must have {dim} components, got {arr.size}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")
    return arr


def as_param_list(params, name: str = "params") -> np.ndarray:
    """Coerce to a strictly increasing 1-D float array."""
    arr = np.asarray(params, dtype=float).reshape(-1)
    if arr.size < 2:
        raise ValueError(f"{name} needs at least two entries")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")
    if np.any(np.diff(arr) <= 0.0):
        raise ValueError(f"{name} must be strictly increasing")
    return arr


def check_in_interval(value: float, lo: float, hi: float, name: str, tol: float = 0.0):
    if value < lo - tol or value > hi + tol:
        raise ValueError(f"{name}={value} outside [{lo}, {hi}]")


def collapse_duplicate_points(points: np.ndarray, tol: float = 0.0) -> np.ndarray:
    """Drop consecutive coincident points (distance <= tol)."""
    keep = [0]
    for i in range(1, len(points)):
        if np.linalg.norm(points[i] - points[keep[-1]]) > tol:
            keep.append(i)
    return points[keep]
