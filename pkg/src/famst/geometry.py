"""Point storage and the Euclidean distance kernel shared by every phase.

Coordinates may be held in 32-bit floats to save memory, but distances are
always accumulated in 64-bit arithmetic, so a float32 and a float64 copy of
the same data produce identical weights up to the storage rounding itself.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

from .errors import UsageError

__all__ = ["PointSet"]


@njit(cache=True)
def _sqdist(data, u, v):
    """Squared Euclidean distance between rows u and v, float64 accumulation."""
    acc = 0.0
    for c in range(data.shape[1]):
        diff = np.float64(data[u, c]) - np.float64(data[v, c])
        acc += diff * diff
    return acc


class PointSet:
    """Immutable n x d matrix of coordinates.

    Parameters
    ----------
    data : array-like, shape (n, d)
        Row-major coordinates. float32 and float64 are stored as given;
        any other numeric dtype is converted to float64. The array is
        copied and frozen, so the point set cannot change after
        construction.

    Raises
    ------
    UsageError
        If the array is not two-dimensional, is empty in either axis, or
        contains NaN or infinite coordinates.
    """

    __slots__ = ("_data",)

    def __init__(self, data) -> None:
        arr = np.array(data, order="C", copy=True)
        if arr.ndim != 2:
            raise UsageError(f"points must be a 2-D array, got ndim={arr.ndim}")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise UsageError(f"points must be non-empty, got shape {arr.shape}")
        if arr.dtype not in (np.float32, np.float64):
            arr = arr.astype(np.float64)
        if not np.all(np.isfinite(arr)):
            bad = np.argwhere(~np.isfinite(arr))[0]
            raise UsageError(
                f"non-finite coordinate at row {bad[0]}, column {bad[1]}"
            )
        arr.setflags(write=False)
        self._data = arr

    @property
    def data(self) -> np.ndarray:
        """Read-only (n, d) coordinate matrix."""
        return self._data

    @property
    def n(self) -> int:
        return self._data.shape[0]

    @property
    def d(self) -> int:
        return self._data.shape[1]

    @property
    def dtype(self) -> np.dtype:
        return self._data.dtype

    def __len__(self) -> int:
        return self.n

    def __repr__(self) -> str:
        return f"PointSet(n={self.n}, d={self.d}, dtype={self._data.dtype})"

    def _check_ids(self, u: int, v: int) -> None:
        n = self.n
        if not (0 <= u < n and 0 <= v < n):
            raise UsageError(f"vertex ids ({u}, {v}) out of range for n={n}")

    def distance(self, u: int, v: int) -> float:
        """Euclidean distance between points u and v.

        Accumulated in float64 regardless of the storage precision.
        """
        self._check_ids(u, v)
        return math.sqrt(_sqdist(self._data, u, v))

    def distance_squared(self, u: int, v: int) -> float:
        """Squared Euclidean distance, for comparisons only.

        Monotone in :meth:`distance`; never sum these into tree weights.
        """
        self._check_ids(u, v)
        return float(_sqdist(self._data, u, v))
