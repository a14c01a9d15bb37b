from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from tss.errors import ShapeError


@dataclass(frozen=True)
class TimeSeries:
    """Fixed-shape multichannel sequence, stored as a read-only (channels, length) float64 array."""

    values: np.ndarray

    def __post_init__(self):
        arr = np.array(self.values, dtype=np.float64, copy=True)
        if arr.ndim == 1:
            arr = arr[np.newaxis, :]
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ShapeError(f"time series needs a non-empty (channels, length) array, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ShapeError("time series contains non-finite values")
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    @property
    def channels(self) -> int:
        return self.values.shape[0]

    @property
    def length(self) -> int:
        return self.values.shape[1]

    @property
    def shape(self) -> Tuple[int, int]:
        return self.values.shape

    @property
    def size(self) -> int:
        return self.values.size

    def flat(self) -> np.ndarray:
        return self.values.reshape(-1)

    @classmethod
    def zeros(cls, channels: int, length: int) -> "TimeSeries":
        return cls(np.zeros((channels, length)))

    @classmethod
    def from_flat(cls, flat: np.ndarray, shape: Tuple[int, int]) -> "TimeSeries":
        return cls(np.asarray(flat, dtype=np.float64).reshape(shape))

    def __eq__(self, other) -> bool:
        if not isinstance(other, TimeSeries):
            return NotImplemented
        return self.shape == other.shape and np.array_equal(self.values, other.values)

    def __hash__(self) -> int:
        return hash((self.shape, self.values.tobytes()))


def require_same_shape(a: TimeSeries, b: TimeSeries, what: str = "inputs") -> None:
    if a.shape != b.shape:
        raise ShapeError(f"{what} differ in shape: {a.shape} vs {b.shape}")
