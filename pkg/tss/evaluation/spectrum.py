"""Normalized periodograms and the Bhattacharyya PSD similarity score.

The score stands in for a learned time-series similarity metric: per
channel it is sum_f sqrt(p_f * q_f) over unit-sum power spectra, averaged
over channels. It lies in [0, 1], is 1 for identical spectra and 0 for
spectra with disjoint support.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from tss.errors import DatasetError, ShapeError
from tss.model.series import TimeSeries, require_same_shape


@dataclass(frozen=True, order=True)
class SimilarityScore:
    value: float

    def __post_init__(self):
        if not 0.0 <= self.value <= 1.0:
            raise ValueError(f"similarity score {self.value} outside [0, 1]")

    def __float__(self) -> float:
        return self.value


def spectrum_values(values: np.ndarray) -> np.ndarray:
    """Per-channel |rfft|^2, normalized to unit sum; all-zero channels map to the uniform spectrum."""
    values = np.asarray(values, dtype=np.float64)
    if values.ndim != 2 or values.shape[1] < 2:
        raise ShapeError(f"periodogram needs (channels, length >= 2), got {values.shape}")
    if not np.all(np.isfinite(values)):
        raise ShapeError("periodogram input contains non-finite values")
    power = np.abs(np.fft.rfft(values, axis=1)) ** 2
    totals = power.sum(axis=1, keepdims=True)
    flat = np.full_like(power, 1.0 / power.shape[1])
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.where(totals > 0, power / np.where(totals > 0, totals, 1.0), flat)


def periodogram(x: TimeSeries) -> np.ndarray:
    return spectrum_values(x.values)


def bhattacharyya(p: np.ndarray, q: np.ndarray) -> float:
    """Channel-mean Bhattacharyya coefficient of two (channels, bins) spectra."""
    per_channel = np.where(
        np.all(p == q, axis=1),
        1.0,
        np.sum(np.sqrt(p * q), axis=1),
    )
    return float(np.clip(np.mean(per_channel), 0.0, 1.0))


def psd_similarity(a: TimeSeries, b: TimeSeries) -> SimilarityScore:
    require_same_shape(a, b, "compared series")
    return SimilarityScore(bhattacharyya(periodogram(a), periodogram(b)))


class SpectralIndex:
    """Real reference set with precomputed spectra for repeated nearest-match queries."""

    def __init__(self, real_set: Sequence[TimeSeries]):
        if not real_set:
            raise DatasetError("reference set is empty")
        self.shape = real_set[0].shape
        for s in real_set:
            require_same_shape(real_set[0], s, "reference series")
        self.spectra: List[np.ndarray] = [periodogram(s) for s in real_set]

    def __len__(self) -> int:
        return len(self.spectra)

    def nearest(self, values: np.ndarray) -> Tuple[int, SimilarityScore]:
        if values.shape != self.shape:
            raise ShapeError(f"query shape {values.shape} does not match reference shape {self.shape}")
        p = spectrum_values(values)
        best, best_score = 0, -1.0
        for i, q in enumerate(self.spectra):
            score = bhattacharyya(p, q)
            # strict comparison keeps the lowest index on ties
            if score > best_score:
                best, best_score = i, score
        return best, SimilarityScore(best_score)


def nearest_real_match(gen: TimeSeries, real_set: Sequence[TimeSeries]) -> Tuple[int, SimilarityScore]:
    return SpectralIndex(real_set).nearest(gen.values)
