"""Synthetic datasets: Gaussian (oracle-verifiable), multiclass cyclic, imbalanced two- or three-class."""
from __future__ import annotations

import logging
from typing import Dict, List, Optional, Sequence

import numpy as np

from tss.errors import DatasetError
from tss.model.dataset import LabeledDataset
from tss.model.series import TimeSeries
from tss.predictor.oracle import GaussianDataSpec

logger = logging.getLogger(__name__)

CYCLIC_NAMES = ("walking", "running", "cycling", "stairs", "jumping", "rowing", "skipping", "swimming")
IMBALANCED_NAMES = ("fall", "ascent", "descent")


def gen_gaussian(spec: GaussianDataSpec, n: int, seed: int, name: str = "gaussian") -> LabeledDataset:
    """n i.i.d. draws mu + L z with L the Cholesky factor of the covariance."""
    if n < 1:
        raise DatasetError(f"need at least one sample, got n={n}")
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((n, spec.dim))
    draws = spec.mu.reshape(1, -1) + z @ spec.chol.T
    samples = [TimeSeries.from_flat(row, spec.shape) for row in draws]
    return LabeledDataset(samples=samples, labels=[0] * n, class_names={0: name})


def class_frequencies(class_index: int, channel: int, n_classes: int) -> List[int]:
    """FFT bins of the two sinusoids of (class, channel): a fundamental and its second harmonic."""
    fundamental = 1 + class_index + channel * n_classes
    return [fundamental, 2 * fundamental]


def class_template(class_index: int, n_classes: int, channels: int, length: int,
                   phase_offset: float = 0.0) -> np.ndarray:
    t = np.arange(length, dtype=np.float64)
    out = np.zeros((channels, length))
    for ch in range(channels):
        f1, f2 = class_frequencies(class_index, ch, n_classes)
        phase = 2.0 * np.pi * (class_index + 1) * (ch + 1) / 7.0 + phase_offset
        out[ch] = (np.sin(2.0 * np.pi * f1 * t / length + phase)
                   + 0.5 * np.sin(2.0 * np.pi * f2 * t / length + 2.0 * phase))
    return out


def _check_dims(n_classes: int, channels: int, length: int) -> None:
    if n_classes < 1 or channels < 1 or length < 2:
        raise DatasetError(f"degenerate dimensions n_classes={n_classes} channels={channels} length={length}")
    top = max(class_frequencies(n_classes - 1, channels - 1, n_classes))
    if top >= length // 2:
        raise DatasetError(
            f"length {length} too short: {n_classes} classes x {channels} channels need frequency bin {top} "
            f"below the Nyquist bin {length // 2}"
        )


def _cyclic_samples(class_counts: Sequence[int], n_classes: int, channels: int, length: int,
                    noise_level: float, phase_jitter: float, rng: np.random.Generator,
                    class_offset: int = 0) -> List[TimeSeries]:
    samples = []
    for c, count in enumerate(class_counts):
        for _ in range(count):
            offset = rng.uniform(-phase_jitter, phase_jitter) if phase_jitter > 0 else 0.0
            clean = class_template(c + class_offset, n_classes, channels, length, offset)
            samples.append(TimeSeries(clean + noise_level * rng.standard_normal(clean.shape)))
    return samples


def _names(n: int, pool: Sequence[str]) -> Dict[int, str]:
    return {i: (pool[i] if i < len(pool) else f"class{i}") for i in range(n)}


def gen_cyclic_classes(n_classes: int, channels: int, length: int, per_class: int, noise_level: float,
                       seed: int, phase_jitter: float = 0.0,
                       class_names: Optional[Sequence[str]] = None) -> LabeledDataset:
    """Each class is a fixed two-sinusoid mixture per channel at class-specific bins, plus white noise."""
    if n_classes < 2:
        raise DatasetError(f"need at least 2 classes, got {n_classes}")
    if per_class < 1:
        raise DatasetError(f"per_class must be >= 1, got {per_class}")
    if noise_level < 0 or phase_jitter < 0:
        raise DatasetError("noise_level and phase_jitter must be >= 0")
    _check_dims(n_classes, channels, length)
    rng = np.random.default_rng(seed)
    samples = _cyclic_samples([per_class] * n_classes, n_classes, channels, length, noise_level, phase_jitter, rng)
    labels = [c for c in range(n_classes) for _ in range(per_class)]
    names = _names(n_classes, class_names or CYCLIC_NAMES)
    logger.debug("generated %d cyclic samples over %d classes", len(samples), n_classes)
    return LabeledDataset(samples=samples, labels=labels, class_names=names)


def imbalanced_counts(minority_fraction: float, total: int, n_classes: int = 2) -> List[int]:
    """Class 0 gets round(fraction * total); the rest is split evenly, earlier classes taking the remainder."""
    if n_classes not in (2, 3):
        raise DatasetError(f"imbalanced sets have 2 or 3 classes, got {n_classes}")
    if not 0.0 < minority_fraction < 1.0 / n_classes:
        raise DatasetError(f"minority_fraction must lie in (0, 1/{n_classes}), got {minority_fraction}")
    minority = int(np.floor(minority_fraction * total + 0.5))
    rest, majors = total - minority, n_classes - 1
    counts = [minority] + [rest // majors + (1 if i < rest % majors else 0) for i in range(majors)]
    if min(counts) < 1:
        raise DatasetError(f"total={total} too small for minority_fraction={minority_fraction}")
    return counts


def gen_imbalanced(minority_fraction: float, total: int, channels: int, length: int, noise_level: float,
                   seed: int, phase_jitter: float = 0.0, n_classes: int = 2) -> LabeledDataset:
    """Cyclic classes: class 0 ("fall") is the minority, "ascent" and "descent" share the rest."""
    counts = imbalanced_counts(minority_fraction, total, n_classes)
    _check_dims(n_classes, channels, length)
    if noise_level < 0 or phase_jitter < 0:
        raise DatasetError("noise_level and phase_jitter must be >= 0")
    rng = np.random.default_rng(seed)
    samples = _cyclic_samples(counts, n_classes, channels, length, noise_level, phase_jitter, rng)
    labels = [c for c, count in enumerate(counts) for _ in range(count)]
    logger.debug("generated imbalanced set with class counts %s", counts)
    return LabeledDataset(samples=samples, labels=labels, class_names=_names(n_classes, IMBALANCED_NAMES))
