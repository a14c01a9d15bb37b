from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Tuple

import numpy as np

from tss.errors import DatasetError
from tss.model.series import TimeSeries


@dataclass(frozen=True)
class LabeledDataset:
    """Shape-equal samples with parallel integer labels and an id -> name map."""

    samples: Tuple[TimeSeries, ...]
    labels: Tuple[int, ...]
    class_names: Dict[int, str] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "samples", tuple(self.samples))
        object.__setattr__(self, "labels", tuple(int(l) for l in self.labels))
        object.__setattr__(self, "class_names", dict(self.class_names))

        if not self.samples:
            raise DatasetError("dataset has no samples")
        if len(self.samples) != len(self.labels):
            raise DatasetError(f"{len(self.samples)} samples but {len(self.labels)} labels")
        shape = self.samples[0].shape
        for i, s in enumerate(self.samples):
            if s.shape != shape:
                raise DatasetError(f"sample {i} has shape {s.shape}, expected {shape}")
        for label in set(self.labels):
            if label not in self.class_names:
                raise DatasetError(f"label {label} has no class name")
        missing = sorted(set(self.class_names) - set(self.labels))
        if missing:
            raise DatasetError(f"declared classes without samples: {missing}")

    def __len__(self) -> int:
        return len(self.samples)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.samples[0].shape

    @property
    def class_ids(self) -> List[int]:
        return sorted(self.class_names)

    def of_class(self, label: int) -> List[TimeSeries]:
        return [s for s, l in zip(self.samples, self.labels) if l == label]

    def counts(self) -> Dict[int, int]:
        out = {c: 0 for c in self.class_ids}
        for l in self.labels:
            out[l] += 1
        return out

    def stacked(self) -> np.ndarray:
        """All samples as one (n, channels, length) array."""
        return np.stack([s.values for s in self.samples])
