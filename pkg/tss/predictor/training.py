"""Noise-prediction training: MSE between eps and model(diffuse(x0, t, eps), t), t ~ U{1..T}."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Union

import numpy as np
from tqdm import tqdm

from tss.errors import DatasetError, PredictorError, TrainingDivergedError
from tss.model.dataset import LabeledDataset
from tss.model.series import TimeSeries
from tss.predictor.denoiser import DenoiserModel, mse_loss
from tss.schedule.noise import NoiseSchedule

logger = logging.getLogger(__name__)


@dataclass
class TrainingLog:
    losses: List[float] = field(default_factory=list)
    label: Optional[str] = None

    def __len__(self) -> int:
        return len(self.losses)

    def window_mean(self, start: int, stop: int) -> float:
        return float(np.mean(self.losses[start:stop]))


def _as_array(dataset: Union[LabeledDataset, Sequence[TimeSeries]]) -> np.ndarray:
    samples = dataset.samples if isinstance(dataset, LabeledDataset) else list(dataset)
    if not samples:
        raise DatasetError("training set is empty")
    return np.stack([s.flat() for s in samples])


def train(
    model: DenoiserModel,
    dataset: Union[LabeledDataset, Sequence[TimeSeries]],
    schedule: NoiseSchedule,
    steps: int,
    learning_rate: float,
    seed: int,
    batch_size: int = 16,
    log_every: int = 0,
    progress: bool = False,
    label: Optional[str] = None,
) -> TrainingLog:
    """Plain SGD at a fixed learning rate; returns the pre-update loss of every step."""
    if steps < 0:
        raise ValueError(f"steps must be >= 0, got {steps}")
    if batch_size < 1:
        raise ValueError(f"batch_size must be >= 1, got {batch_size}")
    if schedule.T != model.T:
        raise PredictorError(f"model built for T={model.T}, schedule has T={schedule.T}")
    data = _as_array(dataset)
    if data.shape[1] != model.dim:
        raise DatasetError(f"samples have {data.shape[1]} values, model expects {model.dim}")

    rng = np.random.default_rng(seed)
    sqrt_ab = np.sqrt(schedule.alpha_bars)
    sqrt_1m_ab = np.sqrt(1.0 - schedule.alpha_bars)
    log = TrainingLog(label=label)

    steps_iter = tqdm(range(steps), desc=label or "train", disable=not progress, leave=False)
    for step in steps_iter:
        idx = rng.integers(0, data.shape[0], size=batch_size)
        ts = rng.integers(1, schedule.T + 1, size=batch_size)
        eps = rng.standard_normal((batch_size, model.dim))
        x_t = sqrt_ab[ts - 1, np.newaxis] * data[idx] + sqrt_1m_ab[ts - 1, np.newaxis] * eps

        out, cache = model.forward(x_t, ts)
        loss, d_out = mse_loss(out, eps)
        if not np.isfinite(loss):
            raise TrainingDivergedError(
                f"loss became non-finite ({loss}); last finite loss "
                f"{log.losses[-1] if log.losses else 'n/a'}, learning rate {learning_rate}",
                step=step,
            )
        log.losses.append(loss)
        model.apply_gradients(model.backward(cache, d_out), learning_rate)

        if log_every and (step + 1) % log_every == 0:
            recent = log.window_mean(max(0, step + 1 - log_every), step + 1)
            logger.info("%s step %d/%d mean loss %.5f", label or "train", step + 1, steps, recent)
    return log
