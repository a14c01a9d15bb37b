"""The epsilon-predictor contract and the ground-truth test double."""
from __future__ import annotations

from abc import ABC, abstractmethod
from typing import Optional, Tuple

import numpy as np

from tss.errors import PredictorError, ShapeError
from tss.model.series import TimeSeries
from tss.schedule.noise import NoiseSchedule


class EpsilonPredictor(ABC):
    """Maps a noisy state x_t at step t to an estimate of its noise component.

    Subclasses implement `_predict` on raw (channels, length) arrays; the
    public entry points check shape and finiteness around it.
    """

    #: expected (channels, length), or None when any shape is accepted
    shape: Optional[Tuple[int, int]] = None

    def predict(self, x_t: TimeSeries, t: int, schedule: NoiseSchedule) -> TimeSeries:
        return TimeSeries(self.predict_values(x_t.values, t, schedule))

    def predict_values(self, values: np.ndarray, t: int, schedule: NoiseSchedule) -> np.ndarray:
        schedule.check_step(t)
        if self.shape is not None and values.shape != tuple(self.shape):
            raise ShapeError(f"predictor expects shape {self.shape}, got {values.shape}")
        out = self._predict(values, t, schedule)
        if out.shape != values.shape:
            raise PredictorError(f"predictor returned shape {out.shape} for input {values.shape}", step=t)
        if not np.all(np.isfinite(out)):
            raise PredictorError("predictor returned non-finite values", step=t)
        return out

    @abstractmethod
    def _predict(self, values: np.ndarray, t: int, schedule: NoiseSchedule) -> np.ndarray:
        ...


def ground_truth_predict(stored_eps: TimeSeries) -> TimeSeries:
    return stored_eps


class GroundTruthPredictor(EpsilonPredictor):
    """Returns the stored noise regardless of state and step."""

    def __init__(self, stored_eps: TimeSeries):
        if stored_eps is None:
            raise PredictorError("ground-truth predictor needs a stored noise sample")
        self.stored_eps = stored_eps
        self.shape = stored_eps.shape

    def _predict(self, values, t, schedule):
        return ground_truth_predict(self.stored_eps).values.copy()
