"""Closed-form forward diffusion q(x_t | x_0)."""
from __future__ import annotations

import math

import numpy as np

from tss.model.series import TimeSeries, require_same_shape
from tss.schedule.noise import NoiseSchedule


def diffuse_array(x0: np.ndarray, t: int, eps: np.ndarray, schedule: NoiseSchedule) -> np.ndarray:
    """Array form of diffuse; broadcasts over leading batch axes."""
    ab = schedule.alpha_bar(t)
    return math.sqrt(ab) * x0 + math.sqrt(1.0 - ab) * eps


def diffuse(x0: TimeSeries, t: int, eps: TimeSeries, schedule: NoiseSchedule) -> TimeSeries:
    """sqrt(alpha_bar_t) * x0 + sqrt(1 - alpha_bar_t) * eps."""
    require_same_shape(x0, eps, "signal and noise")
    schedule.check_step(t)
    return TimeSeries(diffuse_array(x0.values, t, eps.values, schedule))
