"""Linear variance schedules and the derived alpha / alpha-bar tables."""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from tss.errors import ScheduleError, StepRangeError

logger = logging.getLogger(__name__)

DEFAULT_BETA_START = 1e-4
DEFAULT_BETA_END = 0.02


def linear_betas(T: int, beta_start: float = DEFAULT_BETA_START, beta_end: float = DEFAULT_BETA_END) -> np.ndarray:
    """Affine interpolation from beta_start to beta_end inclusive, T entries."""
    if int(T) != T or T < 1:
        raise ScheduleError(f"T must be a positive integer, got {T}")
    if not (0.0 < beta_start < 1.0 and 0.0 < beta_end < 1.0):
        raise ScheduleError(f"beta bounds must lie in (0, 1), got ({beta_start}, {beta_end})")
    if beta_start > beta_end:
        raise ScheduleError(f"beta_start {beta_start} exceeds beta_end {beta_end}")
    if T == 1:
        return np.array([beta_start], dtype=np.float64)
    return np.linspace(beta_start, beta_end, int(T), dtype=np.float64)


@dataclass(frozen=True)
class NoiseSchedule:
    """beta/alpha/alpha-bar tables over steps 1..T (arrays are 0-based, index t-1)."""

    T: int
    beta_start: float
    beta_end: float
    betas: np.ndarray
    alphas: np.ndarray
    alpha_bars: np.ndarray

    def __post_init__(self):
        for name in ("betas", "alphas", "alpha_bars"):
            arr = getattr(self, name)
            if arr.shape != (self.T,):
                raise ScheduleError(f"{name} has shape {arr.shape}, expected ({self.T},)")
            arr.setflags(write=False)
        if not (np.all(self.betas > 0) and np.all(self.betas < 1)):
            raise ScheduleError("betas must lie strictly inside (0, 1)")
        underflow = (self.alpha_bars >= 0) & (self.alpha_bars < np.finfo(np.float64).tiny)
        if np.any(underflow):
            first = int(np.argmax(underflow)) + 1
            raise ScheduleError(f"alpha_bar underflows to {self.alpha_bars[first - 1]:g} at step {first}; lower beta_end or T")
        if not (np.all(self.alpha_bars > 0) and np.all(self.alpha_bars < 1)):
            raise ScheduleError("alpha_bars must lie strictly inside (0, 1)")
        if np.any(np.diff(self.alpha_bars) >= 0):
            raise ScheduleError("alpha_bars must be strictly decreasing")

    def check_step(self, t: int) -> None:
        if int(t) != t or not 1 <= t <= self.T:
            raise StepRangeError(f"step {t} outside 1..{self.T}")

    def alpha_bar(self, t: int) -> float:
        """alpha-bar at step t, with the convention alpha_bar(0) = 1."""
        if t == 0:
            return 1.0
        self.check_step(t)
        return float(self.alpha_bars[t - 1])

    def beta(self, t: int) -> float:
        self.check_step(t)
        return float(self.betas[t - 1])

    def alpha(self, t: int) -> float:
        self.check_step(t)
        return float(self.alphas[t - 1])


def build_schedule(T: int, beta_start: float = DEFAULT_BETA_START, beta_end: float = DEFAULT_BETA_END) -> NoiseSchedule:
    betas = linear_betas(T, beta_start, beta_end)
    alphas = 1.0 - betas
    alpha_bars = np.cumprod(alphas)
    logger.debug("built schedule T=%d beta=[%g, %g] alpha_bar_T=%g", T, beta_start, beta_end, alpha_bars[-1])
    return NoiseSchedule(
        T=int(T),
        beta_start=float(beta_start),
        beta_end=float(beta_end),
        betas=betas,
        alphas=alphas,
        alpha_bars=alpha_bars,
    )
