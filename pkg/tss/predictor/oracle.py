"""Gaussian data model and its exact MMSE epsilon-predictor.

For x0 ~ N(mu, C) and x_t = sqrt(ab) x0 + sqrt(1-ab) eps, joint-Gaussian
conditioning gives

    E[x0 | x_t] = mu + sqrt(ab) C (ab C + (1-ab) I)^-1 (x_t - sqrt(ab) mu)

and the oracle noise estimate (x_t - sqrt(ab) E[x0 | x_t]) / sqrt(1-ab).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, Optional

import numpy as np
import scipy.linalg

from tss.errors import CovarianceError, PredictorError, ShapeError
from tss.model.series import TimeSeries
from tss.predictor.base import EpsilonPredictor
from tss.schedule.noise import NoiseSchedule


@dataclass(frozen=True)
class GaussianDataSpec:
    mu: np.ndarray
    cov: np.ndarray
    chol: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        mu = np.array(self.mu, dtype=np.float64)
        if mu.ndim == 1:
            mu = mu[np.newaxis, :]
        cov = np.array(self.cov, dtype=np.float64)
        dim = mu.size
        if cov.shape != (dim, dim):
            raise ShapeError(f"covariance must be {dim}x{dim} for mean of shape {mu.shape}, got {cov.shape}")
        if not np.allclose(cov, cov.T, rtol=0, atol=1e-12):
            raise CovarianceError("covariance is not symmetric")
        try:
            chol = scipy.linalg.cholesky(cov, lower=True)
        except np.linalg.LinAlgError as e:
            raise CovarianceError(f"covariance is not positive definite: {e}") from e
        for arr in (mu, cov, chol):
            arr.setflags(write=False)
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "cov", cov)
        object.__setattr__(self, "chol", chol)

    @property
    def shape(self):
        return self.mu.shape

    @property
    def dim(self) -> int:
        return self.mu.size

    @classmethod
    def identity(cls, channels: int, length: int) -> "GaussianDataSpec":
        return cls(mu=np.zeros((channels, length)), cov=np.eye(channels * length))

    @classmethod
    def ar1(cls, channels: int, length: int, rho: float = 0.9, scale: float = 1.0,
            mu: Optional[np.ndarray] = None) -> "GaussianDataSpec":
        """Independent stationary AR(1) channels: cov[i, j] = scale^2 * rho^|i-j| within a channel."""
        if not -1.0 < rho < 1.0:
            raise CovarianceError(f"AR(1) coefficient must lie in (-1, 1), got {rho}")
        if scale <= 0:
            raise CovarianceError(f"AR(1) scale must be positive, got {scale}")
        block = scale ** 2 * scipy.linalg.toeplitz(rho ** np.arange(length))
        cov = scipy.linalg.block_diag(*([block] * channels))
        if mu is None:
            mu = np.zeros((channels, length))
        return cls(mu=np.asarray(mu, dtype=np.float64).reshape(channels, length), cov=cov)


def oracle_predict(x_t: TimeSeries, t: int, schedule: NoiseSchedule, spec: GaussianDataSpec) -> TimeSeries:
    """Exact noise estimate by a dense solve of the conditioning system."""
    if x_t.shape != spec.shape:
        raise ShapeError(f"state shape {x_t.shape} does not match data spec {spec.shape}")
    ab = schedule.alpha_bar(t)
    x = x_t.flat()
    mu = spec.mu.reshape(-1)
    system = ab * spec.cov + (1.0 - ab) * np.eye(spec.dim)
    innovation = scipy.linalg.solve(system, x - math.sqrt(ab) * mu, assume_a="pos")
    if not np.all(np.isfinite(innovation)):
        raise PredictorError("singular conditioning system", step=t)
    x0_mean = mu + math.sqrt(ab) * spec.cov @ innovation
    eps = (x - math.sqrt(ab) * x0_mean) / math.sqrt(1.0 - ab)
    return TimeSeries.from_flat(eps, x_t.shape)


class GaussianOracle(EpsilonPredictor):
    """Oracle predictor with per-step gain matrices cached from one eigendecomposition of C."""

    def __init__(self, spec: GaussianDataSpec):
        self.spec = spec
        self.shape = spec.shape
        self._eigvals, self._eigvecs = scipy.linalg.eigh(spec.cov)
        self._gains: Dict[float, np.ndarray] = {}

    def _gain(self, ab: float, t: int) -> np.ndarray:
        gain = self._gains.get(ab)
        if gain is None:
            denom = ab * self._eigvals + (1.0 - ab)
            if np.any(denom <= 0):
                raise PredictorError("singular conditioning system", step=t)
            scaled = math.sqrt(ab) * self._eigvals / denom
            gain = (self._eigvecs * scaled) @ self._eigvecs.T
            self._gains[ab] = gain
        return gain

    def _predict(self, values, t, schedule):
        ab = schedule.alpha_bar(t)
        x = values.reshape(-1)
        mu = self.spec.mu.reshape(-1)
        x0_mean = mu + self._gain(ab, t) @ (x - math.sqrt(ab) * mu)
        eps = (x - math.sqrt(ab) * x0_mean) / math.sqrt(1.0 - ab)
        return eps.reshape(values.shape)

    def expected_mse(self, schedule: NoiseSchedule, t: Optional[int] = None) -> float:
        """Per-coordinate expected squared noise error; averaged over uniform t when t is None."""
        steps = range(1, schedule.T + 1) if t is None else [t]
        total = 0.0
        for s in steps:
            ab = schedule.alpha_bar(s)
            total += float(np.mean(ab * self._eigvals / (ab * self._eigvals + 1.0 - ab)))
        return total / len(steps)
