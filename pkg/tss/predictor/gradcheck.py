"""Central finite-difference check of the denoiser's hand-written gradients."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import List, Sequence

import numpy as np

from tss.predictor.denoiser import DenoiserModel, Params, mse_loss

logger = logging.getLogger(__name__)

# below this magnitude gradients are compared absolutely
REL_ERR_FLOOR = 1e-5


def relative_error(analytic: np.ndarray, numeric: np.ndarray) -> np.ndarray:
    denom = np.maximum(np.maximum(np.abs(analytic), np.abs(numeric)), REL_ERR_FLOOR)
    return np.abs(analytic - numeric) / denom


def _loss(model: DenoiserModel, X: np.ndarray, ts: np.ndarray, target: np.ndarray) -> float:
    out, _ = model.forward(X, ts)
    return mse_loss(out, target)[0]


def analytic_gradients(model: DenoiserModel, X: np.ndarray, ts: np.ndarray, target: np.ndarray) -> Params:
    out, cache = model.forward(X, ts)
    _, d_out = mse_loss(out, target)
    return model.backward(cache, d_out)


def numeric_gradients(model: DenoiserModel, X: np.ndarray, ts: np.ndarray, target: np.ndarray,
                      step: float = 1e-5) -> Params:
    grads: Params = {}
    for name, param in model.params.items():
        g = np.zeros_like(param)
        flat, gflat = param.reshape(-1), g.reshape(-1)
        for i in range(flat.size):
            orig = flat[i]
            flat[i] = orig + step
            up = _loss(model, X, ts, target)
            flat[i] = orig - step
            down = _loss(model, X, ts, target)
            flat[i] = orig
            gflat[i] = (up - down) / (2.0 * step)
        grads[name] = g
    return grads


def gradient_check(model: DenoiserModel, X: np.ndarray, ts: np.ndarray, target: np.ndarray,
                   step: float = 1e-5) -> float:
    """Max relative error over every parameter entry."""
    analytic = analytic_gradients(model, X, ts, target)
    numeric = numeric_gradients(model, X, ts, target, step)
    return max(float(np.max(relative_error(analytic[n], numeric[n]))) for n in analytic)


@dataclass
class GradcheckReport:
    errors: List[float]
    parameter_counts: List[int]
    step: float

    @property
    def max_rel_err(self) -> float:
        return max(self.errors) if self.errors else 0.0


def run_gradcheck(models: int = 5, probes: int = 10, seed: int = 0, channels: int = 2, length: int = 4,
                  T: int = 10, hidden: Sequence[int] = (6, 5), step: float = 1e-5) -> GradcheckReport:
    """Random small models, each probed at `probes` random (x_t, t) pairs."""
    rng = np.random.default_rng(seed)
    errors, counts = [], []
    for m in range(models):
        model = DenoiserModel.create(channels, length, T, hidden, seed=int(rng.integers(2 ** 31)))
        # nonzero biases so every parameter gets a generic gradient
        for name in model.params:
            if name.startswith("b"):
                model.params[name] = 0.1 * rng.standard_normal(model.params[name].shape)
        worst = 0.0
        for _ in range(probes):
            X = rng.standard_normal((1, model.dim))
            ts = rng.integers(1, T + 1, size=1)
            target = rng.standard_normal((1, model.dim))
            worst = max(worst, gradient_check(model, X, ts, target, step))
        logger.debug("gradcheck model %d: %d params, max rel err %.3e", m, model.parameter_count, worst)
        errors.append(worst)
        counts.append(model.parameter_count)
    return GradcheckReport(errors=errors, parameter_counts=counts, step=step)
