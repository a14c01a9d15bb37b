"""Time-conditioned MLP denoiser with hand-written reverse-mode gradients.

Layout: the (channels, length) state is flattened to D values and passed
through affine layers of widths D -> hidden... -> D, with tanh between
them. A learned per-step embedding row E[t-1] is added to the first
layer's pre-activation, which is how the network sees the step index.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from tss.errors import PredictorError, ShapeError, StaleCacheError
from tss.model.series import TimeSeries
from tss.predictor.base import EpsilonPredictor

Params = Dict[str, np.ndarray]


@dataclass
class ForwardCache:
    version: int
    ts: np.ndarray
    inputs: List[np.ndarray]
    activations: List[np.ndarray]


def param_shapes(channels: int, length: int, T: int, hidden: Sequence[int]) -> Dict[str, Tuple[int, ...]]:
    widths = (channels * length,) + tuple(hidden) + (channels * length,)
    shapes: Dict[str, Tuple[int, ...]] = {}
    for i in range(len(widths) - 1):
        shapes[f"W{i + 1}"] = (widths[i + 1], widths[i])
        shapes[f"b{i + 1}"] = (widths[i + 1],)
    shapes["E"] = (T, widths[1])
    return shapes


def _sinusoidal_table(T: int, width: int) -> np.ndarray:
    steps = np.arange(1, T + 1, dtype=np.float64)[:, np.newaxis]
    half = max(width // 2, 1)
    freqs = np.exp(-np.log(10000.0) * np.arange(half) / half)
    angles = steps * freqs[np.newaxis, :]
    table = np.concatenate([np.sin(angles), np.cos(angles)], axis=1)
    return table[:, :width] if table.shape[1] >= width else np.pad(table, ((0, 0), (0, width - table.shape[1])))


class DenoiserModel(EpsilonPredictor):
    def __init__(self, channels: int, length: int, T: int, hidden: Sequence[int], params: Params):
        if channels < 1 or length < 1 or T < 1:
            raise ShapeError(f"degenerate denoiser dimensions channels={channels} length={length} T={T}")
        if any(h < 1 for h in hidden):
            raise ShapeError(f"hidden widths must be positive, got {list(hidden)}")
        self.channels = int(channels)
        self.length = int(length)
        self.T = int(T)
        self.hidden: Tuple[int, ...] = tuple(int(h) for h in hidden)
        self.shape = (self.channels, self.length)
        self.version = 0

        expected = self.param_shapes()
        if set(params) != set(expected):
            raise ShapeError(f"parameter names {sorted(params)} do not match {sorted(expected)}")
        self.params: Params = {}
        for name, shp in expected.items():
            arr = np.array(params[name], dtype=np.float64)
            if arr.shape != shp:
                raise ShapeError(f"parameter {name} has shape {arr.shape}, expected {shp}")
            if not np.all(np.isfinite(arr)):
                raise ShapeError(f"parameter {name} contains non-finite values")
            self.params[name] = arr

    @property
    def dim(self) -> int:
        return self.channels * self.length

    @property
    def widths(self) -> Tuple[int, ...]:
        return (self.dim,) + self.hidden + (self.dim,)

    @property
    def n_layers(self) -> int:
        return len(self.widths) - 1

    def param_shapes(self) -> Dict[str, Tuple[int, ...]]:
        return param_shapes(self.channels, self.length, self.T, self.hidden)

    @property
    def parameter_count(self) -> int:
        return int(sum(p.size for p in self.params.values()))

    @classmethod
    def create(cls, channels: int, length: int, T: int, hidden: Sequence[int] = (64, 64),
               seed: int = 0, init_scale: float = 1.0, embed_scale: float = 1.0) -> "DenoiserModel":
        """Random init: W ~ N(0, init_scale^2 / fan_in), zero biases, sinusoidal embedding."""
        rng = np.random.default_rng(seed)
        model = cls.zeros(channels, length, T, hidden)
        params = model.params
        for i in range(model.n_layers):
            w = params[f"W{i + 1}"]
            params[f"W{i + 1}"] = rng.standard_normal(w.shape) * init_scale / np.sqrt(w.shape[1])
        params["E"] = embed_scale * _sinusoidal_table(T, params["E"].shape[1])
        return model

    @classmethod
    def zeros(cls, channels: int, length: int, T: int, hidden: Sequence[int] = (64, 64)) -> "DenoiserModel":
        params = {name: np.zeros(shp) for name, shp in param_shapes(channels, length, T, hidden).items()}
        return cls(channels, length, T, hidden, params)

    def copy(self) -> "DenoiserModel":
        return DenoiserModel(self.channels, self.length, self.T, self.hidden,
                             {k: v.copy() for k, v in self.params.items()})

    # -- forward / backward on batches of flattened states -----------------

    def forward(self, X: np.ndarray, ts: np.ndarray) -> Tuple[np.ndarray, ForwardCache]:
        X = np.asarray(X, dtype=np.float64)
        ts = np.asarray(ts, dtype=np.int64).reshape(-1)
        if X.ndim != 2 or X.shape[1] != self.dim:
            raise ShapeError(f"denoiser expects (batch, {self.dim}) input, got {X.shape}")
        if ts.shape[0] != X.shape[0]:
            raise ShapeError(f"{ts.shape[0]} steps for a batch of {X.shape[0]}")
        if np.any(ts < 1) or np.any(ts > self.T):
            raise PredictorError(f"step outside 1..{self.T}")

        inputs, activations = [], []
        a = X
        for i in range(self.n_layers):
            inputs.append(a)
            z = a @ self.params[f"W{i + 1}"].T + self.params[f"b{i + 1}"]
            if i == 0:
                z = z + self.params["E"][ts - 1]
            if i < self.n_layers - 1:
                a = np.tanh(z)
                activations.append(a)
            else:
                a = z
        return a, ForwardCache(version=self.version, ts=ts, inputs=inputs, activations=activations)

    def backward(self, cache: ForwardCache, d_out: np.ndarray) -> Params:
        if cache.version != self.version:
            raise StaleCacheError(
                f"cache from model version {cache.version}, parameters are at version {self.version}"
            )
        d_out = np.asarray(d_out, dtype=np.float64)
        if d_out.shape != (cache.inputs[0].shape[0], self.dim):
            raise ShapeError(f"output gradient has shape {d_out.shape}")

        grads: Params = {}
        dz = d_out
        for i in reversed(range(self.n_layers)):
            W = self.params[f"W{i + 1}"]
            grads[f"W{i + 1}"] = dz.T @ cache.inputs[i]
            grads[f"b{i + 1}"] = dz.sum(axis=0)
            if i == 0:
                dE = np.zeros_like(self.params["E"])
                np.add.at(dE, cache.ts - 1, dz)
                grads["E"] = dE
            else:
                da = dz @ W
                dz = da * (1.0 - cache.activations[i - 1] ** 2)
        return grads

    def apply_gradients(self, grads: Params, learning_rate: float) -> None:
        for name, g in grads.items():
            self.params[name] -= learning_rate * g
        self.version += 1

    def set_param(self, name: str, value: np.ndarray) -> None:
        if np.shape(value) != self.params[name].shape:
            raise ShapeError(f"parameter {name} has shape {self.params[name].shape}")
        self.params[name] = np.array(value, dtype=np.float64)
        self.version += 1

    # -- EpsilonPredictor --------------------------------------------------

    def _predict(self, values, t, schedule):
        if schedule.T != self.T:
            raise PredictorError(f"model trained for T={self.T}, schedule has T={schedule.T}", step=t)
        out, _ = self.forward(values.reshape(1, -1), np.array([t]))
        return out.reshape(values.shape)


def denoiser_forward(model: DenoiserModel, x_t: TimeSeries, t: int) -> Tuple[TimeSeries, ForwardCache]:
    if x_t.shape != model.shape:
        raise ShapeError(f"model built for shape {model.shape}, got {x_t.shape}")
    out, cache = model.forward(x_t.flat()[np.newaxis, :], np.array([t]))
    return TimeSeries.from_flat(out[0], x_t.shape), cache


def denoiser_backward(model: DenoiserModel, cache: ForwardCache, d_eps_hat) -> Params:
    d = d_eps_hat.values if isinstance(d_eps_hat, TimeSeries) else np.asarray(d_eps_hat, dtype=np.float64)
    return model.backward(cache, d.reshape(cache.inputs[0].shape[0], -1))


def mse_loss(out: np.ndarray, target: np.ndarray) -> Tuple[float, np.ndarray]:
    """Mean squared error and its gradient with respect to `out`."""
    diff = out - target
    return float(np.mean(diff ** 2)), 2.0 * diff / diff.size


def describe(model: DenoiserModel, label: Optional[str] = None) -> str:
    name = f"[{label}] " if label else ""
    return f"{name}denoiser widths={list(model.widths)} T={model.T} params={model.parameter_count}"
