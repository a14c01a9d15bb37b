"""Text format for denoiser parameters.

    tss-model v1
    {"T": 200, "channels": 2, "length": 32, "hidden": [64, 64], "labels": ["walk", "run"]}
    param walk W1 64,64
    <space separated repr floats, row-major>
    ...

Every label carries the same architecture; one block per (label, parameter).
"""
from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Dict, List, Optional

import numpy as np

from tss.errors import ModelFormatError, ShapeError
from tss.predictor.denoiser import DenoiserModel, param_shapes
from tss.utils.io import PathLike, atomic_write_text

logger = logging.getLogger(__name__)

FORMAT_TAG = "tss-model v1"
HEADER_KEYS = {"T", "channels", "length", "hidden", "labels"}


def dump_models(models: Dict[str, DenoiserModel]) -> str:
    if not models:
        raise ModelFormatError("no models to save")
    first = next(iter(models.values()))
    for label, m in models.items():
        if " " in label or not label:
            raise ModelFormatError(f"model label {label!r} must be a non-empty token")
        if (m.channels, m.length, m.T, m.hidden) != (first.channels, first.length, first.T, first.hidden):
            raise ModelFormatError(f"model {label!r} has a different architecture")
    header = {
        "T": first.T,
        "channels": first.channels,
        "length": first.length,
        "hidden": list(first.hidden),
        "labels": list(models),
    }
    lines = [FORMAT_TAG, json.dumps(header, sort_keys=True)]
    for label, m in models.items():
        for name in m.param_shapes():
            arr = m.params[name]
            lines.append(f"param {label} {name} {','.join(str(s) for s in arr.shape)}")
            lines.append(" ".join(repr(float(v)) for v in arr.reshape(-1)))
    return "\n".join(lines) + "\n"


def save_models(path: PathLike, models: Dict[str, DenoiserModel]) -> Path:
    out = atomic_write_text(path, dump_models(models))
    logger.info("saved %d model(s) to %s", len(models), out)
    return out


def parse_models(text: str, expected_T: Optional[int] = None) -> Dict[str, DenoiserModel]:
    lines = text.splitlines()
    if not lines or lines[0].strip() != FORMAT_TAG:
        raise ModelFormatError(f"missing format tag {FORMAT_TAG!r}")
    if len(lines) < 2:
        raise ModelFormatError("missing header line")
    try:
        header = json.loads(lines[1])
    except json.JSONDecodeError as e:
        raise ModelFormatError(f"malformed header: {e}") from e
    if not isinstance(header, dict) or set(header) != HEADER_KEYS:
        raise ModelFormatError(f"header must have exactly the keys {sorted(HEADER_KEYS)}")
    T, channels, length = int(header["T"]), int(header["channels"]), int(header["length"])
    hidden: List[int] = [int(h) for h in header["hidden"]]
    labels: List[str] = [str(l) for l in header["labels"]]
    if expected_T is not None and T != expected_T:
        raise ModelFormatError(f"model file was trained with T={T}, schedule has T={expected_T}")

    shapes = param_shapes(channels, length, T, hidden)
    blocks: Dict[str, Dict[str, np.ndarray]] = {label: {} for label in labels}
    body = lines[2:]
    if len(body) % 2:
        raise ModelFormatError("truncated parameter block")
    for i in range(0, len(body), 2):
        lineno = i + 3
        parts = body[i].split()
        if len(parts) != 4 or parts[0] != "param":
            raise ModelFormatError(f"line {lineno}: expected 'param <label> <name> <shape>'")
        _, label, name, shape_text = parts
        if label not in blocks:
            raise ModelFormatError(f"line {lineno}: unknown label {label!r}")
        if name not in shapes:
            raise ModelFormatError(f"line {lineno}: unknown parameter {name!r}")
        shape = tuple(int(s) for s in shape_text.split(","))
        if shape != shapes[name]:
            raise ModelFormatError(f"line {lineno}: {name} has shape {shape}, expected {shapes[name]}")
        try:
            values = np.array([float(v) for v in body[i + 1].split()], dtype=np.float64)
        except ValueError as e:
            raise ModelFormatError(f"line {lineno + 1}: {e}") from e
        if values.size != int(np.prod(shape)):
            raise ModelFormatError(f"line {lineno + 1}: expected {int(np.prod(shape))} values, got {values.size}")
        blocks[label][name] = values.reshape(shape)

    models = {}
    for label, params in blocks.items():
        try:
            models[label] = DenoiserModel(channels, length, T, hidden, params)
        except ShapeError as e:
            raise ModelFormatError(f"model {label!r}: {e}") from e
    return models


def load_models(path: PathLike, expected_T: Optional[int] = None) -> Dict[str, DenoiserModel]:
    path = Path(path)
    if not path.exists():
        raise ModelFormatError(f"model file {path} does not exist")
    return parse_models(path.read_text(), expected_T)
