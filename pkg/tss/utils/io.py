"""Atomic output writing: temp file next to the target, then os.replace."""
from __future__ import annotations

import hashlib
import os
import tempfile
from pathlib import Path
from typing import Union

import numpy as np

PathLike = Union[str, Path]


def atomic_write_text(path: PathLike, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=str(path.parent))
    try:
        with os.fdopen(fd, "w", newline="") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def state_checksum(values: np.ndarray) -> str:
    """First 16 hex chars of sha256 over the float64 bytes."""
    data = np.ascontiguousarray(values, dtype=np.float64).tobytes()
    return hashlib.sha256(data).hexdigest()[:16]


def format_float(x: float) -> str:
    return repr(float(x))
