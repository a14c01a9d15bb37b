"""Exception hierarchy for the tss package."""
from __future__ import annotations

from typing import Iterable, List, Optional


class TssError(Exception):
    """Base class of every error raised by tss."""


class ScheduleError(TssError, ValueError):
    pass


class ShapeError(TssError, ValueError):
    pass


class StepRangeError(TssError, ValueError):
    pass


class PredictorError(TssError):
    """A predictor call failed inside a reverse pass."""

    def __init__(self, message: str, step: Optional[int] = None):
        if step is not None:
            message = f"{message} (at step {step})"
        super().__init__(message)
        self.step = step


class StaleCacheError(TssError):
    pass


class TrainingDivergedError(TssError):
    def __init__(self, message: str, step: int):
        super().__init__(f"{message} (at training step {step})")
        self.step = step


class DatasetError(TssError, ValueError):
    def __init__(self, message: str, line: Optional[int] = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ModelFormatError(TssError, ValueError):
    pass


class ConfigError(TssError, ValueError):
    """Collects every violated config key so one run reports them all."""

    def __init__(self, violations: Iterable[str]):
        self.violations: List[str] = list(violations)
        super().__init__("; ".join(self.violations))


class CovarianceError(TssError, ValueError):
    pass
