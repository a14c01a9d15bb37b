"""Per-step similarity curves over a reverse trajectory."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, NamedTuple, Sequence, Union

import numpy as np

from tss.diffusion.trajectory import Trajectory
from tss.errors import DatasetError
from tss.evaluation.spectrum import SpectralIndex
from tss.model.series import TimeSeries

CURVE_TAG = "# tss-curve v1"
CURVE_HEADER = "step,iteration,score,match_id"


class CurvePoint(NamedTuple):
    step: int
    iteration: int
    score: float
    match_id: int


@dataclass
class StepCurve:
    points: List[CurvePoint] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.points)

    @property
    def scores(self) -> np.ndarray:
        return np.array([p.score for p in self.points])

    @property
    def iterations(self) -> List[int]:
        return [p.iteration for p in self.points]

    def dump(self) -> str:
        lines = [CURVE_TAG, CURVE_HEADER]
        lines += [f"{p.step},{p.iteration},{p.score!r},{p.match_id}" for p in self.points]
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str) -> "StepCurve":
        lines = text.splitlines()
        if len(lines) < 2 or lines[0].strip() != CURVE_TAG or lines[1].strip() != CURVE_HEADER:
            raise DatasetError(f"expected {CURVE_TAG!r} and header {CURVE_HEADER!r}", line=1)
        curve = cls()
        for lineno, line in enumerate(lines[2:], start=3):
            if not line.strip():
                continue
            cells = line.split(",")
            try:
                step, iteration, score, match = int(cells[0]), int(cells[1]), float(cells[2]), int(cells[3])
            except (ValueError, IndexError):
                raise DatasetError(f"malformed curve row {line!r}", line=lineno)
            curve.points.append(CurvePoint(step, iteration, score, match))
        return curve


def per_step_curve(trajectory: Trajectory, real_set: Union[SpectralIndex, Sequence[TimeSeries]]) -> StepCurve:
    """Best match and score for the state after every transition, in order."""
    if trajectory.transitions == 0:
        return StepCurve()
    states = trajectory.transition_states()
    if states is None:
        raise DatasetError("trajectory was run without recording intermediate states")
    index = real_set if isinstance(real_set, SpectralIndex) else SpectralIndex(real_set)
    curve = StepCurve()
    for step, (label, state) in enumerate(zip(trajectory.step_labels, states), start=1):
        match, score = index.nearest(state.values)
        curve.points.append(CurvePoint(step, label.iteration, score.value, match))
    return curve


def mean_curve(curves: Sequence[StepCurve]) -> StepCurve:
    """Step-wise mean score over curves of equal structure; match_id is -1."""
    if not curves:
        return StepCurve()
    first = curves[0]
    for c in curves[1:]:
        if [(p.step, p.iteration) for p in c.points] != [(p.step, p.iteration) for p in first.points]:
            raise DatasetError("curves differ in step structure and cannot be averaged")
    scores = np.mean(np.stack([c.scores for c in curves]), axis=0)
    return StepCurve([CurvePoint(p.step, p.iteration, float(s), -1) for p, s in zip(first.points, scores)])
