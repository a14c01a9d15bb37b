from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, NamedTuple, Optional, Tuple

from tss.model.series import TimeSeries
from tss.utils.io import state_checksum


class StepLabel(NamedTuple):
    iteration: int
    tau_from: int
    tau_to: int


@dataclass
class Trajectory:
    """Record of one reverse run: initial state, one state per transition, labels, NFE."""

    initial: TimeSeries
    final: TimeSeries
    step_labels: List[StepLabel] = field(default_factory=list)
    states: List[TimeSeries] = field(default_factory=list)
    nfe: int = 0
    wall_time: float = 0.0
    record_states: bool = True

    @property
    def transitions(self) -> int:
        return len(self.step_labels)

    def blocks(self) -> List[List[StepLabel]]:
        """Transitions grouped into contiguous runs of equal iteration label."""
        out: List[List[StepLabel]] = []
        for label in self.step_labels:
            if out and out[-1][-1].iteration == label.iteration:
                out[-1].append(label)
            else:
                out.append([label])
        return out

    def transition_states(self) -> Optional[List[TimeSeries]]:
        """States after each transition, or None when states were not recorded."""
        if not self.record_states:
            return None
        return self.states[1:]


def count_nfe(trajectory: Optional[Trajectory]) -> int:
    if trajectory is None:
        return 0
    return trajectory.nfe


TRAJECTORY_TAG = "# tss-trajectory v1"
TRAJECTORY_HEADER = "sample,label,iteration,tau_from,tau_to,checksum"


def dump_trajectories(rows: List[Tuple[str, Trajectory]]) -> str:
    """One line per (sample, transition); samples are numbered in the order given."""
    lines = [TRAJECTORY_TAG, TRAJECTORY_HEADER]
    for sample, (label, traj) in enumerate(rows):
        states = traj.transition_states()
        for i, step in enumerate(traj.step_labels):
            checksum = state_checksum(states[i].values) if states is not None else ""
            lines.append(f"{sample},{label},{step.iteration},{step.tau_from},{step.tau_to},{checksum}")
    return "\n".join(lines) + "\n"
