"""Step subsequences and Sawtooth plans, plus their [schedule] config section."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, Mapping, Tuple

import numpy as np

from tss.errors import ScheduleError
from tss.schedule.noise import DEFAULT_BETA_END, DEFAULT_BETA_START, NoiseSchedule, build_schedule

logger = logging.getLogger(__name__)

SECTION_KEYS = ("T", "beta_start", "beta_end", "total_steps", "sawtooth_n")


def select_subsequence(T: int, S: int) -> np.ndarray:
    """S evenly spaced steps in 1..T ending at T.

    Index i (1-based) maps to round(i * T / S) with round-half-up, so
    (T=10, S=2) gives [5, 10]. For S <= T consecutive grid points are at
    least 1 apart, hence the rounded indices stay strictly increasing.
    """
    if int(S) != S or S < 1:
        raise ScheduleError(f"subsequence length must be a positive integer, got {S}")
    if S > T:
        raise ScheduleError(f"subsequence length {S} exceeds T={T}")
    i = np.arange(1, S + 1, dtype=np.int64)
    # integer round-half-up of i*T/S
    taus = (2 * i * T + S) // (2 * S)
    return taus


@dataclass(frozen=True)
class SamplingPlan:
    taus: Tuple[int, ...]
    N: int
    steps_per_iteration: int
    total_steps: int

    def __post_init__(self):
        object.__setattr__(self, "taus", tuple(int(t) for t in self.taus))
        if self.N < 1:
            raise ScheduleError(f"sawtooth iteration count must be >= 1, got {self.N}")
        if self.steps_per_iteration < 1:
            raise ScheduleError("steps_per_iteration must be positive")
        if self.N * self.steps_per_iteration != self.total_steps:
            raise ScheduleError(
                f"total_steps {self.total_steps} != N {self.N} x steps_per_iteration {self.steps_per_iteration}"
            )
        if len(self.taus) != self.steps_per_iteration:
            raise ScheduleError(f"plan has {len(self.taus)} steps, expected {self.steps_per_iteration}")
        if any(b <= a for a, b in zip(self.taus, self.taus[1:])) or self.taus[0] < 1:
            raise ScheduleError("plan steps must be strictly increasing and >= 1")

    @property
    def T(self) -> int:
        return self.taus[-1]

    def transitions(self) -> Tuple[Tuple[int, int], ...]:
        """(tau_cur, tau_prev) pairs of one reverse pass, tau_prev = 0 for the final step."""
        prevs = (0,) + self.taus[:-1]
        return tuple(zip(reversed(self.taus), reversed(prevs)))


def single_pass_plan(T: int, S: int) -> SamplingPlan:
    return SamplingPlan(taus=tuple(select_subsequence(T, S)), N=1, steps_per_iteration=S, total_steps=S)


def build_sawtooth_plan(
    total_steps: int,
    N: int,
    T: int,
    beta_start: float = DEFAULT_BETA_START,
    beta_end: float = DEFAULT_BETA_END,
) -> Tuple[NoiseSchedule, SamplingPlan]:
    """One shared schedule plus a plan spreading total_steps evenly across N passes."""
    if int(N) != N or N < 1:
        raise ScheduleError(f"sawtooth iteration count must be a positive integer, got {N}")
    if int(total_steps) != total_steps or total_steps < 1:
        raise ScheduleError(f"total_steps must be a positive integer, got {total_steps}")
    if total_steps % N:
        raise ScheduleError(f"total_steps={total_steps} is not divisible by N={N}")
    schedule = build_schedule(T, beta_start, beta_end)
    per_iteration = total_steps // N
    plan = SamplingPlan(
        taus=tuple(select_subsequence(T, per_iteration)),
        N=int(N),
        steps_per_iteration=per_iteration,
        total_steps=int(total_steps),
    )
    logger.debug("sawtooth plan: N=%d x %d steps over T=%d", N, per_iteration, T)
    return schedule, plan


def schedule_to_section(schedule: NoiseSchedule, plan: SamplingPlan) -> Dict[str, str]:
    return {
        "T": str(schedule.T),
        "beta_start": repr(schedule.beta_start),
        "beta_end": repr(schedule.beta_end),
        "total_steps": str(plan.total_steps),
        "sawtooth_n": str(plan.N),
    }


def schedule_from_section(section: Mapping[str, str]) -> Tuple[NoiseSchedule, SamplingPlan]:
    unknown = sorted(set(section) - set(SECTION_KEYS))
    if unknown:
        raise ScheduleError(f"unknown schedule keys: {', '.join(unknown)}")
    try:
        T = int(section.get("T", 1000))
        beta_start = float(section.get("beta_start", DEFAULT_BETA_START))
        beta_end = float(section.get("beta_end", DEFAULT_BETA_END))
        total_steps = int(section.get("total_steps", 100))
        N = int(section.get("sawtooth_n", 1))
    except ValueError as e:
        raise ScheduleError(f"malformed schedule section: {e}") from e
    return build_sawtooth_plan(total_steps, N, T, beta_start, beta_end)
