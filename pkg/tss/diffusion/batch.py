"""Batch sampling with one independent RNG stream per sample.

Sample i of a run draws its initial state and any injected noise from
sample_rng(seed, group, i), so results do not depend on the worker count.
"""
from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Tuple

from tss.diffusion.sampler import check_plan, ddim_sample, ddpm_sample, sawtooth_sample
from tss.diffusion.trajectory import Trajectory
from tss.errors import ScheduleError
from tss.model.series import TimeSeries
from tss.predictor.base import EpsilonPredictor
from tss.schedule.noise import NoiseSchedule
from tss.schedule.plan import SamplingPlan
from tss.utils.rng import sample_rng

logger = logging.getLogger(__name__)

METHODS = ("ddpm", "ddim", "sawtooth")


@dataclass(frozen=True)
class SamplerSettings:
    method: str
    schedule: NoiseSchedule
    plan: SamplingPlan
    eta: float = 0.0
    record_states: bool = False

    def __post_init__(self):
        if self.method not in METHODS:
            raise ScheduleError(f"unknown sampling method {self.method!r}; expected one of {', '.join(METHODS)}")
        if self.eta < 0:
            raise ScheduleError(f"eta must be >= 0, got {self.eta}")
        check_plan(self.plan, self.schedule)


def run_one(settings: SamplerSettings, predictor: EpsilonPredictor, shape: Tuple[int, int],
            seed: int, group: int, index: int) -> Trajectory:
    rng = sample_rng(seed, group, index)
    x_T = TimeSeries(rng.standard_normal(shape))
    if settings.method == "ddpm":
        return ddpm_sample(x_T, predictor, settings.schedule, rng, settings.record_states)
    if settings.method == "ddim":
        # one pass over settings.plan; plan.N is not consulted
        return ddim_sample(x_T, predictor, settings.plan, settings.schedule, settings.eta, rng, settings.record_states)
    return sawtooth_sample(x_T, predictor, settings.schedule, settings.plan, rng, settings.record_states)


def sample_batch(settings: SamplerSettings, predictor: EpsilonPredictor, shape: Tuple[int, int], count: int,
                 seed: int, group: int = 0, workers: int = 1) -> List[Trajectory]:
    """`count` trajectories in index order; `workers` > 1 runs them on a thread pool."""
    if count < 0:
        raise ValueError(f"count must be >= 0, got {count}")
    logger.debug("sampling %d x %s (group %d) with %d worker(s)", count, settings.method, group, workers)
    if workers <= 1 or count <= 1:
        return [run_one(settings, predictor, shape, seed, group, i) for i in range(count)]
    with ThreadPoolExecutor(max_workers=workers, thread_name_prefix="tss-sample") as pool:
        futures = [pool.submit(run_one, settings, predictor, shape, seed, group, i) for i in range(count)]
        return [f.result() for f in futures]


def final_states(trajectories: List[Trajectory]) -> List[TimeSeries]:
    return [t.final for t in trajectories]
