"""Inference-cost benchmark: DDPM over all T steps against Sawtooth over a fixed budget."""
from __future__ import annotations

import logging
import time
from dataclasses import dataclass
from typing import Dict, Tuple

from tss.diffusion.batch import SamplerSettings, sample_batch
from tss.diffusion.trajectory import count_nfe
from tss.predictor.base import EpsilonPredictor
from tss.schedule.noise import NoiseSchedule
from tss.schedule.plan import SamplingPlan

logger = logging.getLogger(__name__)


@dataclass
class BenchResult:
    T: int
    total_steps: int
    sawtooth_n: int
    count: int
    repeats: int
    ddpm_nfe: int
    sawtooth_nfe: int
    ddpm_seconds: float
    sawtooth_seconds: float

    @property
    def nfe_ratio(self) -> float:
        return self.ddpm_nfe / self.sawtooth_nfe

    @property
    def time_ratio(self) -> float:
        return self.ddpm_seconds / self.sawtooth_seconds if self.sawtooth_seconds > 0 else float("inf")

    def summary(self) -> Dict[str, str]:
        return {
            "T": str(self.T),
            "total_steps": str(self.total_steps),
            "sawtooth_n": str(self.sawtooth_n),
            "count": str(self.count),
            "repeats": str(self.repeats),
            "ddpm_nfe_per_sample": str(self.ddpm_nfe),
            "sawtooth_nfe_per_sample": str(self.sawtooth_nfe),
            "nfe_ratio": repr(self.nfe_ratio),
            "ddpm_seconds_per_sample": f"{self.ddpm_seconds / self.count:.6f}",
            "sawtooth_seconds_per_sample": f"{self.sawtooth_seconds / self.count:.6f}",
            "time_ratio": f"{self.time_ratio:.3f}",
        }


def _timed(settings: SamplerSettings, predictor: EpsilonPredictor, shape: Tuple[int, int], count: int,
           seed: int, workers: int) -> Tuple[int, float]:
    started = time.perf_counter()
    trajectories = sample_batch(settings, predictor, shape, count, seed, workers=workers)
    elapsed = time.perf_counter() - started
    nfe = {count_nfe(t) for t in trajectories}
    if len(nfe) != 1:
        raise RuntimeError(f"inconsistent NFE across samples: {sorted(nfe)}")
    return nfe.pop(), elapsed


def _fastest(settings: SamplerSettings, predictor: EpsilonPredictor, shape: Tuple[int, int], count: int,
             seed: int, workers: int, repeats: int) -> Tuple[int, float]:
    runs = [_timed(settings, predictor, shape, count, seed, workers) for _ in range(repeats)]
    nfe = {n for n, _ in runs}
    if len(nfe) != 1:
        raise RuntimeError(f"inconsistent NFE across repeats: {sorted(nfe)}")
    return nfe.pop(), min(s for _, s in runs)


def run_benchmark(predictor: EpsilonPredictor, shape: Tuple[int, int], schedule: NoiseSchedule,
                  plan: SamplingPlan, count: int = 4, seed: int = 0, workers: int = 1,
                  repeats: int = 1) -> BenchResult:
    """Both methods share predictor, sample count and seeds; states are not recorded.

    Each method runs `repeats` times and keeps its fastest wall time.
    """
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    if repeats < 1:
        raise ValueError(f"repeats must be >= 1, got {repeats}")
    ddpm = SamplerSettings("ddpm", schedule, plan, eta=1.0, record_states=False)
    saw = SamplerSettings("sawtooth", schedule, plan, eta=0.0, record_states=False)
    ddpm_nfe, ddpm_s = _fastest(ddpm, predictor, shape, count, seed, workers, repeats)
    saw_nfe, saw_s = _fastest(saw, predictor, shape, count, seed, workers, repeats)
    logger.info("bench: ddpm %d nfe in %.3fs, sawtooth %d nfe in %.3fs", ddpm_nfe, ddpm_s, saw_nfe, saw_s)
    return BenchResult(
        T=schedule.T,
        total_steps=plan.total_steps,
        sawtooth_n=plan.N,
        count=count,
        repeats=repeats,
        ddpm_nfe=ddpm_nfe,
        sawtooth_nfe=saw_nfe,
        ddpm_seconds=ddpm_s,
        sawtooth_seconds=saw_s,
    )
