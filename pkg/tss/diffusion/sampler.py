"""Reverse samplers: DDIM steps and passes, DDPM ancestral baseline, Sawtooth.

Conventions: steps are 1-based, alpha_bar(0) = 1 marks the final transition
into data space, and eta = 0 never draws from the RNG.
"""
from __future__ import annotations

import logging
import math
import time
from typing import Optional, Tuple, Union

import numpy as np

from tss.diffusion.trajectory import StepLabel, Trajectory
from tss.errors import PredictorError, ScheduleError, ShapeError, StepRangeError, TssError
from tss.model.series import TimeSeries, require_same_shape
from tss.predictor.base import EpsilonPredictor
from tss.schedule.noise import NoiseSchedule
from tss.schedule.plan import SamplingPlan

logger = logging.getLogger(__name__)

RngLike = Union[None, int, np.random.Generator]


def sigma_from_eta(eta: float, tau_prev: int, tau_cur: int, schedule: NoiseSchedule) -> float:
    """eta * sqrt((1-ab_prev)/(1-ab_cur)) * sqrt(1 - ab_cur/ab_prev)."""
    if eta < 0:
        raise ValueError(f"eta must be >= 0, got {eta}")
    if not tau_prev < tau_cur:
        raise StepRangeError(f"tau_prev {tau_prev} must precede tau_cur {tau_cur}")
    if eta == 0:
        return 0.0
    ab_prev = schedule.alpha_bar(tau_prev)
    ab_cur = schedule.alpha_bar(tau_cur)
    if not ab_cur < ab_prev:
        raise ScheduleError(f"alpha_bar not decreasing between steps {tau_prev} and {tau_cur}")
    return eta * math.sqrt((1.0 - ab_prev) / (1.0 - ab_cur)) * math.sqrt(1.0 - ab_cur / ab_prev)


def _ddim_update(x: np.ndarray, eps_hat: np.ndarray, ab_cur: float, ab_prev: float,
                 sigma: float, noise: Optional[np.ndarray]) -> np.ndarray:
    radicand = 1.0 - ab_prev - sigma ** 2
    if radicand < 0:
        # rounding can push an exact-zero radicand slightly negative at the final step
        if radicand > -1e-12:
            radicand = 0.0
        else:
            raise ScheduleError(f"negative radicand 1 - alpha_bar_prev - sigma^2 = {radicand}")
    x0_hat = (x - math.sqrt(1.0 - ab_cur) * eps_hat) / math.sqrt(ab_cur)
    out = math.sqrt(ab_prev) * x0_hat + math.sqrt(radicand) * eps_hat
    if sigma > 0:
        out = out + sigma * noise
    return out


def ddim_step(x_cur: TimeSeries, eps_hat: TimeSeries, tau_cur: int, tau_prev: int, sigma: float,
              noise: Optional[TimeSeries], schedule: NoiseSchedule) -> TimeSeries:
    """One DDIM transition from tau_cur to tau_prev (tau_prev = 0 is the final step)."""
    require_same_shape(x_cur, eps_hat, "state and noise estimate")
    if sigma > 0:
        if noise is None:
            raise ShapeError("sigma > 0 needs an injected noise sample")
        require_same_shape(x_cur, noise, "state and injected noise")
    if tau_prev == tau_cur:
        schedule.check_step(tau_cur)
        return x_cur
    if tau_prev > tau_cur:
        raise StepRangeError(f"tau_prev {tau_prev} must precede tau_cur {tau_cur}")
    ab_cur = schedule.alpha_bar(tau_cur)
    ab_prev = schedule.alpha_bar(tau_prev)
    out = _ddim_update(x_cur.values, eps_hat.values, ab_cur, ab_prev, sigma,
                       None if noise is None else noise.values)
    return TimeSeries(out)


def ddpm_step(x_cur: TimeSeries, eps_hat: TimeSeries, t: int, noise: Optional[TimeSeries],
              schedule: NoiseSchedule) -> TimeSeries:
    """Ancestral DDPM update from t to t-1 using the forward-process posterior.

    mean = (x - beta_t / sqrt(1 - ab_t) * eps_hat) / sqrt(alpha_t)
    var  = beta_t * (1 - ab_{t-1}) / (1 - ab_t), zero at t = 1
    """
    require_same_shape(x_cur, eps_hat, "state and noise estimate")
    out = _ddpm_update(x_cur.values, eps_hat.values, t, None if noise is None else noise.values, schedule)
    return TimeSeries(out)


def ddpm_posterior_std(t: int, schedule: NoiseSchedule) -> float:
    ab_t = schedule.alpha_bar(t)
    ab_prev = schedule.alpha_bar(t - 1)
    return math.sqrt(schedule.beta(t) * (1.0 - ab_prev) / (1.0 - ab_t))


def _ddpm_update(x, eps_hat, t, noise, schedule):
    beta = schedule.beta(t)
    mean = (x - beta / math.sqrt(1.0 - schedule.alpha_bar(t)) * eps_hat) / math.sqrt(schedule.alpha(t))
    std = ddpm_posterior_std(t, schedule)
    if std > 0:
        if noise is None:
            raise ShapeError("ancestral step needs an injected noise sample")
        mean = mean + std * noise
    return mean


def _predict(predictor: EpsilonPredictor, x: np.ndarray, t: int, schedule: NoiseSchedule) -> np.ndarray:
    try:
        return predictor.predict_values(x, t, schedule)
    except PredictorError as e:
        if e.step is None:
            raise PredictorError(str(e), step=t) from e
        raise
    except TssError:
        raise
    except Exception as e:
        raise PredictorError(f"predictor failed: {e!r}", step=t) from e


def _ddim_pass(x: np.ndarray, predictor: EpsilonPredictor, plan: SamplingPlan, schedule: NoiseSchedule,
               eta: float, rng: np.random.Generator, iteration: int, traj: Trajectory) -> np.ndarray:
    for tau_cur, tau_prev in plan.transitions():
        eps_hat = _predict(predictor, x, tau_cur, schedule)
        traj.nfe += 1
        sigma = sigma_from_eta(eta, tau_prev, tau_cur, schedule)
        noise = rng.standard_normal(x.shape) if sigma > 0 else None
        x = _ddim_update(x, eps_hat, schedule.alpha_bar(tau_cur), schedule.alpha_bar(tau_prev), sigma, noise)
        traj.step_labels.append(StepLabel(iteration, tau_cur, tau_prev))
        if traj.record_states:
            traj.states.append(TimeSeries(x))
    return x


def check_plan(plan: SamplingPlan, schedule: NoiseSchedule) -> None:
    """Every pass must start at the top of the schedule, so tau_S has to equal T."""
    if plan.T != schedule.T:
        raise ScheduleError(f"plan ends at step {plan.T} but schedule has T={schedule.T}; tau_S must equal T")


def _check_inputs(x_T: TimeSeries, predictor: EpsilonPredictor, plan: Optional[SamplingPlan],
                  schedule: NoiseSchedule) -> None:
    if predictor.shape is not None and x_T.shape != tuple(predictor.shape):
        raise ShapeError(f"initial state shape {x_T.shape} does not match predictor {predictor.shape}")
    if plan is not None:
        check_plan(plan, schedule)


def _start(x_T: TimeSeries, record_states: bool) -> Trajectory:
    traj = Trajectory(initial=x_T, final=x_T, record_states=record_states)
    if record_states:
        traj.states.append(x_T)
    return traj


def ddim_sample(x_T: TimeSeries, predictor: EpsilonPredictor, plan: SamplingPlan, schedule: NoiseSchedule,
                eta: float = 0.0, rng: RngLike = None, record_states: bool = True) -> Trajectory:
    """One DDIM reverse pass over plan.taus, from tau_S down to data space."""
    _check_inputs(x_T, predictor, plan, schedule)
    generator = np.random.default_rng(rng)
    traj = _start(x_T, record_states)
    started = time.perf_counter()
    x = _ddim_pass(x_T.values, predictor, plan, schedule, eta, generator, 1, traj)
    traj.final = TimeSeries(x)
    traj.wall_time = time.perf_counter() - started
    return traj


def ddpm_sample(x_T: TimeSeries, predictor: EpsilonPredictor, schedule: NoiseSchedule,
                rng: RngLike = None, record_states: bool = False) -> Trajectory:
    """Ancestral sampling over every step T..1."""
    _check_inputs(x_T, predictor, None, schedule)
    generator = np.random.default_rng(rng)
    traj = _start(x_T, record_states)
    started = time.perf_counter()
    x = x_T.values
    for t in range(schedule.T, 0, -1):
        eps_hat = _predict(predictor, x, t, schedule)
        traj.nfe += 1
        noise = generator.standard_normal(x.shape) if t > 1 else None
        x = _ddpm_update(x, eps_hat, t, noise, schedule)
        traj.step_labels.append(StepLabel(1, t, t - 1))
        if record_states:
            traj.states.append(TimeSeries(x))
    traj.final = TimeSeries(x)
    traj.wall_time = time.perf_counter() - started
    return traj


def sawtooth_handoff(state: np.ndarray, schedule: NoiseSchedule) -> Tuple[np.ndarray, int]:
    """State carried into the next pass: unchanged, relabelled as sitting at tau_S = T."""
    return state, schedule.T


def sawtooth_sample(x_T: TimeSeries, predictor: EpsilonPredictor, schedule: NoiseSchedule, plan: SamplingPlan,
                    rng: RngLike = None, record_states: bool = True) -> Trajectory:
    """N deterministic DDIM passes; the scheduler resets between passes, no renoising."""
    _check_inputs(x_T, predictor, plan, schedule)
    generator = np.random.default_rng(rng)
    traj = _start(x_T, record_states)
    started = time.perf_counter()
    x = x_T.values
    for k in range(1, plan.N + 1):
        if k > 1:
            x, _ = sawtooth_handoff(x, schedule)
        x = _ddim_pass(x, predictor, plan, schedule, 0.0, generator, k, traj)
        logger.debug("sawtooth pass %d/%d done, nfe=%d", k, plan.N, traj.nfe)
    traj.final = TimeSeries(x)
    traj.wall_time = time.perf_counter() - started
    return traj
