"""timeseries-sawtooth-sampler package (tss)

DDIM and Sawtooth reverse sampling for multichannel time series, with an
exact Gaussian oracle, a small trainable denoiser, PSD-based similarity
tracking and an inference-cost benchmark.

Public API is organized into subpackages:
- tss.schedule    variance schedules, step subsequences, sawtooth plans
- tss.diffusion   forward diffusion, reverse samplers, trajectories
- tss.predictor   epsilon-predictors, training, gradient checks, storage
- tss.evaluation  spectra, similarity curves, TSTR metrics
- tss.data        synthetic generators, dataset CSV
- tss.bench       DDPM vs Sawtooth cost benchmark
- tss.cli         config-driven command line
"""
from .model import TimeSeries, LabeledDataset
from .schedule import NoiseSchedule, SamplingPlan, build_schedule, build_sawtooth_plan, select_subsequence
from .diffusion import Trajectory, diffuse, ddim_step, ddim_sample, ddpm_sample, sawtooth_sample, count_nfe
from .predictor import EpsilonPredictor, GaussianDataSpec, GaussianOracle, GroundTruthPredictor, DenoiserModel, train
from .evaluation import psd_similarity, nearest_real_match, per_step_curve, tstr_evaluate

__all__ = [
    "TimeSeries",
    "LabeledDataset",
    "NoiseSchedule",
    "SamplingPlan",
    "build_schedule",
    "build_sawtooth_plan",
    "select_subsequence",
    "Trajectory",
    "diffuse",
    "ddim_step",
    "ddim_sample",
    "ddpm_sample",
    "sawtooth_sample",
    "count_nfe",
    "EpsilonPredictor",
    "GaussianDataSpec",
    "GaussianOracle",
    "GroundTruthPredictor",
    "DenoiserModel",
    "train",
    "psd_similarity",
    "nearest_real_match",
    "per_step_curve",
    "tstr_evaluate",
]
