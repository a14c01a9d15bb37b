from .forward import diffuse, diffuse_array
from .trajectory import StepLabel, Trajectory, count_nfe, dump_trajectories
from .sampler import (
    sigma_from_eta,
    ddim_step,
    ddpm_step,
    ddpm_posterior_std,
    ddim_sample,
    ddpm_sample,
    sawtooth_handoff,
    sawtooth_sample,
    check_plan,
)
from .batch import METHODS, SamplerSettings, sample_batch, run_one, final_states

__all__ = [
    "diffuse",
    "diffuse_array",
    "StepLabel",
    "Trajectory",
    "count_nfe",
    "dump_trajectories",
    "sigma_from_eta",
    "ddim_step",
    "ddpm_step",
    "ddpm_posterior_std",
    "ddim_sample",
    "ddpm_sample",
    "sawtooth_handoff",
    "sawtooth_sample",
    "check_plan",
    "METHODS",
    "SamplerSettings",
    "sample_batch",
    "run_one",
    "final_states",
]
