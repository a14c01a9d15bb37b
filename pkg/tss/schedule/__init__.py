from .noise import NoiseSchedule, linear_betas, build_schedule, DEFAULT_BETA_START, DEFAULT_BETA_END
from .plan import (
    SamplingPlan,
    select_subsequence,
    single_pass_plan,
    build_sawtooth_plan,
    schedule_to_section,
    schedule_from_section,
)

__all__ = [
    "NoiseSchedule",
    "SamplingPlan",
    "linear_betas",
    "build_schedule",
    "select_subsequence",
    "single_pass_plan",
    "build_sawtooth_plan",
    "schedule_to_section",
    "schedule_from_section",
    "DEFAULT_BETA_START",
    "DEFAULT_BETA_END",
]
