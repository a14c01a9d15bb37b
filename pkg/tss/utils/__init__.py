from .io import atomic_write_text, state_checksum, format_float
from .rng import stage_seed, sample_rng

__all__ = ["atomic_write_text", "state_checksum", "format_float", "stage_seed", "sample_rng"]
