"""Seed splitting.

A master seed fans out to stage seeds: the first 8 bytes (big-endian) of
sha256("<master>:<stage>"). Per-sample streams are
default_rng(SeedSequence([stage_seed, *indices])), so a sample's stream
depends only on its indices, never on worker count or ordering.
"""
from __future__ import annotations

import hashlib

import numpy as np


def stage_seed(master_seed: int, stage: str) -> int:
    digest = hashlib.sha256(f"{int(master_seed)}:{stage}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def sample_rng(seed: int, *indices: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([int(seed), *(int(i) for i in indices)]))
