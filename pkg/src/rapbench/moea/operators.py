"""Variation operators shared by the binary optimizers."""

from __future__ import annotations

import numpy as np

from ..rap import random_init, sbi_init


def initial_bits(cfg, inst, rng) -> np.ndarray:
    if cfg.init == "sbi":
        return sbi_init(cfg.pop_size, inst, rng)
    return random_init(cfg.pop_size, inst, rng, encoding="binary")


def uniform_crossover(parents: np.ndarray, prob: float, rng: np.random.Generator) -> np.ndarray:
    """Consecutive rows are mated pairwise; each pair swaps genes under a fair coin mask."""
    p1, p2 = parents[0::2], parents[1::2]
    mask = rng.random(p1.shape) < 0.5
    mate = rng.random(len(p1)) < prob
    mask &= mate[:, None]
    c1 = np.where(mask, p2, p1)
    c2 = np.where(mask, p1, p2)
    out = np.empty_like(parents)
    out[0::2], out[1::2] = c1, c2
    return out


def bitflip_mutation(bits: np.ndarray, prob: float, rng: np.random.Generator) -> np.ndarray:
    flips = rng.random(bits.shape) < prob
    return bits ^ flips.astype(bits.dtype)
