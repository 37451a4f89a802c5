"""Seeded random streams and game instance generation"""
import logging

import numpy as np

from ..schemas import GameInstance

logger = logging.getLogger(__name__)

# Each purpose draws from its own PCG64 stream so that, e.g., adding diagnostic
# samples never shifts the adversary's noise.
STREAMS = {
    "instance": 0,
    "adversary": 1,
    "samples": 2,
}

# Presets for the shared capacity b
CAPACITY_PRESETS = {"main": 1.0, "comparison": 1.3}


def make_stream(seed: int, purpose: str) -> np.random.Generator:
    """Independent 64-bit PCG64 generator for (seed, purpose)"""
    if purpose not in STREAMS:
        raise ValueError(f"unknown stream '{purpose}'; expected one of {sorted(STREAMS)}")
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(seed), STREAMS[purpose]])))


def box_muller_normals(rng: np.random.Generator, size: int) -> np.ndarray:
    """Standard normal variates from uniform pairs via the Box-Muller transform"""
    pairs = (size + 1) // 2
    u1 = 1.0 - rng.random(pairs)  # in (0, 1], keeps the log finite
    u2 = rng.random(pairs)
    radius = np.sqrt(-2.0 * np.log(u1))
    angle = 2.0 * np.pi * u2
    return np.concatenate([radius * np.cos(angle), radius * np.sin(angle)])[:size]


def generate_instance(n: int, m: int, capacity: float = 1.0, seed: int = 0) -> GameInstance:
    """Random game: A standard normal, C_x and C_y uniform on [0, 1]

    Args:
        n: Pure strategies per player
        m: Shared resource constraints
        capacity: Right-hand side b of C_x x + C_y y <= b
        seed: Instance seed; the same seed regenerates identical matrices
    """
    if n < 1 or m < 0:
        raise ValueError("n must be >= 1 and m >= 0")

    rng = make_stream(seed, "instance")
    A = box_muller_normals(rng, n * n).reshape(n, n)
    C_x = rng.random((m, n))
    C_y = rng.random((m, n))

    logger.debug(f"Generated game instance n={n} m={m} capacity={capacity} seed={seed}")
    return GameInstance(A=A, C_x=C_x, C_y=C_y, capacity=capacity, n=n, m=m, seed=seed)
