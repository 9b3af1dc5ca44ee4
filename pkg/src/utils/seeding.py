"""Random number generation helpers.

Every stochastic operation takes an explicit 64-bit seed and builds a
``numpy.random.Generator`` on the counter-based Philox bit generator, so the
same seed reproduces the same stream on every platform.
"""
import numpy as np
from enum import IntEnum

SEED_MASK = (1 << 64) - 1


class Stream(IntEnum):
    """Purpose tags folded into derived seeds"""
    SAMPLES = 0
    TIE_BREAK = 1
    NOISE = 2
    CALIBRATION = 3


class Arm(IntEnum):
    """Experiment arm tags: which hypothesis generated the data"""
    NULL = 0
    ALTERNATIVE = 1
    PERTURBED = 2


def make_rng(seed: int) -> np.random.Generator:
    """Create a Philox-backed generator for a 64-bit seed"""
    return np.random.Generator(np.random.Philox(int(seed) & SEED_MASK))


def derive_seed(base: int, *key: int) -> int:
    """Derive a 64-bit child seed from a base seed and an integer key path"""
    sequence = np.random.SeedSequence(entropy=int(base) & SEED_MASK, spawn_key=tuple(int(k) for k in key))
    return int(sequence.generate_state(1, dtype=np.uint64)[0])


def trial_seed(base: int, trial: int, arm: Arm, stream: Stream = Stream.SAMPLES) -> int:
    """Seed for one trial of one arm; injective in (base, trial, arm, stream)"""
    return derive_seed(base, trial, int(arm), int(stream))


def fair_coin(seed: int) -> bool:
    """A fair coin flip determined by seed"""
    return bool(make_rng(seed).random() < 0.5)
