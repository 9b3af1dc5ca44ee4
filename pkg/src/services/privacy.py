"""Laplace mechanism for the differentially private Hellinger test.

Changing one sample moves the Hellinger statistic by at most 2*Delta/n, so
adding Laplace noise of scale 2*Delta/epsilon divided by n makes the decision
epsilon-differentially private.
"""
import logging
import numpy as np
from typing import Union
from ..models.decision import DpParams, TestDecision
from ..models.distribution import Distribution
from ..models.sample_set import SampleSet
from ..utils.seeding import make_rng
from .hypothesis_tests import resolve_verdict, score_samples

logger = logging.getLogger(__name__)


def laplace_inverse_cdf(u: Union[float, np.ndarray], scale: float) -> Union[float, np.ndarray]:
    """Map u in (-1/2, 1/2) to a Laplace(0, scale) quantile"""
    u = np.asarray(u, dtype=float)
    values = -scale * np.sign(u) * np.log1p(-2.0 * np.abs(u))
    return float(values) if values.ndim == 0 else values


def laplace_samples(scale: float, size: int, seed: int) -> np.ndarray:
    if not scale > 0:
        raise ValueError(f"Laplace scale must be positive, got {scale}")
    u = make_rng(seed).random(size) - 0.5
    # random() is in [0, 1) so u can hit -1/2 exactly, where log1p diverges
    u[u == -0.5] = 0.0
    return laplace_inverse_cdf(u, scale)


def laplace_sample(scale: float, seed: int) -> float:
    """One deterministic Laplace(0, scale) draw"""
    return float(laplace_samples(scale, 1, seed)[0])


def dp_hellinger_decide(p: Distribution, q: Distribution, xs: SampleSet, dp: DpParams,
                        threshold: float = 0.0, tie_seed: int = 0) -> TestDecision:
    """Hellinger decision on T + Z/n with Z ~ Laplace(2*Delta/epsilon)"""
    summary = score_samples(p, q, xs)
    scale = dp.noise_scale
    noise = laplace_sample(scale, dp.noise_seed) if scale > 0 else 0.0
    logger.debug(f"DP noise {noise:.6g} at scale {scale:.6g} for n={xs.n}")
    return resolve_verdict(summary.mean + noise / xs.n, threshold, tie_seed, summary.out_of_support)
