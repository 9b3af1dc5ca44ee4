"""Constructions showing where the likelihood-ratio and Scheffe tests lose to the
Hellinger test, and where any mean-based test must fail.
"""
import math, logging
from typing import Optional, Sequence
from ..models.decision import TestKind
from ..models.distribution import Bernoulli, FiniteDiscrete
from ..models.experiment import ExperimentSpec
from ..models.reports import NpCounterexampleReport, ScheffeGapReport, ZeroMeanReport, ZeroMeanRow
from ..utils.seeding import derive_seed
from .divergences import hellinger, hellinger_squared
from .experiments import DEFAULT_MAX_N, robustness_sweep, sample_complexity_search
from .hypothesis_tests import expected_score, scheffe_set
from .trial_runner import TrialRunner

logger = logging.getLogger(__name__)


def np_counterexample_laws(gamma: float):
    """P = B(0), Q = B(1/2), R = B(1/(16 gamma^2))"""
    return Bernoulli(0.0), Bernoulli(0.5), Bernoulli(1.0 / (16.0 * gamma * gamma))


def repro_np_counterexample(gamma: float, delta: float, seed: int, trials: int = 1000,
                            runner: Optional[TrialRunner] = None) -> NpCounterexampleReport:
    """Run both tests on samples from R, which is gamma-times closer to P than to Q"""
    if not gamma > 1:
        raise ValueError(f"gamma must exceed 1, got {gamma}")
    if not 0.0 < delta < 1.0:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    p, q, r = np_counterexample_laws(gamma)
    n = math.ceil(16.0 * gamma * gamma * math.log(1.0 / delta))
    h_pr, h_qr = hellinger(p, r).value, hellinger(q, r).value

    rates = {}
    for kind in (TestKind.NEYMAN_PEARSON, TestKind.HELLINGER):
        spec = ExperimentSpec(p, q, kind, (n,), trials, seed=seed)
        rates[kind] = next(iter(robustness_sweep(spec, [r], runner))).correct_rate
    report = NpCounterexampleReport(gamma, delta, n, trials, h_pr, h_qr,
                                    1.0 - rates[TestKind.NEYMAN_PEARSON], rates[TestKind.HELLINGER])
    if not report.distances_hold:
        logger.warning(f"Distance bounds fail at gamma={gamma}: H(P,R)={h_pr:.6g}, H(Q,R)={h_qr:.6g}")
    logger.info(f"NP counterexample gamma={gamma} n={n}: NP picks H1 {report.np_h1_rate:.3f}, "
                f"Hellinger picks H0 {report.hellinger_h0_rate:.3f}")
    return report


def scheffe_gap_laws(k: float):
    """Three-symbol pair with H^2 of order 1/k whose Scheffe set only separates at order 1/k^2"""
    eps = 1.0 / (2.0 * k)
    p = FiniteDiscrete((0.0, 1.0, 2.0), (0.5, 0.5 - eps, eps))
    q = FiniteDiscrete((0.0, 1.0, 2.0), (0.5 - eps, 0.5 + eps, 0.0))
    return p, q


def repro_scheffe_gap(k: float, delta: float, seed: int, trials: int = 1000,
                      max_n: int = DEFAULT_MAX_N, runner: Optional[TrialRunner] = None) -> ScheffeGapReport:
    if not k > 1:
        raise ValueError(f"k must exceed 1, got {k}")
    p, q = scheffe_gap_laws(k)
    _, p_s, q_s = scheffe_set(p, q)
    n_hat = {}
    for kind in (TestKind.SCHEFFE, TestKind.HELLINGER):
        spec = ExperimentSpec(p, q, kind, (1,), trials, seed=derive_seed(seed, int(kind is TestKind.HELLINGER)))
        n_hat[kind] = sample_complexity_search(spec, delta, max_n, runner)
    report = ScheffeGapReport(k, delta, p_s, q_s, hellinger_squared(p, q),
                              n_hat[TestKind.SCHEFFE], n_hat[TestKind.HELLINGER])
    logger.info(f"Scheffe gap k={k}: {report.n_scheffe} vs {report.n_hellinger} samples (ratio {report.ratio:.3f})")
    return report


def zero_mean_laws(epsilon: float):
    """Q = B(0), P = B(2 epsilon), R = B(epsilon)"""
    return Bernoulli(2.0 * epsilon), Bernoulli(0.0), Bernoulli(epsilon)


def repro_zero_mean(epsilons: Sequence[float]) -> ZeroMeanReport:
    """Exact score mean under R and the squared Hellinger ratio H^2(Q,R)/H^2(P,R)"""
    rows = []
    for epsilon in epsilons:
        if not 0.0 < epsilon < 0.5:
            raise ValueError(f"epsilon must lie in (0, 1/2), got {epsilon}")
        p, q, r = zero_mean_laws(epsilon)
        row = ZeroMeanRow(epsilon, expected_score(p, q, r), hellinger_squared(q, r) / hellinger_squared(p, r))
        logger.debug(f"Zero-mean epsilon={epsilon}: mean {row.expectation:.3e}, ratio {row.ratio:.6f}")
        rows.append(row)
    return ZeroMeanReport(tuple(rows))
