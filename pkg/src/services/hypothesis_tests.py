import math, logging
import numpy as np
from dataclasses import dataclass
from typing import Callable, Tuple
from ..models.decision import TestDecision, TestKind, Verdict
from ..models.distribution import Distribution
from ..models.errors import DegenerateCalibration, UnsupportedDistribution
from ..models.sample_set import SampleSet
from ..utils.quadrature import integrate
from ..utils.seeding import Arm, Stream, fair_coin, trial_seed
from .divergences import DISCRETE_TAIL_MASS, CONTINUOUS_TAIL_MASS, log_ratio_score

logger = logging.getLogger(__name__)

MIN_CALIBRATION_TRIALS = 100


@dataclass(frozen=True)
class ScoreSummary:
    """Mean Hellinger score of a sample plus the count of points neither law supports"""
    mean: float
    out_of_support: int


def per_sample_score(p: Distribution, q: Distribution, x: float) -> float:
    """(P(x)-Q(x))/(P(x)+Q(x)) in [-1, 1]; 0 where both densities vanish"""
    scores, _ = log_ratio_score(p.log_density_array(np.array([x])), q.log_density_array(np.array([x])))
    return float(scores[0])


def score_samples(p: Distribution, q: Distribution, xs: SampleSet) -> ScoreSummary:
    scores, both_zero = log_ratio_score(p.log_density_array(xs.values), q.log_density_array(xs.values))
    out_of_support = int(both_zero.sum())
    if out_of_support:
        logger.warning(f"{out_of_support} of {xs.n} samples lie outside both supports of {p} and {q}")
    return ScoreSummary(float(np.mean(scores)), out_of_support)


def hellinger_statistic(p: Distribution, q: Distribution, xs: SampleSet) -> float:
    """T(P, Q, X^n): the sample mean of per-sample scores"""
    return score_samples(p, q, xs).mean


def resolve_verdict(statistic: float, threshold: float, tie_seed: int, out_of_support: int = 0) -> TestDecision:
    """H0 above the threshold, H1 below, a fair coin on exact equality"""
    if statistic > threshold:
        return TestDecision(Verdict.H0_P, statistic, threshold, False, out_of_support)
    if statistic < threshold:
        return TestDecision(Verdict.H1_Q, statistic, threshold, False, out_of_support)
    verdict = Verdict.H0_P if fair_coin(tie_seed) else Verdict.H1_Q
    return TestDecision(verdict, statistic, threshold, True, out_of_support)


def hellinger_decide(p: Distribution, q: Distribution, xs: SampleSet,
                     threshold: float = 0.0, tie_seed: int = 0) -> TestDecision:
    summary = score_samples(p, q, xs)
    return resolve_verdict(summary.mean, threshold, tie_seed, summary.out_of_support)


def log_likelihood_ratio(p: Distribution, q: Distribution, xs: SampleSet) -> Tuple[float, int]:
    """log P(X^n) - log Q(X^n) over the extended reals, plus the out-of-support count.

    A sample impossible under P forces -inf; otherwise one impossible under Q
    forces +inf.
    """
    log_p = p.log_density_array(xs.values)
    log_q = q.log_density_array(xs.values)
    out_of_support = int(np.sum((log_p == -np.inf) & (log_q == -np.inf)))
    if np.any(log_p == -np.inf):
        return -math.inf, out_of_support
    if np.any(log_q == -np.inf):
        return math.inf, out_of_support
    return float(np.sum(log_p - log_q)), out_of_support


def neyman_pearson_decide(p: Distribution, q: Distribution, xs: SampleSet,
                          log_threshold: float = 0.0, tie_seed: int = 0) -> TestDecision:
    statistic, out_of_support = log_likelihood_ratio(p, q, xs)
    return resolve_verdict(statistic, log_threshold, tie_seed, out_of_support)


def scheffe_set(p: Distribution, q: Distribution) -> Tuple[np.ndarray, float, float]:
    """Atoms of S = {x : P(x) >= Q(x)} with P(S) and Q(S)"""
    if not (p.is_discrete and q.is_discrete):
        offender = q if p.is_discrete else p
        raise UnsupportedDistribution(offender.to_literal(), "scheffe_decide")
    grid = p.support_grid(DISCRETE_TAIL_MASS).union(q.support_grid(DISCRETE_TAIL_MASS))
    atoms = grid.points()
    log_p, log_q = p.log_density_array(atoms), q.log_density_array(atoms)
    in_set = (log_p >= log_q) & (log_p > -np.inf)
    return atoms[in_set], float(np.sum(np.exp(log_p[in_set]))), float(np.sum(np.exp(log_q[in_set])))


def scheffe_decide(p: Distribution, q: Distribution, xs: SampleSet, tie_seed: int = 0) -> TestDecision:
    """Compare the empirical frequency of S against P(S) and Q(S)"""
    atoms, p_s, q_s = scheffe_set(p, q)
    frequency = float(np.mean(np.isin(xs.values, atoms)))
    statistic = abs(frequency - q_s) - abs(frequency - p_s)
    return resolve_verdict(statistic, 0.0, tie_seed)


def _statistic_function(test_kind: TestKind) -> Callable[[Distribution, Distribution, SampleSet], float]:
    if test_kind is TestKind.HELLINGER:
        return hellinger_statistic
    if test_kind is TestKind.NEYMAN_PEARSON:
        return lambda p, q, xs: log_likelihood_ratio(p, q, xs)[0]
    raise ValueError(f"thresholds can only be calibrated for hellinger and neyman_pearson, not {test_kind.value}")


def calibrate_threshold(test_kind: TestKind, p: Distribution, q: Distribution, n: int,
                        type1_target: float, trials: int, seed: int) -> float:
    """Largest threshold whose empirical type-I error under P stays within target.

    Candidates are the observed statistics; ties at a candidate count as
    errors. When no candidate qualifies the threshold drops just below the
    smallest statistic.
    """
    if trials < MIN_CALIBRATION_TRIALS:
        raise ValueError(f"calibration needs at least {MIN_CALIBRATION_TRIALS} trials, got {trials}")
    if not 0.0 < type1_target < 1.0:
        raise ValueError(f"type1_target must lie in (0, 1), got {type1_target}")
    statistic = _statistic_function(test_kind)
    values = np.sort(np.array([
        statistic(p, q, p.sample(n, trial_seed(seed, trial, Arm.NULL, Stream.CALIBRATION)))
        for trial in range(trials)
    ]))
    allowed = int(math.floor(type1_target * trials + 1e-9))
    threshold = None
    if allowed >= 1:
        candidate = values[allowed - 1]
        if np.searchsorted(values, candidate, side='right') <= allowed:
            threshold = float(candidate)
        else:
            below = int(np.searchsorted(values, candidate, side='left'))
            if below > 0:
                threshold = float(values[below - 1])
    if threshold is None:
        smallest = float(values[0])
        if smallest == -math.inf:
            raise DegenerateCalibration(smallest, trials)
        if values[-1] == smallest:
            logger.warning(f"All {trials} calibration statistics equal {smallest}; threshold set just below it")
        threshold = float(np.nextafter(smallest, -np.inf))
    logger.info(f"Calibrated {test_kind.value} threshold {threshold:.12g} for n={n} at type-I target {type1_target}")
    return threshold


def _score_moment(p: Distribution, q: Distribution, r: Distribution, power: int) -> float:
    """Exact E_R[score^power]; atom sum for discrete R, quadrature otherwise"""
    if r.is_discrete:
        atoms = r.support_grid(DISCRETE_TAIL_MASS).points()
        log_r = r.log_density_array(atoms)
        scores, _ = log_ratio_score(p.log_density_array(atoms), q.log_density_array(atoms))
        return float(np.sum(np.exp(log_r) * scores ** power))
    grid = r.support_grid(CONTINUOUS_TAIL_MASS)

    def integrand(xs: np.ndarray) -> np.ndarray:
        scores, _ = log_ratio_score(p.log_density_array(xs), q.log_density_array(xs))
        return np.exp(r.log_density_array(xs)) * scores ** power

    return integrate(integrand, grid.lo, grid.hi, grid.breakpoints).value


def expected_score(p: Distribution, q: Distribution, r: Distribution) -> float:
    """E_{X~R}[(P(X)-Q(X))/(P(X)+Q(X))]"""
    return _score_moment(p, q, r, 1)


def score_variance(p: Distribution, q: Distribution, r: Distribution) -> float:
    """Single-sample variance of the score under R"""
    mean = _score_moment(p, q, r, 1)
    return max(_score_moment(p, q, r, 2) - mean * mean, 0.0)
