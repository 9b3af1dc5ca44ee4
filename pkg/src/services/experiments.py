"""Monte-Carlo harness: error estimation, sample-complexity search, robustness
sweeps and tournament selection.

Every trial draws its sample from a seed derived from (experiment seed, trial index,
arm), so results are reproducible bit for bit and independent of how trials
are spread across workers.
"""
import math, logging
import numpy as np
from dataclasses import replace
from functools import partial
from typing import Dict, List, Optional, Sequence
from ..models.decision import RobustnessParams, TestDecision, TestKind, Verdict
from ..models.distribution import Distribution
from ..models.errors import BudgetExceeded
from ..models.experiment import ErrorEstimate, ExperimentSpec, PolicyKind, Z_95
from ..models.reports import SweepReport, SweepRow, TournamentReport
from ..models.sample_set import SampleSet
from ..utils.seeding import Arm, Stream, derive_seed, trial_seed
from .divergences import hellinger
from .hypothesis_tests import (calibrate_threshold, hellinger_decide, hellinger_statistic,
                               neyman_pearson_decide, scheffe_decide)
from .privacy import dp_hellinger_decide
from .trial_runner import TrialRunner

logger = logging.getLogger(__name__)

DEFAULT_MAX_N = 2 ** 20
# |H(P,R) - H(Q,R)| below this counts as equidistant
DISTANCE_TIE = 1e-12
BISECTION_RELATIVE_WIDTH = 0.1

_INLINE = TrialRunner(1)


def decide(spec: ExperimentSpec, xs: SampleSet, threshold: float, trial: int, arm: Arm) -> TestDecision:
    """Run the experiment's test on xs with tie and noise seeds derived for this trial"""
    tie_seed = trial_seed(spec.seed, trial, arm, Stream.TIE_BREAK)
    kind = spec.test_kind
    if kind is TestKind.HELLINGER:
        return hellinger_decide(spec.p, spec.q, xs, threshold, tie_seed)
    if kind is TestKind.NEYMAN_PEARSON:
        return neyman_pearson_decide(spec.p, spec.q, xs, threshold, tie_seed)
    if kind is TestKind.SCHEFFE:
        return scheffe_decide(spec.p, spec.q, xs, tie_seed)
    dp = replace(spec.dp, noise_seed=trial_seed(spec.seed, trial, arm, Stream.NOISE))
    return dp_hellinger_decide(spec.p, spec.q, xs, dp, threshold, tie_seed)


def resolve_threshold(spec: ExperimentSpec, n: int) -> float:
    policy = spec.threshold_policy
    if policy.kind is PolicyKind.ZERO:
        return 0.0
    if spec.test_kind not in (TestKind.HELLINGER, TestKind.NEYMAN_PEARSON):
        raise ValueError(f"calibrated thresholds are not available for {spec.test_kind.value}")
    return calibrate_threshold(spec.test_kind, spec.p, spec.q, n, policy.type1_target,
                               policy.calib_trials, derive_seed(spec.seed, n))


def _arm_error(spec: ExperimentSpec, n: int, threshold: float, arm: Arm, trial: int) -> bool:
    """True when the trial's verdict misses the arm's nominal hypothesis"""
    xs = spec.source(arm).sample(n, trial_seed(spec.seed, trial, arm), source_label=arm.name.lower())
    nominal = Verdict.H0_P if arm is Arm.NULL else Verdict.H1_Q
    return decide(spec, xs, threshold, trial, arm).verdict is not nominal


def estimate_error(spec: ExperimentSpec, n: int, runner: Optional[TrialRunner] = None) -> ErrorEstimate:
    """Type-I and type-II error frequencies of the experiment's test at sample size n"""
    if n < 1:
        raise ValueError(f"sample size must be positive, got {n}")
    runner = runner or _INLINE
    threshold = resolve_threshold(spec, n)
    errors = {
        arm: runner.count(partial(_arm_error, spec, n, threshold, arm), spec.trials)[True]
        for arm in (Arm.NULL, Arm.ALTERNATIVE)
    }
    estimate = ErrorEstimate.from_counts(n, errors[Arm.NULL], errors[Arm.ALTERNATIVE], spec.trials)
    logger.debug(f"{spec.test_kind.value} n={n}: type I {estimate.type_i:.4f}, type II {estimate.type_ii:.4f}")
    return estimate


def estimate_grid(spec: ExperimentSpec, runner: Optional[TrialRunner] = None) -> List[ErrorEstimate]:
    return [estimate_error(spec, n, runner) for n in spec.n_grid]


def trials_for_delta(target_delta: float) -> int:
    """Trials that keep the 95% half-width at max_error = delta within delta/4"""
    return math.ceil((4 * Z_95) ** 2 * (1.0 - target_delta) / target_delta)


def sample_complexity_search(spec: ExperimentSpec, target_delta: float, max_n: int = DEFAULT_MAX_N,
                             runner: Optional[TrialRunner] = None) -> int:
    """Smallest n on a doubling-then-bisection grid whose estimated max error is at most target_delta"""
    if not 0.0 < target_delta < 0.5:
        raise ValueError(f"target_delta must lie in (0, 0.5), got {target_delta}")
    search_spec = spec.with_updates(trials=max(spec.trials, trials_for_delta(target_delta)))
    cache: Dict[int, bool] = {}

    def succeeds(n: int) -> bool:
        if n not in cache:
            cache[n] = estimate_error(search_spec, n, runner).max_error <= target_delta
        return cache[n]

    lo, hi = 0, 1
    while not succeeds(hi):
        if hi >= max_n:
            raise BudgetExceeded(max_n, hi)
        lo, hi = hi, min(2 * hi, max_n)
    logger.info(f"{spec.test_kind.value}: error {target_delta} first reached in ({lo}, {hi}]")

    while hi - lo > max(1.0, BISECTION_RELATIVE_WIDTH * hi):
        mid = (lo + hi) // 2
        if succeeds(mid):
            hi = mid
        else:
            lo = mid
    logger.info(f"{spec.test_kind.value}: sample complexity {hi} at delta {target_delta} ({len(cache)} sizes tried)")
    return hi


def _closer_hypothesis(h_pr: float, h_qr: float) -> Optional[Verdict]:
    if abs(h_pr - h_qr) < DISTANCE_TIE:
        return None
    return Verdict.H0_P if h_pr < h_qr else Verdict.H1_Q


def _observed_gamma(h_pr: float, h_qr: float) -> float:
    near, far = sorted((h_pr, h_qr))
    if far == 0.0:
        return 1.0
    return math.inf if near == 0.0 else far / near


def _sweep_error(spec: ExperimentSpec, r: Distribution, n: int, threshold: float,
                 closer: Optional[Verdict], trial: int) -> bool:
    xs = r.sample(n, trial_seed(spec.seed, trial, Arm.PERTURBED), source_label="perturbed")
    verdict = decide(spec, xs, threshold, trial, Arm.PERTURBED).verdict
    return closer is not None and verdict is not closer


def robustness_sweep(spec: ExperimentSpec, r_family: Sequence[Distribution],
                     runner: Optional[TrialRunner] = None) -> SweepReport:
    """Test P against Q on samples from each R, graded against the Hellinger-closer hypothesis.

    Runs at the largest sample size of the experiment's n_grid.
    """
    if not r_family:
        raise ValueError("r_family must not be empty")
    runner = runner or _INLINE
    n = spec.n_grid[-1]
    threshold = resolve_threshold(spec, n)
    robustness = spec.robustness or RobustnessParams(RobustnessParams.ROBUST_GAMMA)
    rows = []
    for r in r_family:
        h_pr, h_qr = hellinger(spec.p, r).value, hellinger(spec.q, r).value
        closer = _closer_hypothesis(h_pr, h_qr)
        wrong = runner.count(partial(_sweep_error, spec, r, n, threshold, closer), spec.trials)[True]
        if closer is Verdict.H1_Q:
            estimate = ErrorEstimate.from_counts(n, 0, wrong, spec.trials)
        else:
            estimate = ErrorEstimate.from_counts(n, wrong, 0, spec.trials)
        row = SweepRow(r, estimate, _observed_gamma(h_pr, h_qr), h_pr, h_qr, closer, robustness.classify(h_pr, h_qr))
        region = row.robust.value if row.robust else "none"
        logger.info(f"Sweep R={r}: gamma {row.gamma_observed:.4g} (robust region {region} at gamma {robustness.gamma:.4g}), "
                    f"correct rate {row.correct_rate:.4f}")
        rows.append(row)
    return SweepReport(tuple(rows))


def tournament_select(candidates: Sequence[Distribution], xs: SampleSet) -> int:
    """Round-robin Hellinger tests on one sample; most wins, lowest index on ties.

    A pair whose statistic is exactly zero awards no win.
    """
    if len(candidates) < 2:
        raise ValueError(f"a tournament needs at least 2 candidates, got {len(candidates)}")
    wins = np.zeros(len(candidates), dtype=int)
    for i in range(len(candidates)):
        for j in range(i + 1, len(candidates)):
            statistic = hellinger_statistic(candidates[i], candidates[j], xs)
            if statistic > 0:
                wins[i] += 1
            elif statistic < 0:
                wins[j] += 1
    logger.debug(f"Tournament wins: {wins.tolist()}")
    return int(np.argmax(wins))


def _tournament_trial(candidates: Sequence[Distribution], truth: Distribution, n: int, seed: int, trial: int) -> int:
    return tournament_select(candidates, truth.sample(n, trial_seed(seed, trial, Arm.PERTURBED)))


def tournament_trials(candidates: Sequence[Distribution], truth: Distribution, n: int, trials: int, seed: int,
                      runner: Optional[TrialRunner] = None) -> TournamentReport:
    """How often each candidate is selected over independent samples from truth"""
    runner = runner or _INLINE
    counts = runner.count(partial(_tournament_trial, tuple(candidates), truth, n, seed), trials)
    return TournamentReport(tuple(candidates), tuple(counts[i] for i in range(len(candidates))), trials)
