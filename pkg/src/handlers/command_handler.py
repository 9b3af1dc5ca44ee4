import logging
from argparse import Namespace
from typing import Optional
from ..models.decision import DpParams, TestKind
from ..models.distribution import Distribution
from ..models.errors import UsageError
from ..models.experiment import ExperimentSpec, ThresholdPolicy
from ..models.reports import ComplexityReport, DecisionReport, DistanceReport, SimulationReport
from ..models.sample_set import SampleSet
from ..services import divergences
from ..services.bound_suite import bound_suite
from ..services.experiments import (estimate_grid, robustness_sweep, sample_complexity_search,
                                    tournament_trials)
from ..services.hypothesis_tests import hellinger_decide, neyman_pearson_decide, scheffe_decide
from ..services.privacy import dp_hellinger_decide
from ..services.reproductions import repro_np_counterexample, repro_scheffe_gap, repro_zero_mean
from ..services.trial_runner import TrialRunner
from ..utils.config import Settings
from ..utils.seeding import Arm

logger = logging.getLogger(__name__)

METRICS = ("hellinger", "total_variation", "chi2_symmetric", "kl", "delta_max")
REPRODUCTIONS = ("np-counterexample", "scheffe-gap", "zero-mean")


def _require(args: Namespace, *names: str) -> None:
    for name in names:
        if getattr(args, name, None) is None:
            flag = "--" + name.replace('_', '-')
            raise UsageError(f"{flag} is required for {args.command}", flag)


class CommandHandler:
    """Runs parsed subcommands against the library and returns their reports"""

    def __init__(self, settings: Settings):
        self.settings = settings

    def handle(self, args: Namespace):
        logger.info(f"Running {args.command}")
        return getattr(self, f"handle_{args.command}")(args)

    def _runner(self, args: Namespace) -> TrialRunner:
        workers = getattr(args, 'workers', None)
        return TrialRunner(self.settings.workers if workers is None else workers)

    def _dp(self, args: Namespace) -> Optional[DpParams]:
        if args.test is not TestKind.DP_HELLINGER:
            return None
        _require(args, 'epsilon')
        delta_pq = args.delta_pq
        if delta_pq == 'auto':
            _require(args, 'p', 'q')
            delta_pq = divergences.delta_max(args.p, args.q).value
        return DpParams(args.epsilon, None if delta_pq == 'unknown' else delta_pq, args.noise_seed)

    def _spec(self, args: Namespace, n_grid, r: Optional[Distribution] = None, r_arm: Arm = Arm.NULL) -> ExperimentSpec:
        _require(args, 'p', 'q')
        if args.threshold == 'calibrated':
            policy = ThresholdPolicy.calibrated(args.type1_target, args.calib_trials)
        else:
            policy = ThresholdPolicy.zero()
        return ExperimentSpec(args.p, args.q, args.test, tuple(n_grid), args.trials, policy, args.seed,
                              r=r, r_arm=r_arm, dp=self._dp(args))

    def handle_distance(self, args: Namespace) -> DistanceReport:
        """Distances between --p and --q"""
        _require(args, 'p', 'q')
        metrics = METRICS if args.metric == 'all' else (args.metric,)
        closed = not args.quadrature
        compute = {
            "hellinger": lambda: divergences.hellinger(args.p, args.q, prefer_closed_form=closed),
            "total_variation": lambda: divergences.total_variation(args.p, args.q, prefer_closed_form=closed),
            "chi2_symmetric": lambda: divergences.chi2_symmetric(args.p, args.q),
            "kl": lambda: divergences.kl(args.p, args.q, prefer_closed_form=closed),
            "delta_max": lambda: divergences.delta_max(args.p, args.q),
        }
        return DistanceReport(tuple((metric, compute[metric]()) for metric in metrics))

    def handle_test(self, args: Namespace) -> DecisionReport:
        """One decision on explicit --samples or on --n draws from --source"""
        _require(args, 'p', 'q')
        if args.samples is not None:
            xs = SampleSet.of(args.samples, "cli")
        else:
            _require(args, 'source', 'n')
            xs = args.source.sample(args.n, args.seed)
        kind = args.test
        if kind is TestKind.HELLINGER:
            decision = hellinger_decide(args.p, args.q, xs, args.threshold, args.tie_seed)
        elif kind is TestKind.NEYMAN_PEARSON:
            decision = neyman_pearson_decide(args.p, args.q, xs, args.threshold, args.tie_seed)
        elif kind is TestKind.SCHEFFE:
            decision = scheffe_decide(args.p, args.q, xs, args.tie_seed)
        else:
            decision = dp_hellinger_decide(args.p, args.q, xs, self._dp(args), args.threshold, args.tie_seed)
        return DecisionReport(kind, xs.n, decision)

    def handle_simulate(self, args: Namespace) -> SimulationReport:
        spec = self._spec(args, args.n, args.r, args.r_arm)
        return SimulationReport(tuple(estimate_grid(spec, self._runner(args))))

    def handle_complexity(self, args: Namespace) -> ComplexityReport:
        spec = self._spec(args, (1,))
        max_n = self.settings.max_n if args.max_n is None else args.max_n
        n_hat = sample_complexity_search(spec, args.delta, max_n, self._runner(args))
        return ComplexityReport(spec.test_kind, args.delta, n_hat, divergences.hellinger_squared(spec.p, spec.q))

    def handle_sweep(self, args: Namespace):
        _require(args, 'r')
        spec = self._spec(args, (args.n,))
        return robustness_sweep(spec, args.r, self._runner(args))

    def handle_repro(self, args: Namespace):
        _require(args, 'which')
        runner = self._runner(args)
        if args.which == 'np-counterexample':
            delta = 0.05 if args.delta is None else args.delta
            return repro_np_counterexample(args.gamma, delta, args.seed, args.trials, runner)
        if args.which == 'scheffe-gap':
            delta = 0.1 if args.delta is None else args.delta
            max_n = self.settings.max_n if args.max_n is None else args.max_n
            return repro_scheffe_gap(args.k, delta, args.seed, args.trials, max_n, runner)
        return repro_zero_mean(args.eps)

    def handle_bounds(self, args: Namespace):
        return bound_suite(args.pairs, args.max_support, args.seed)

    def handle_tournament(self, args: Namespace):
        _require(args, 'candidates', 'truth')
        return tournament_trials(args.candidates, args.truth, args.n, args.trials, args.seed, self._runner(args))
