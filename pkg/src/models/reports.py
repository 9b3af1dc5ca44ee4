"""Result records of experiments and reproductions.

Each report knows its CSV header and rows; formatting of the individual values
is left to the report writer.
"""
import math
from dataclasses import dataclass
from typing import Any, ClassVar, List, Optional, Tuple
from .decision import RobustnessParams, TestDecision, TestKind, Verdict
from .distribution import Distribution
from .divergence_result import DivergenceResult
from .experiment import ErrorEstimate

Row = List[Any]


@dataclass(frozen=True)
class DistanceReport:
    """Named distances between two laws"""
    entries: Tuple[Tuple[str, DivergenceResult], ...]

    HEADER: ClassVar[Tuple[str, ...]] = ("metric", "value", "method", "abs_error_bound")

    def rows(self) -> List[Row]:
        return [[metric, result.value, result.method, result.abs_error_bound] for metric, result in self.entries]


@dataclass(frozen=True)
class DecisionReport:
    test_kind: TestKind
    n: int
    decision: TestDecision

    HEADER: ClassVar[Tuple[str, ...]] = ("test", "n", "verdict", "statistic", "threshold", "tie_broken", "out_of_support")

    def rows(self) -> List[Row]:
        d = self.decision
        return [[self.test_kind.value, self.n, d.verdict, d.statistic, d.threshold, d.tie_broken, d.out_of_support]]


@dataclass(frozen=True)
class SimulationReport:
    estimates: Tuple[ErrorEstimate, ...]

    HEADER: ClassVar[Tuple[str, ...]] = ("n", "type_i", "type_ii", "max_error", "trials", "half_width")

    def rows(self) -> List[Row]:
        return [[e.n, e.type_i, e.type_ii, e.max_error, e.trials, e.half_width] for e in self.estimates]


@dataclass(frozen=True)
class ComplexityReport:
    """Measured sample complexity against the Hellinger prediction log(1/delta)/H^2"""
    test_kind: TestKind
    target_delta: float
    n_hat: int
    hellinger_squared: float

    HEADER: ClassVar[Tuple[str, ...]] = ("test", "target_delta", "n_hat", "hellinger_squared", "n_hat_h2", "normalized")

    @property
    def n_hat_h2(self) -> float:
        return self.n_hat * self.hellinger_squared

    @property
    def normalized(self) -> float:
        """n_hat * H^2 / ln(1/delta)"""
        return self.n_hat_h2 / math.log(1.0 / self.target_delta)

    def rows(self) -> List[Row]:
        return [[self.test_kind.value, self.target_delta, self.n_hat, self.hellinger_squared, self.n_hat_h2, self.normalized]]


@dataclass(frozen=True)
class SweepRow:
    """Outcome of testing P against Q on samples from one perturbed R"""
    r: Distribution
    estimate: ErrorEstimate
    gamma_observed: float
    h_pr: float
    h_qr: float
    closer: Optional[Verdict]  # None when R is equally far from P and Q
    robust: Optional[Verdict] = None  # hypothesis holding with the sweep's gamma slack, None inside the gap

    @property
    def correct_rate(self) -> float:
        return self.estimate.correct_rate


@dataclass(frozen=True)
class SweepReport:
    entries: Tuple[SweepRow, ...]

    HEADER: ClassVar[Tuple[str, ...]] = ("r_literal", "gamma_observed", "correct_rate", "trials")

    def rows(self) -> List[Row]:
        return [[row.r.to_literal(), row.gamma_observed, row.correct_rate, row.estimate.trials] for row in self.entries]

    def __iter__(self):
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class NpCounterexampleReport:
    """Likelihood-ratio failure under a tiny perturbation of a point mass"""
    gamma: float
    delta: float
    n: int
    trials: int
    h_pr: float
    h_qr: float
    np_h1_rate: float
    hellinger_h0_rate: float

    HEADER: ClassVar[Tuple[str, ...]] = ("gamma", "delta", "n", "trials", "h_pr", "h_pr_bound", "h_qr", "h_qr_bound",
                                         "np_h1_rate", "hellinger_h0_rate")

    @property
    def h_pr_bound(self) -> float:
        return 1.0 / (4.0 * self.gamma)

    @property
    def h_qr_bound(self) -> float:
        return 1.0 / 3.0

    @property
    def distances_hold(self) -> bool:
        return self.h_pr <= self.h_pr_bound and self.h_qr >= self.h_qr_bound

    def rows(self) -> List[Row]:
        return [[self.gamma, self.delta, self.n, self.trials, self.h_pr, self.h_pr_bound,
                 self.h_qr, self.h_qr_bound, self.np_h1_rate, self.hellinger_h0_rate]]


@dataclass(frozen=True)
class ScheffeGapReport:
    """Sample complexities of the Scheffe and Hellinger tests on a three-symbol pair"""
    k: float
    delta: float
    p_s: float
    q_s: float
    hellinger_squared: float
    n_scheffe: int
    n_hellinger: int

    HEADER: ClassVar[Tuple[str, ...]] = ("k", "epsilon", "delta", "p_s", "q_s", "hellinger_squared",
                                         "n_scheffe", "n_hellinger", "ratio")

    @property
    def epsilon(self) -> float:
        return 1.0 / (2.0 * self.k)

    @property
    def ratio(self) -> float:
        return self.n_scheffe / self.n_hellinger

    def rows(self) -> List[Row]:
        return [[self.k, self.epsilon, self.delta, self.p_s, self.q_s, self.hellinger_squared,
                 self.n_scheffe, self.n_hellinger, self.ratio]]


@dataclass(frozen=True)
class ZeroMeanRow:
    epsilon: float
    expectation: float
    ratio: float  # H^2(Q,R) / H^2(P,R)


@dataclass(frozen=True)
class ZeroMeanReport:
    """Pairs whose Hellinger score has mean exactly zero under R"""
    entries: Tuple[ZeroMeanRow, ...]

    HEADER: ClassVar[Tuple[str, ...]] = ("epsilon", "expectation", "ratio", "limit")
    LIMIT: ClassVar[float] = RobustnessParams.ZERO_MEAN_GAMMA ** 2

    def rows(self) -> List[Row]:
        return [[row.epsilon, row.expectation, row.ratio, self.LIMIT] for row in self.entries]

    def __iter__(self):
        return iter(self.entries)


@dataclass(frozen=True)
class InequalityCheck:
    """Worst slack of one inequality over a random corpus; slack < 0 is a violation"""
    inequality: str
    pairs_checked: int
    worst_slack: float


@dataclass(frozen=True)
class BoundReport:
    checks: Tuple[InequalityCheck, ...]
    num_pairs: int
    max_support: int
    seed: int

    HEADER: ClassVar[Tuple[str, ...]] = ("inequality", "pairs_checked", "worst_slack")

    def rows(self) -> List[Row]:
        return [[c.inequality, c.pairs_checked, c.worst_slack] for c in self.checks]

    def check(self, inequality: str) -> InequalityCheck:
        for c in self.checks:
            if c.inequality == inequality:
                return c
        raise KeyError(inequality)


@dataclass(frozen=True)
class TournamentReport:
    """How often each candidate won the round-robin over independent samples"""
    candidates: Tuple[Distribution, ...]
    selections: Tuple[int, ...]
    trials: int

    HEADER: ClassVar[Tuple[str, ...]] = ("index", "candidate", "selections", "trials", "rate")

    @property
    def winner(self) -> int:
        return max(range(len(self.candidates)), key=lambda i: (self.selections[i], -i))

    def rows(self) -> List[Row]:
        return [[i, c.to_literal(), s, self.trials, s / self.trials]
                for i, (c, s) in enumerate(zip(self.candidates, self.selections))]
