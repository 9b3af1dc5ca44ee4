"""Randomized verification of the distance inequalities and the score moment bounds.

Laws are finite discrete on atoms 0..k-1 with probabilities from a symmetric
Dirichlet(1); one draw in ten has a coordinate zeroed so that nested supports
come up regularly, and every tenth case splits the atoms between P and Q so
the pair has disjoint supports. Third laws R are pulled toward P by a
log-uniform mixing weight so the robust-testing preconditions are exercised.
"""
import math, logging
import numpy as np
from dataclasses import dataclass, field
from typing import Dict, List, Tuple
from ..models.decision import RobustnessParams
from ..models.distribution import FiniteDiscrete
from ..models.errors import InequalityViolation
from ..models.reports import BoundReport, InequalityCheck
from ..utils.seeding import make_rng
from .divergences import chi2_symmetric, hellinger, kl, total_variation
from .hypothesis_tests import expected_score, score_variance

logger = logging.getLogger(__name__)

INEQUALITY_TOLERANCE = 1e-9
IDENTITY_TOLERANCE = 1e-12
ZEROED_FRACTION = 0.1
DISJOINT_EVERY = 10
VARIANCE_CONSTANT = 55.0
MEAN_BOUND_ALPHA = 0.9
# below (sqrt2 - 1)/(2 sqrt2 - 1), about 0.2265
COMPOSITE_BETA = 0.2
LOG10_MIX_RANGE = (-6.0, 0.0)


@dataclass
class _Tally:
    count: int = 0
    worst: float = math.inf


@dataclass
class SlackLedger:
    """Worst slack per inequality; raises on the first violation"""
    tallies: Dict[str, _Tally] = field(default_factory=dict)

    def record(self, inequality: str, slack: float, laws: Tuple[FiniteDiscrete, ...],
               tolerance: float = INEQUALITY_TOLERANCE) -> None:
        tally = self.tallies.setdefault(inequality, _Tally())
        tally.count += 1
        tally.worst = min(tally.worst, slack)
        if slack < -tolerance or math.isnan(slack):
            raise InequalityViolation(inequality, slack, tuple(law.to_literal() for law in laws))

    def touch(self, inequality: str) -> None:
        self.tallies.setdefault(inequality, _Tally())

    def checks(self) -> Tuple[InequalityCheck, ...]:
        return tuple(InequalityCheck(name, t.count, t.worst if t.count else 0.0) for name, t in self.tallies.items())


def _dirichlet(rng: np.random.Generator, k: int) -> np.ndarray:
    probs = rng.dirichlet(np.ones(k))
    if rng.random() < ZEROED_FRACTION:
        probs[rng.integers(k)] = 0.0
        probs = probs / probs.sum()
    return probs


def _law(probs: np.ndarray) -> FiniteDiscrete:
    return FiniteDiscrete(tuple(float(i) for i in range(probs.size)), tuple(probs.tolist()))


def _disjoint(rng: np.random.Generator, k: int) -> Tuple[np.ndarray, np.ndarray]:
    cut = int(rng.integers(1, k))
    p, q = np.zeros(k), np.zeros(k)
    p[:cut] = rng.dirichlet(np.ones(cut))
    q[cut:] = rng.dirichlet(np.ones(k - cut))
    return p, q


def random_triple(rng: np.random.Generator, max_support: int,
                  disjoint: bool = False) -> Tuple[FiniteDiscrete, FiniteDiscrete, FiniteDiscrete]:
    """P and Q from the Dirichlet generator, R = (1 - lambda) P + lambda D"""
    k = int(rng.integers(2, max_support + 1))
    p, q = _disjoint(rng, k) if disjoint else (_dirichlet(rng, k), _dirichlet(rng, k))
    d = _dirichlet(rng, k)
    weight = 10.0 ** rng.uniform(*LOG10_MIX_RANGE)
    r = (1.0 - weight) * p + weight * d
    return _law(p), _law(q), _law(r / r.sum())


def _check_pair(ledger: SlackLedger, p: FiniteDiscrete, q: FiniteDiscrete) -> None:
    laws = (p, q)
    h = hellinger(p, q).value
    h2 = h * h
    tv = total_variation(p, q).value
    chi2 = chi2_symmetric(p, q).value
    ledger.record("half_tv_squared_le_h2", h2 - 0.5 * tv * tv, laws)
    ledger.record("h2_le_tv", tv - h2, laws)
    ledger.record("quarter_chi2_le_h2", h2 - 0.25 * chi2, laws)
    ledger.record("h2_le_half_chi2", 0.5 * chi2 - h2, laws)
    ledger.record("h2_le_half_kl", 0.5 * kl(p, q).value - h2, laws)
    ledger.record("hellinger_symmetric", -abs(h - hellinger(q, p).value), laws, IDENTITY_TOLERANCE)
    ledger.record("score_mean_under_p", -abs(expected_score(p, q, p) - 0.5 * chi2), laws, IDENTITY_TOLERANCE)
    ledger.record("score_mean_under_q", -abs(expected_score(p, q, q) + 0.5 * chi2), laws, IDENTITY_TOLERANCE)

    ledger.touch("disjoint_support_extremes")
    masses_p, masses_q = np.array(p.probs), np.array(q.probs)
    if not np.any((masses_p > 0) & (masses_q > 0)):
        ledger.record("disjoint_support_extremes", -max(abs(h2 - 1.0), abs(tv - 1.0), abs(chi2 - 2.0)), laws,
                      IDENTITY_TOLERANCE)


def _check_triple(ledger: SlackLedger, p: FiniteDiscrete, q: FiniteDiscrete, r: FiniteDiscrete,
                  robust: RobustnessParams) -> None:
    laws = (p, q, r)
    h_pq, h_pr, h_qr = hellinger(p, q).value, hellinger(p, r).value, hellinger(q, r).value
    ledger.record("hellinger_triangle", h_pr + h_qr - h_pq, laws)

    variance = score_variance(p, q, r)
    ledger.record("score_variance_le_55_max_h2", VARIANCE_CONSTANT * max(h_pr, h_qr) ** 2 - variance, laws)

    ledger.touch("score_mean_ge_robust_bound")
    if h_qr >= robust.gamma * h_pr:
        ledger.record("score_mean_ge_robust_bound", expected_score(p, q, r) - robust.mean_factor * h_qr ** 2, laws)

    beta = COMPOSITE_BETA
    preconditions = {
        "composite_hellinger": h_pr <= beta * h_pq,
        "composite_tv": total_variation(p, r).value <= beta ** 2 * h_pq ** 2,
        "composite_kl_pr": kl(p, r).value <= 2 * beta ** 2 * h_pq ** 2,
        "composite_kl_rp": kl(r, p).value <= 2 * beta ** 2 * h_pq ** 2,
    }
    for name, holds in preconditions.items():
        ledger.touch(name)
        if holds:
            slack = min(beta * h_pq - h_pr, h_qr - (1.0 / beta - 1.0) * h_pr)
            ledger.record(name, slack, laws)


def bound_suite(num_pairs: int, max_support: int, seed: int) -> BoundReport:
    """Check every inequality on num_pairs random laws and report the worst slack of each.

    The first pair is P = Q = R. Raises InequalityViolation on the first
    inequality that fails by more than its tolerance.
    """
    if num_pairs < 1:
        raise ValueError(f"num_pairs must be positive, got {num_pairs}")
    if max_support < 2:
        raise ValueError(f"max_support must be at least 2, got {max_support}")
    rng = make_rng(seed)
    robust = RobustnessParams.from_alpha(MEAN_BOUND_ALPHA)
    ledger = SlackLedger()
    triples: List[Tuple[FiniteDiscrete, FiniteDiscrete, FiniteDiscrete]] = []
    for index in range(num_pairs):
        if index == 0:
            p = _law(_dirichlet(rng, max_support))
            triples.append((p, p, p))
        else:
            triples.append(random_triple(rng, max_support, disjoint=index % DISJOINT_EVERY == DISJOINT_EVERY - 1))

    for p, q, r in triples:
        _check_pair(ledger, p, q)
        _check_triple(ledger, p, q, r, robust)
    report = BoundReport(ledger.checks(), num_pairs, max_support, seed)
    for check in report.checks:
        logger.info(f"{check.inequality}: worst slack {check.worst_slack:.3e} over {check.pairs_checked} cases")
    return report
