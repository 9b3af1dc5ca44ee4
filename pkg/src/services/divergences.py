"""Statistical distances between laws.

Discrete pairs are summed exactly over the union of atoms, Gaussian pairs use
closed forms where they exist, and every other continuous pair is integrated
adaptively over the union of the truncated supports. All arithmetic starts from
log-densities; plain densities appear only inside the integrands.
"""
import math, logging
import numpy as np
from typing import Callable, Tuple
from scipy.special import erf
from ..models.distribution import Distribution, Gaussian, SupportGrid
from ..models.divergence_result import DivergenceResult, DivergenceMethod
from ..models.errors import QuadratureNotConverged
from ..utils.quadrature import integrate, ABS_TOLERANCE

logger = logging.getLogger(__name__)

DISCRETE_TAIL_MASS = 1e-14
CONTINUOUS_TAIL_MASS = 1e-9
DELTA_GRID_POINTS = 8193
TAIL_PROBE_SCALES = (1.0, 10.0, 1e3, 1e6)


def log_ratio_score(log_p: np.ndarray, log_q: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """(P-Q)/(P+Q) evaluated as tanh of half the log-ratio.

    Returns the scores and a mask of points where both densities vanish; those
    points score 0.
    """
    log_p = np.asarray(log_p, dtype=float)
    log_q = np.asarray(log_q, dtype=float)
    both_zero = (log_p == -np.inf) & (log_q == -np.inf)
    with np.errstate(invalid='ignore'):
        scores = np.tanh(0.5 * (log_p - log_q))
    return np.where(both_zero, 0.0, scores), both_zero


def _is_singular(p: Distribution, q: Distribution) -> bool:
    """A discrete law and a continuous law are mutually singular"""
    return p.is_discrete != q.is_discrete


def _both_gaussian(p: Distribution, q: Distribution) -> bool:
    return isinstance(p, Gaussian) and isinstance(q, Gaussian)


def _discrete_masses(p: Distribution, q: Distribution) -> Tuple[np.ndarray, np.ndarray, np.ndarray, float]:
    """Log masses of both laws over the union of their atoms, plus dropped tail mass"""
    grid = p.support_grid(DISCRETE_TAIL_MASS).union(q.support_grid(DISCRETE_TAIL_MASS))
    atoms = grid.points()
    return atoms, p.log_density_array(atoms), q.log_density_array(atoms), grid.truncated_mass


def _continuous_grid(p: Distribution, q: Distribution) -> SupportGrid:
    return p.support_grid(CONTINUOUS_TAIL_MASS).union(q.support_grid(CONTINUOUS_TAIL_MASS))


def _integrate_pair(name: str, p: Distribution, q: Distribution,
                    integrand: Callable[[np.ndarray, np.ndarray], np.ndarray]) -> Tuple[float, float, bool]:
    """Integrate integrand(log_p, log_q) over the pair's support; returns value, bound, converged"""
    grid = _continuous_grid(p, q)
    outcome = integrate(
        lambda xs: integrand(p.log_density_array(xs), q.log_density_array(xs)),
        grid.lo, grid.hi, grid.breakpoints
    )
    logger.debug(f"{name}({p}, {q}) quadrature: {outcome.value:.12g} +/- {outcome.abs_error:.2e} in {outcome.evaluations} evaluations")
    return max(outcome.value, 0.0), outcome.abs_error + grid.truncated_mass, outcome.converged


def _finish(name: str, value: float, bound: float, converged: bool) -> DivergenceResult:
    result = DivergenceResult(value, DivergenceMethod.QUADRATURE, bound)
    if not converged:
        raise QuadratureNotConverged(f"{name} quadrature missed the {ABS_TOLERANCE:g} target (bound {bound:.3e})", result)
    return result


def _hellinger_from_squared(h2: float, h2_bound: float, method: DivergenceMethod) -> DivergenceResult:
    h2 = min(max(h2, 0.0), 1.0)
    value = math.sqrt(h2)
    if h2_bound == 0:
        return DivergenceResult(value, method, 0.0)
    bound = math.sqrt(min(h2 + h2_bound, 1.0)) - math.sqrt(max(h2 - h2_bound, 0.0))
    return DivergenceResult(value, method, bound)


def _hellinger_integrand(log_p: np.ndarray, log_q: np.ndarray) -> np.ndarray:
    return 0.5 * (np.exp(0.5 * log_p) - np.exp(0.5 * log_q)) ** 2


def hellinger(p: Distribution, q: Distribution, prefer_closed_form: bool = True) -> DivergenceResult:
    """H(P,Q) = ||sqrt(P) - sqrt(Q)||_2 / sqrt(2)"""
    if _is_singular(p, q):
        return DivergenceResult(1.0, DivergenceMethod.CLOSED_FORM)
    if p.is_discrete:
        _, log_p, log_q, dropped = _discrete_masses(p, q)
        h2 = float(np.sum(_hellinger_integrand(log_p, log_q)))
        return _hellinger_from_squared(h2, dropped, DivergenceMethod.EXACT_DISCRETE)
    if prefer_closed_form and _both_gaussian(p, q):
        variance_sum = p.std ** 2 + q.std ** 2
        log_bc = 0.5 * math.log(2 * p.std * q.std / variance_sum) - (p.mean - q.mean) ** 2 / (4 * variance_sum)
        return _hellinger_from_squared(-math.expm1(log_bc), 0.0, DivergenceMethod.CLOSED_FORM)
    h2, h2_bound, converged = _integrate_pair("hellinger", p, q, _hellinger_integrand)
    result = _hellinger_from_squared(h2, h2_bound, DivergenceMethod.QUADRATURE)
    if not converged:
        raise QuadratureNotConverged(
            f"hellinger quadrature missed the {ABS_TOLERANCE:g} target (squared bound {h2_bound:.3e})", result)
    return result


def hellinger_squared(p: Distribution, q: Distribution) -> float:
    return hellinger(p, q).value ** 2


def _tv_integrand(log_p: np.ndarray, log_q: np.ndarray) -> np.ndarray:
    return 0.5 * np.abs(np.exp(log_p) - np.exp(log_q))


def total_variation(p: Distribution, q: Distribution, prefer_closed_form: bool = True) -> DivergenceResult:
    """TV(P,Q) = ||P - Q||_1 / 2"""
    if _is_singular(p, q):
        return DivergenceResult(1.0, DivergenceMethod.CLOSED_FORM)
    if p.is_discrete:
        _, log_p, log_q, dropped = _discrete_masses(p, q)
        value = min(float(np.sum(_tv_integrand(log_p, log_q))), 1.0)
        return DivergenceResult(value, DivergenceMethod.EXACT_DISCRETE, dropped)
    if prefer_closed_form and _both_gaussian(p, q) and p.std == q.std:
        value = float(erf(abs(p.mean - q.mean) / (2 * math.sqrt(2) * p.std)))
        return DivergenceResult(value, DivergenceMethod.CLOSED_FORM)
    value, bound, converged = _integrate_pair("total_variation", p, q, _tv_integrand)
    return _finish("total_variation", min(value, 1.0), bound, converged)


def _chi2_integrand(log_p: np.ndarray, log_q: np.ndarray) -> np.ndarray:
    scores, both_zero = log_ratio_score(log_p, log_q)
    mass = np.exp(np.logaddexp(log_p, log_q))
    return np.where(both_zero, 0.0, mass * scores * scores)


def chi2_symmetric(p: Distribution, q: Distribution) -> DivergenceResult:
    """Symmetric chi-squared: integral of (P-Q)^2/(P+Q), 0 where both vanish"""
    if _is_singular(p, q):
        return DivergenceResult(2.0, DivergenceMethod.CLOSED_FORM)
    if p.is_discrete:
        _, log_p, log_q, dropped = _discrete_masses(p, q)
        masses_p, masses_q = np.exp(log_p), np.exp(log_q)
        total = masses_p + masses_q
        positive = total > 0
        value = float(np.sum((masses_p[positive] - masses_q[positive]) ** 2 / total[positive]))
        return DivergenceResult(value, DivergenceMethod.EXACT_DISCRETE, 2 * dropped)
    value, bound, converged = _integrate_pair("chi2_symmetric", p, q, _chi2_integrand)
    return _finish("chi2_symmetric", value, 2 * bound, converged)


def _kl_integrand(log_p: np.ndarray, log_q: np.ndarray) -> np.ndarray:
    with np.errstate(invalid='ignore'):
        terms = np.exp(log_p) * (log_p - log_q)
    return np.where(log_p == -np.inf, 0.0, terms)


def kl(p: Distribution, q: Distribution, prefer_closed_form: bool = True) -> DivergenceResult:
    """KL(P||Q); +inf when P puts mass where Q has none"""
    if _is_singular(p, q):
        return DivergenceResult(math.inf, DivergenceMethod.CLOSED_FORM)
    if p.is_discrete:
        _, log_p, log_q, dropped = _discrete_masses(p, q)
        if np.any((log_p > -np.inf) & (log_q == -np.inf)):
            return DivergenceResult(math.inf, DivergenceMethod.EXACT_DISCRETE)
        return DivergenceResult(max(float(np.sum(_kl_integrand(log_p, log_q))), 0.0),
                                DivergenceMethod.EXACT_DISCRETE, dropped)
    if prefer_closed_form and _both_gaussian(p, q):
        value = (math.log(q.std / p.std)
                 + (p.std ** 2 + (p.mean - q.mean) ** 2) / (2 * q.std ** 2) - 0.5)
        return DivergenceResult(max(value, 0.0), DivergenceMethod.CLOSED_FORM)
    grid = _continuous_grid(p, q)
    points = grid.points()
    if np.any((p.log_density_array(points) > -np.inf) & (q.log_density_array(points) == -np.inf)):
        return DivergenceResult(math.inf, DivergenceMethod.QUADRATURE)
    value, bound, converged = _integrate_pair("kl", p, q, _kl_integrand)
    return _finish("kl", value, bound, converged)


def delta_max(p: Distribution, q: Distribution, grid_points: int = DELTA_GRID_POINTS) -> DivergenceResult:
    """Largest |P(x)-Q(x)|/(P(x)+Q(x)), the per-sample sensitivity of the Hellinger score.

    Continuous pairs are scanned on a dense grid plus far tail probes; the
    result is exactly 1 once either law has support the other lacks. Truncated
    discrete grids get integer probes far past their last atom.
    """
    if _is_singular(p, q):
        return DivergenceResult(1.0, DivergenceMethod.CLOSED_FORM)
    if p.is_discrete:
        atoms, log_p, log_q, dropped = _discrete_masses(p, q)
        if dropped > 0:
            # truncated atoms hide the tails of unbounded laws
            span = max(atoms[-1] - atoms[0], 1.0)
            probes = np.array([0.0, math.floor(atoms[0] / 2)]
                              + [math.ceil(atoms[-1] + span * s) for s in TAIL_PROBE_SCALES])
            log_p = np.concatenate([log_p, p.log_density_array(probes)])
            log_q = np.concatenate([log_q, q.log_density_array(probes)])
        scores, _ = log_ratio_score(log_p, log_q)
        return DivergenceResult(float(np.max(np.abs(scores))), DivergenceMethod.EXACT_DISCRETE)

    grid = _continuous_grid(p, q)
    span = grid.hi - grid.lo
    probes = np.array([grid.lo - span * s for s in TAIL_PROBE_SCALES]
                      + [grid.hi + span * s for s in TAIL_PROBE_SCALES])
    points = np.concatenate([grid.points(grid_points), probes])
    log_p, log_q = p.log_density_array(points), q.log_density_array(points)
    if np.any((log_p == -np.inf) != (log_q == -np.inf)):
        return DivergenceResult(1.0, DivergenceMethod.QUADRATURE)
    scores, _ = log_ratio_score(log_p, log_q)
    value = min(float(np.max(np.abs(scores))), 1.0)
    return DivergenceResult(value, DivergenceMethod.QUADRATURE, 1.0 - value)
