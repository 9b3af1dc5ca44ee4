import math, logging
import numpy as np
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from enum import Enum, auto
from typing import ClassVar, Optional, Sequence, Tuple, Union
from scipy import stats
from scipy.special import gammaln, logsumexp, xlogy
from .errors import InvalidDistributionError
from .sample_set import SampleSet
from ..utils.seeding import make_rng

logger = logging.getLogger(__name__)

PROBABILITY_TOLERANCE = 1e-12
LOG_SQRT_2PI = 0.5 * math.log(2 * math.pi)

ArrayLike = Union[float, Sequence[float], np.ndarray]


class DistributionKind(Enum):
    """Variant tag of a probability law"""
    BERNOULLI = auto()
    FINITE_DISCRETE = auto()
    GAUSSIAN = auto()
    POISSON = auto()
    MIXTURE = auto()


def _num(value: float) -> str:
    """Shortest round-trip text for a parameter"""
    return repr(float(value))


@dataclass(frozen=True)
class SupportGrid:
    """Evaluation domain of a law.

    Discrete laws carry their (possibly truncated) atoms; continuous laws carry
    an interval plus breakpoints where the density concentrates.
    """
    atoms: Tuple[float, ...] = ()
    lo: float = 0.0
    hi: float = 0.0
    breakpoints: Tuple[float, ...] = ()
    truncated_mass: float = 0.0

    @property
    def is_discrete(self) -> bool:
        return bool(self.atoms)

    def union(self, other: "SupportGrid") -> "SupportGrid":
        """Smallest grid covering both"""
        if self.is_discrete != other.is_discrete:
            raise InvalidDistributionError("cannot merge a discrete and a continuous support")
        if self.is_discrete:
            atoms = tuple(sorted(set(self.atoms) | set(other.atoms)))
            return SupportGrid(atoms=atoms, truncated_mass=self.truncated_mass + other.truncated_mass)
        return SupportGrid(
            lo=min(self.lo, other.lo),
            hi=max(self.hi, other.hi),
            breakpoints=tuple(sorted(set(self.breakpoints) | set(other.breakpoints))),
            truncated_mass=self.truncated_mass + other.truncated_mass
        )

    def points(self, count: int = 4097) -> np.ndarray:
        """Atoms, or a dense grid over the interval including every breakpoint"""
        if self.is_discrete:
            return np.array(self.atoms, dtype=float)
        grid = np.linspace(self.lo, self.hi, count)
        return np.union1d(grid, np.array(self.breakpoints, dtype=float))


class Distribution(ABC):
    """A probability law with log-density evaluation and seeded sampling"""
    kind: ClassVar[DistributionKind]
    is_discrete: ClassVar[bool]

    @abstractmethod
    def log_density_array(self, xs: np.ndarray) -> np.ndarray:
        """Natural log of the density or mass at each point, -inf off support"""

    @abstractmethod
    def draw(self, rng: np.random.Generator, size: int) -> np.ndarray:
        """Draw i.i.d. values from an existing generator"""

    @abstractmethod
    def support_grid(self, tail_mass: float) -> SupportGrid:
        """Domain covering all but a tail_mass-sized remainder on each side"""

    @abstractmethod
    def to_literal(self) -> str:
        """Serialize to the distribution literal syntax"""

    def log_density(self, x: float) -> float:
        return float(self.log_density_array(np.array([x], dtype=float))[0])

    def sample(self, n: int, seed: int, source_label: Optional[str] = None) -> SampleSet:
        if n < 1:
            raise ValueError(f"sample size must be at least 1, got {n}")
        values = self.draw(make_rng(seed), n)
        return SampleSet(values, int(seed), source_label or self.to_literal())

    def __str__(self) -> str:
        return self.to_literal()


def _check_tail(tail_mass: float) -> None:
    if not 0.0 < tail_mass < 0.5:
        raise ValueError(f"tail_mass must lie in (0, 0.5), got {tail_mass}")


@dataclass(frozen=True)
class Bernoulli(Distribution):
    p: float
    kind: ClassVar[DistributionKind] = DistributionKind.BERNOULLI
    is_discrete: ClassVar[bool] = True

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise InvalidDistributionError(f"Bernoulli parameter must lie in [0, 1], got {self.p}")

    def log_density_array(self, xs: np.ndarray) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        out = np.full(xs.shape, -np.inf)
        with np.errstate(divide='ignore'):
            out[xs == 1.0] = np.log(self.p)
            out[xs == 0.0] = np.log1p(-self.p)
        return out

    def draw(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return (rng.random(size) < self.p).astype(float)

    def support_grid(self, tail_mass: float) -> SupportGrid:
        _check_tail(tail_mass)
        return SupportGrid(atoms=(0.0, 1.0))

    def to_literal(self) -> str:
        return f"bern({_num(self.p)})"


@dataclass(frozen=True)
class FiniteDiscrete(Distribution):
    atoms: Tuple[float, ...]
    probs: Tuple[float, ...]
    kind: ClassVar[DistributionKind] = DistributionKind.FINITE_DISCRETE
    is_discrete: ClassVar[bool] = True
    _sorted_atoms: np.ndarray = field(init=False, repr=False, compare=False)
    _sorted_log_probs: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        atoms = tuple(float(a) for a in self.atoms)
        probs = tuple(float(p) for p in self.probs)
        if not atoms or len(atoms) != len(probs):
            raise InvalidDistributionError("atoms and probs must be nonempty and of equal length")
        if len(set(atoms)) != len(atoms):
            raise InvalidDistributionError(f"atoms must be distinct: {atoms}")
        if not all(math.isfinite(a) for a in atoms):
            raise InvalidDistributionError("atoms must be finite")
        if any(p < 0 for p in probs) or abs(math.fsum(probs) - 1.0) > PROBABILITY_TOLERANCE:
            raise InvalidDistributionError(f"probs must be nonnegative and sum to 1: {probs}")
        object.__setattr__(self, 'atoms', atoms)
        object.__setattr__(self, 'probs', probs)
        order = np.argsort(atoms)
        sorted_atoms = np.array(atoms)[order]
        with np.errstate(divide='ignore'):
            sorted_log_probs = np.log(np.array(probs)[order])
        sorted_atoms.setflags(write=False)
        sorted_log_probs.setflags(write=False)
        object.__setattr__(self, '_sorted_atoms', sorted_atoms)
        object.__setattr__(self, '_sorted_log_probs', sorted_log_probs)

    def log_density_array(self, xs: np.ndarray) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        idx = np.clip(np.searchsorted(self._sorted_atoms, xs), 0, self._sorted_atoms.size - 1)
        hit = self._sorted_atoms[idx] == xs
        return np.where(hit, self._sorted_log_probs[idx], -np.inf)

    def draw(self, rng: np.random.Generator, size: int) -> np.ndarray:
        idx = rng.choice(len(self.atoms), size=size, p=np.array(self.probs))
        return np.array(self.atoms, dtype=float)[idx]

    def support_grid(self, tail_mass: float) -> SupportGrid:
        _check_tail(tail_mass)
        return SupportGrid(atoms=tuple(self._sorted_atoms.tolist()))

    def to_literal(self) -> str:
        body = ",".join(f"{_num(a)}:{_num(p)}" for a, p in zip(self.atoms, self.probs))
        return f"disc({body})"


@dataclass(frozen=True)
class Gaussian(Distribution):
    mean: float
    std: float
    kind: ClassVar[DistributionKind] = DistributionKind.GAUSSIAN
    is_discrete: ClassVar[bool] = False

    def __post_init__(self):
        if not math.isfinite(self.mean):
            raise InvalidDistributionError(f"Gaussian mean must be finite, got {self.mean}")
        if not (self.std > 0 and math.isfinite(self.std)):
            raise InvalidDistributionError(f"Gaussian std must be positive, got {self.std}")

    def log_density_array(self, xs: np.ndarray) -> np.ndarray:
        z = (np.asarray(xs, dtype=float) - self.mean) / self.std
        return -0.5 * z * z - math.log(self.std) - LOG_SQRT_2PI

    def draw(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return rng.normal(self.mean, self.std, size)

    def support_grid(self, tail_mass: float) -> SupportGrid:
        _check_tail(tail_mass)
        lo = self.mean + self.std * stats.norm.ppf(tail_mass)
        hi = self.mean + self.std * stats.norm.isf(tail_mass)
        return SupportGrid(lo=lo, hi=hi, breakpoints=(lo, self.mean, hi), truncated_mass=2 * tail_mass)

    def to_literal(self) -> str:
        return f"gauss({_num(self.mean)},{_num(self.std)})"


@dataclass(frozen=True)
class Poisson(Distribution):
    rate: float
    kind: ClassVar[DistributionKind] = DistributionKind.POISSON
    is_discrete: ClassVar[bool] = True

    def __post_init__(self):
        if not (self.rate > 0 and math.isfinite(self.rate)):
            raise InvalidDistributionError(f"Poisson rate must be positive, got {self.rate}")

    def log_density_array(self, xs: np.ndarray) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        valid = np.isfinite(xs) & (xs >= 0) & (xs == np.floor(xs))
        k = np.where(valid, xs, 0.0)
        out = xlogy(k, self.rate) - self.rate - gammaln(k + 1.0)
        return np.where(valid, out, -np.inf)

    def draw(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return rng.poisson(self.rate, size).astype(float)

    def support_grid(self, tail_mass: float) -> SupportGrid:
        _check_tail(tail_mass)
        lo = max(0, int(stats.poisson.ppf(tail_mass, self.rate)))
        hi = int(stats.poisson.isf(tail_mass, self.rate))
        dropped = (stats.poisson.cdf(lo - 1, self.rate) if lo > 0 else 0.0) + stats.poisson.sf(hi, self.rate)
        return SupportGrid(atoms=tuple(float(k) for k in range(lo, hi + 1)), truncated_mass=float(dropped))

    def to_literal(self) -> str:
        return f"pois({_num(self.rate)})"


@dataclass(frozen=True)
class Mixture(Distribution):
    weights: Tuple[float, ...]
    components: Tuple[Distribution, ...]
    kind: ClassVar[DistributionKind] = DistributionKind.MIXTURE

    def __post_init__(self):
        weights = tuple(float(w) for w in self.weights)
        components = tuple(self.components)
        if not components or len(weights) != len(components):
            raise InvalidDistributionError("weights and components must be nonempty and of equal length")
        if any(w < 0 for w in weights) or abs(math.fsum(weights) - 1.0) > PROBABILITY_TOLERANCE:
            raise InvalidDistributionError(f"mixture weights must be nonnegative and sum to 1: {weights}")
        if any(isinstance(c, Mixture) for c in components):
            raise InvalidDistributionError("mixtures may only combine base laws")
        if len({c.is_discrete for c in components}) > 1:
            raise InvalidDistributionError("mixtures of discrete and continuous laws are not supported")
        object.__setattr__(self, 'weights', weights)
        object.__setattr__(self, 'components', components)

    @property
    def is_discrete(self) -> bool:
        return self.components[0].is_discrete

    def log_density_array(self, xs: np.ndarray) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        with np.errstate(divide='ignore'):
            log_weights = np.log(np.array(self.weights))
        stacked = np.stack([lw + c.log_density_array(xs) for lw, c in zip(log_weights, self.components)])
        with np.errstate(divide='ignore', invalid='ignore'):
            out = logsumexp(stacked, axis=0)
        return np.where(np.all(stacked == -np.inf, axis=0), -np.inf, out)

    def draw(self, rng: np.random.Generator, size: int) -> np.ndarray:
        labels = rng.choice(len(self.components), size=size, p=np.array(self.weights))
        out = np.empty(size, dtype=float)
        for index, component in enumerate(self.components):
            mask = labels == index
            count = int(mask.sum())
            if count:
                out[mask] = component.draw(rng, count)
        return out

    def support_grid(self, tail_mass: float) -> SupportGrid:
        _check_tail(tail_mass)
        grid = None
        for weight, component in zip(self.weights, self.components):
            if weight == 0:
                continue
            part = component.support_grid(tail_mass)
            grid = part if grid is None else grid.union(part)
        return grid

    def to_literal(self) -> str:
        body = " + ".join(f"{_num(w)}*{c.to_literal()}" for w, c in zip(self.weights, self.components))
        return f"mix({body})"


def log_density(d: Distribution, x: ArrayLike) -> Union[float, np.ndarray]:
    """Log density (continuous) or log mass (discrete); -inf outside the support"""
    if np.ndim(x) == 0:
        return d.log_density(float(x))
    return d.log_density_array(np.asarray(x, dtype=float))


def sample(d: Distribution, n: int, seed: int, source_label: Optional[str] = None) -> SampleSet:
    """n i.i.d. draws, bit-identical for identical (d, n, seed)"""
    return d.sample(n, seed, source_label)


def support_grid(d: Distribution, tail_mass: float) -> SupportGrid:
    return d.support_grid(tail_mass)


def same_family(p: Distribution, q: Distribution) -> bool:
    """Whether both laws are discrete or both are continuous"""
    return p.is_discrete == q.is_discrete
