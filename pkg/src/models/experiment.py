import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Tuple
from .decision import DpParams, RobustnessParams, TestKind
from .distribution import Distribution
from ..utils.seeding import Arm

Z_95 = 1.96


class PolicyKind(Enum):
    """How the decision threshold of an experiment is chosen"""
    ZERO = "zero"              # threshold 0 for every n
    CALIBRATED = "calibrated"  # Monte-Carlo type-I quantile per n


@dataclass(frozen=True)
class ThresholdPolicy:
    kind: PolicyKind = PolicyKind.ZERO
    type1_target: float = 0.05
    calib_trials: int = 1000

    def __post_init__(self):
        if not 0.0 < self.type1_target < 1.0:
            raise ValueError(f"type1_target must lie in (0, 1), got {self.type1_target}")
        if self.calib_trials < 1:
            raise ValueError(f"calib_trials must be positive, got {self.calib_trials}")

    @classmethod
    def zero(cls) -> "ThresholdPolicy":
        return cls(PolicyKind.ZERO)

    @classmethod
    def calibrated(cls, type1_target: float = 0.05, calib_trials: int = 1000) -> "ThresholdPolicy":
        return cls(PolicyKind.CALIBRATED, type1_target, calib_trials)

    def describe(self) -> str:
        if self.kind is PolicyKind.ZERO:
            return "zero"
        return f"calibrated({self.type1_target!r},{self.calib_trials})"


@dataclass(frozen=True)
class ExperimentSpec:
    """Everything one Monte-Carlo run needs; identical specs give identical results"""
    p: Distribution
    q: Distribution
    test_kind: TestKind = TestKind.HELLINGER
    n_grid: Tuple[int, ...] = (100,)
    trials: int = 1000
    threshold_policy: ThresholdPolicy = field(default_factory=ThresholdPolicy.zero)
    seed: int = 0
    r: Optional[Distribution] = None
    r_arm: Arm = Arm.NULL  # which arm draws from r when r is set
    dp: Optional[DpParams] = None
    robustness: Optional[RobustnessParams] = None

    def __post_init__(self):
        object.__setattr__(self, 'n_grid', tuple(int(n) for n in self.n_grid))
        if not self.n_grid:
            raise ValueError("n_grid must not be empty")
        if any(n < 1 for n in self.n_grid):
            raise ValueError(f"sample sizes must be positive, got {self.n_grid}")
        if any(b <= a for a, b in zip(self.n_grid, self.n_grid[1:])):
            raise ValueError(f"n_grid must be strictly increasing, got {self.n_grid}")
        if self.trials < 1:
            raise ValueError(f"trials must be positive, got {self.trials}")
        if self.r_arm is Arm.PERTURBED:
            raise ValueError("r_arm must name the null or the alternative arm")
        if self.test_kind is TestKind.DP_HELLINGER and self.dp is None:
            raise ValueError("dp_hellinger experiments need DpParams")

    def source(self, arm: Arm) -> Distribution:
        """The law an arm samples from"""
        if self.r is not None and arm is self.r_arm:
            return self.r
        return self.p if arm is Arm.NULL else self.q

    def with_updates(self, **changes) -> "ExperimentSpec":
        values = {name: getattr(self, name) for name in self.__dataclass_fields__}
        values.update(changes)
        return ExperimentSpec(**values)


def normal_half_width(rate: float, trials: int) -> float:
    """95% normal-approximation half-width of a Bernoulli frequency"""
    return Z_95 * math.sqrt(rate * (1.0 - rate) / trials)


@dataclass(frozen=True)
class ErrorEstimate:
    """Empirical type-I and type-II error frequencies at one sample size"""
    n: int
    type_i: float
    type_ii: float
    max_error: float
    trials: int
    half_width: float

    def __post_init__(self):
        for name in ('type_i', 'type_ii', 'max_error'):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must be a probability, got {value}")
        if self.max_error != max(self.type_i, self.type_ii):
            raise ValueError("max_error must equal max(type_i, type_ii)")
        if self.half_width < 0:
            raise ValueError(f"half_width must be nonnegative, got {self.half_width}")

    @classmethod
    def from_counts(cls, n: int, type_i_errors: int, type_ii_errors: int, trials: int) -> "ErrorEstimate":
        type_i, type_ii = type_i_errors / trials, type_ii_errors / trials
        max_error = max(type_i, type_ii)
        return cls(n, type_i, type_ii, max_error, trials, normal_half_width(max_error, trials))

    @property
    def correct_rate(self) -> float:
        return 1.0 - self.max_error
