import math
from dataclasses import dataclass
from enum import Enum
from typing import ClassVar, Optional

SQRT2 = math.sqrt(2.0)


class Verdict(Enum):
    """Which hypothesis a test names"""
    H0_P = "H0_P"  # the sample came from (or is closer to) P
    H1_Q = "H1_Q"  # the sample came from (or is closer to) Q


class TestKind(Enum):
    """Decision procedures the library implements"""
    HELLINGER = "hellinger"
    NEYMAN_PEARSON = "neyman_pearson"
    SCHEFFE = "scheffe"
    DP_HELLINGER = "dp_hellinger"

    __test__ = False


@dataclass(frozen=True)
class TestDecision:
    """A verdict with the statistic and threshold that produced it"""
    verdict: Verdict
    statistic: float
    threshold: float
    tie_broken: bool = False
    out_of_support: int = 0

    __test__: ClassVar[bool] = False

    def __post_init__(self):
        if self.tie_broken != (self.statistic == self.threshold):
            raise ValueError("tie_broken must be set exactly when statistic equals threshold")
        if not self.tie_broken:
            expected = Verdict.H0_P if self.statistic > self.threshold else Verdict.H1_Q
            if self.verdict is not expected:
                raise ValueError(f"verdict {self.verdict.value} contradicts statistic {self.statistic} vs threshold {self.threshold}")

    @property
    def accepts_null(self) -> bool:
        return self.verdict is Verdict.H0_P


@dataclass(frozen=True)
class RobustnessParams:
    """Slackness gamma of gamma-robust testing, derived from alpha in (1/sqrt2, 1)"""
    gamma: float
    alpha: Optional[float] = None

    # gamma above which HellingerTest is robust
    ROBUST_GAMMA: ClassVar[float] = SQRT2 / (SQRT2 - 1)
    # gamma below which a zero-mean counterexample exists
    ZERO_MEAN_GAMMA: ClassVar[float] = 1 / (SQRT2 - 1)

    def __post_init__(self):
        if not self.gamma > 1:
            raise ValueError(f"gamma must exceed 1, got {self.gamma}")
        if self.alpha is not None:
            if not 1 / SQRT2 < self.alpha < 1:
                raise ValueError(f"alpha must lie in (1/sqrt2, 1), got {self.alpha}")
            if not math.isclose(self.gamma, self.gamma_for(self.alpha), rel_tol=1e-12):
                raise ValueError("gamma does not match alpha")

    @staticmethod
    def gamma_for(alpha: float) -> float:
        return SQRT2 / (SQRT2 * alpha - 1)

    @classmethod
    def from_alpha(cls, alpha: float) -> "RobustnessParams":
        return cls(cls.gamma_for(alpha), alpha)

    @property
    def mean_factor(self) -> Optional[float]:
        """Lower-bound factor 2(1 - alpha^2) on the expected score"""
        return None if self.alpha is None else 2 * (1 - self.alpha ** 2)

    def classify(self, h_pr: float, h_qr: float) -> Optional[Verdict]:
        """The hypothesis that holds with slack gamma, or None inside the gap"""
        if self.gamma * h_pr <= h_qr:
            return Verdict.H0_P
        if h_pr >= self.gamma * h_qr:
            return Verdict.H1_Q
        return None


@dataclass(frozen=True)
class DpParams:
    """Privacy budget and sensitivity for the private Hellinger test"""
    epsilon: float
    delta_pq: Optional[float] = None  # None: unknown, use the conservative value 1
    noise_seed: int = 0

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        if self.delta_pq is not None and not 0.0 <= self.delta_pq <= 1.0:
            raise ValueError(f"delta_pq must lie in [0, 1], got {self.delta_pq}")

    @property
    def sensitivity(self) -> float:
        return 1.0 if self.delta_pq is None else self.delta_pq

    @property
    def noise_scale(self) -> float:
        """Laplace scale 2*Delta/epsilon"""
        return 2.0 * self.sensitivity / self.epsilon
