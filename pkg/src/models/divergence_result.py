import math
from dataclasses import dataclass
from enum import Enum


class DivergenceMethod(Enum):
    """How a distance value was obtained"""
    EXACT_DISCRETE = "exact_discrete"  # finite sum over atoms
    QUADRATURE = "quadrature"          # adaptive integration or dense grid
    CLOSED_FORM = "closed_form"        # analytic formula
    MONTE_CARLO = "monte_carlo"


@dataclass(frozen=True)
class DivergenceResult:
    """A nonnegative distance value with its provenance"""
    value: float
    method: DivergenceMethod
    abs_error_bound: float = 0.0

    def __post_init__(self):
        if math.isnan(self.value) or self.value < 0:
            raise ValueError(f"divergence value must be nonnegative, got {self.value}")
        if self.abs_error_bound < 0:
            raise ValueError(f"error bound must be nonnegative, got {self.abs_error_bound}")

    @property
    def is_infinite(self) -> bool:
        return math.isinf(self.value)

    def __float__(self) -> float:
        return self.value
