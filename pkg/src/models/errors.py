from typing import Optional, Any


class RobustTestError(Exception):
    """Base class for library errors"""


class InvalidDistributionError(RobustTestError, ValueError):
    """Raised when distribution parameters violate their invariants"""


class LiteralSyntaxError(RobustTestError, ValueError):
    """Raised when a distribution literal cannot be parsed"""

    def __init__(self, text: str, position: int, reason: str):
        self.text = text
        self.position = position
        self.reason = reason
        super().__init__(f"{reason} at position {position} in {text!r}")


class UnsupportedDistribution(RobustTestError, ValueError):
    """Raised when an operation is asked to handle a law it does not support"""

    def __init__(self, literal: str, operation: str):
        self.literal = literal
        self.operation = operation
        super().__init__(f"{operation} does not support {literal}")


class QuadratureNotConverged(RobustTestError, RuntimeError):
    """Raised when the integration error target is unmet.

    The best available result, with an honest error bound, is attached as
    ``result`` so callers can still use it.
    """

    def __init__(self, message: str, result: Any):
        self.result = result
        super().__init__(message)


class DegenerateCalibration(RobustTestError, RuntimeError):
    """Raised when no threshold can meet the requested type-I error"""

    def __init__(self, value: float, trials: int):
        self.value = value
        self.trials = trials
        super().__init__(f"smallest of {trials} calibration statistics is {value}; no threshold meets the target")


class BudgetExceeded(RobustTestError, RuntimeError):
    """Raised when the sample-complexity search passes its cap"""

    def __init__(self, cap: int, last_n: Optional[int] = None):
        self.cap = cap
        self.last_n = last_n
        super().__init__(f"sample size cap {cap} exceeded (last n tried: {last_n})")


class InequalityViolation(RobustTestError, AssertionError):
    """Raised by the bound suite when a checked inequality fails"""

    def __init__(self, inequality: str, slack: float, laws: tuple):
        self.inequality = inequality
        self.slack = slack
        self.laws = laws
        super().__init__(f"{inequality} violated (slack {slack:.3e}) for {', '.join(laws)}")


class ConfigFileError(RobustTestError, ValueError):
    """Raised for unreadable config files and unknown config keys"""


class UsageError(RobustTestError, ValueError):
    """Raised for malformed command lines; carries the offending flag when known"""

    def __init__(self, message: str, flag: Optional[str] = None):
        self.flag = flag
        super().__init__(message)
