import math, logging
from enum import Enum
from typing import Any, Iterable, List

logger = logging.getLogger(__name__)


class ValueFormatter:
    """Utility class for rendering report values as stable CSV text"""

    SIGNIFICANT_DIGITS = 12

    @staticmethod
    def format_float(value: float) -> str:
        """12 significant digits, '.' separator, 'inf'/'-inf'/'nan' for non-finite values."""
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        if value == 0:
            return "0"
        return format(value, f'.{ValueFormatter.SIGNIFICANT_DIGITS}g')

    @staticmethod
    def format_value(value: Any) -> str:
        if isinstance(value, bool):
            return "true" if value else "false"
        if isinstance(value, Enum):
            return str(value.value)
        if isinstance(value, int):
            return str(value)
        if isinstance(value, float):
            return ValueFormatter.format_float(value)
        if value is None:
            return ""
        try:
            # numpy scalars
            return ValueFormatter.format_float(float(value)) if hasattr(value, 'dtype') else str(value)
        except (TypeError, ValueError):
            logger.warning(f"Cannot format value {value!r} as a number")
            return str(value)

    @staticmethod
    def format_row(values: Iterable[Any]) -> List[str]:
        return [ValueFormatter.format_value(v) for v in values]
