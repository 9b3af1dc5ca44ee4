import os, sys, csv, json, logging
from enum import Enum
from typing import Any, Dict, Optional, TextIO
from ..models.distribution import Distribution
from ..models.sample_set import SampleSet
from ..utils.config import Settings
from ..utils.formatters import ValueFormatter

logger = logging.getLogger(__name__)


def _jsonable(value: Any) -> Any:
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, Distribution):
        return value.to_literal()
    if isinstance(value, SampleSet):
        return [ValueFormatter.format_float(v) for v in value]
    return str(value)


class ReportWriter:
    """Writes reports as CSV preceded by `# config:` and `# seed:` comment lines"""

    def __init__(self, settings: Settings, stdout: Optional[TextIO] = None):
        self.settings = settings
        self.stdout = stdout

    @staticmethod
    def render(report, config: Dict[str, Any], seed: int, stream: TextIO) -> None:
        stream.write(f"# config: {json.dumps(config, sort_keys=True, default=_jsonable)}\n")
        stream.write(f"# seed: {seed}\n")
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(report.HEADER)
        for row in report.rows():
            writer.writerow(ValueFormatter.format_row(row))

    def write(self, report, config: Dict[str, Any], seed: int, output: Optional[str] = None) -> Optional[str]:
        """Write to output (relative paths resolved against the output directory) or stdout

        Returns:
            The path written, or None for stdout
        """
        path = self.settings.resolve_output(output)
        if path is None:
            self.render(report, config, seed, self.stdout or sys.stdout)
            return None

        directory = os.path.dirname(path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(path, 'w', newline='', encoding='utf-8') as handle:
            self.render(report, config, seed, handle)
        logger.info(f"Wrote {len(report.rows())} rows to {path}")
        return path
