import os, logging
from dataclasses import dataclass
from typing import Dict, Iterable, Optional
from dotenv import load_dotenv, dotenv_values
from ..models.errors import ConfigFileError

logger = logging.getLogger(__name__)

DEFAULT_LOG_LEVEL = "WARNING"
DEFAULT_MAX_N = 2 ** 20


def _int_env(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"{name} must be an integer, got {raw!r}")


@dataclass(frozen=True)
class Settings:
    """Environment-level defaults of the command line"""
    log_level: str = DEFAULT_LOG_LEVEL
    output_dir: Optional[str] = None
    workers: int = 1
    max_n: int = DEFAULT_MAX_N

    @classmethod
    def from_env(cls, dotenv: bool = True) -> "Settings":
        if dotenv:
            load_dotenv()
        settings = cls(
            log_level=os.getenv('LOG_LEVEL', DEFAULT_LOG_LEVEL),
            output_dir=os.getenv('ROBUST_TEST_OUTPUT_DIR') or None,
            workers=_int_env('ROBUST_TEST_WORKERS', 1),
            max_n=_int_env('ROBUST_TEST_MAX_N', DEFAULT_MAX_N),
        )
        if settings.workers < 0:
            raise ValueError(f"ROBUST_TEST_WORKERS must be nonnegative, got {settings.workers}")
        if settings.max_n < 1:
            raise ValueError(f"ROBUST_TEST_MAX_N must be positive, got {settings.max_n}")
        return settings

    def resolve_output(self, path: Optional[str]) -> Optional[str]:
        """Relative output paths land in output_dir when one is configured"""
        if path is None or path == "-":
            return None
        if self.output_dir and not os.path.isabs(path):
            return os.path.join(self.output_dir, path)
        return path


def load_config_file(path: str, allowed: Iterable[str]) -> Dict[str, str]:
    """Read `key = value` lines; keys may use '-' or '_' and must name a known flag"""
    if not os.path.isfile(path):
        raise ConfigFileError(f"config file not found: {path}")
    allowed = set(allowed)
    values = {}
    for key, value in dotenv_values(path).items():
        name = key.strip().replace('-', '_')
        if name not in allowed:
            raise ConfigFileError(f"unknown config key {key!r} in {path}")
        if value is None:
            raise ConfigFileError(f"config key {key!r} in {path} has no value")
        values[name] = value
    logger.debug(f"Loaded {len(values)} settings from {path}")
    return values
