import sys, logging

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


def configure_logging(log_level: str = "WARNING") -> None:
    """Configure centralized logging for the command line

    Args:
        log_level: Name of the logging level to use

    Records go to stderr; stdout is reserved for CSV output.
    """
    level = getattr(logging, str(log_level).upper(), None)
    if not isinstance(level, int):
        raise ValueError(f"unknown log level: {log_level}")

    root_logger = logging.getLogger()
    root_logger.setLevel(level)

    for handler in root_logger.handlers[:]:
        root_logger.removeHandler(handler)

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setFormatter(logging.Formatter(LOG_FORMAT))
    root_logger.addHandler(console_handler)

    configure_module_loggers(level)


def configure_module_loggers(level: int = logging.WARNING) -> None:
    """Configure specific logging settings for different modules"""
    modules = {
        "src.services": level,
        "src.handlers": level,
        "src.utils": level,
        "numpy": logging.WARNING,
        "scipy": logging.WARNING,
    }

    for module, module_level in modules.items():
        logger = logging.getLogger(module)
        logger.setLevel(module_level)
