"""Command-line front end.

Each subcommand parses distribution literals and numeric flags, runs one
library operation and writes a CSV report whose first two lines record the
resolved configuration and the seed.
"""
import sys, logging, argparse
from typing import Any, Dict, List, Optional, TextIO
from .handlers.command_handler import METRICS, REPRODUCTIONS, CommandHandler
from .handlers.report_writer import ReportWriter
from .models.decision import TestKind
from .models.errors import BudgetExceeded, InequalityViolation, UsageError
from .utils.config import Settings, load_config_file
from .utils.literals import GRAMMAR, parse_distribution
from .utils.logging_config import configure_logging
from .utils.seeding import SEED_MASK, Arm

logger = logging.getLogger(__name__)

SUBCOMMANDS = ("distance", "test", "simulate", "complexity", "sweep", "repro", "bounds", "tournament")
# flags that never change the numbers written
UNRECORDED = ("config", "output", "workers")
TEST_ALIASES = {"np": TestKind.NEYMAN_PEARSON, "dp": TestKind.DP_HELLINGER}
TRUE_STRINGS = ("1", "true", "yes", "on")


class CliArgumentParser(argparse.ArgumentParser):
    """ArgumentParser that raises instead of exiting so run() can pick the exit code"""

    def error(self, message: str):
        raise UsageError(f"{self.prog}: {message}")


def distribution_literal(text: str):
    try:
        return parse_distribution(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e))


def distribution_list(text: str):
    """Literals separated by ';'"""
    return [distribution_literal(part) for part in text.split(';') if part.strip()]


def int_list(text: str) -> List[int]:
    try:
        return [int(part) for part in text.split(',') if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def float_list(text: str) -> List[float]:
    try:
        return [float(part) for part in text.split(',') if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def test_kind(text: str) -> TestKind:
    key = text.strip().lower().replace('-', '_')
    if key in TEST_ALIASES:
        return TEST_ALIASES[key]
    try:
        return TestKind(key)
    except ValueError:
        raise argparse.ArgumentTypeError(f"unknown test {text!r}; choose from {', '.join(k.value for k in TestKind)}")


def arm(text: str) -> Arm:
    try:
        return Arm[text.strip().upper()]
    except KeyError:
        raise argparse.ArgumentTypeError(f"unknown arm {text!r}; choose null or alternative")


def seed(text: str) -> int:
    value = int(text)
    if not 0 <= value <= SEED_MASK:
        raise argparse.ArgumentTypeError(f"seed must be a 64-bit unsigned integer, got {text}")
    return value


def delta_pq(text: str):
    """A sensitivity in [0, 1], 'unknown' for the conservative 1, or 'auto' to compute it"""
    if text in ('unknown', 'auto'):
        return text
    return float(text)


def _add_laws(sub: argparse.ArgumentParser) -> None:
    sub.add_argument('--p', type=distribution_literal, help="null hypothesis law")
    sub.add_argument('--q', type=distribution_literal, help="alternative hypothesis law")


def _add_test(sub: argparse.ArgumentParser) -> None:
    sub.add_argument('--test', type=test_kind, default=TestKind.HELLINGER,
                     help="hellinger, neyman_pearson, scheffe or dp_hellinger")
    sub.add_argument('--epsilon', type=float, help="privacy budget for dp_hellinger")
    sub.add_argument('--delta-pq', type=delta_pq, default='unknown', help="sensitivity: number, unknown or auto")
    sub.add_argument('--noise-seed', type=seed, default=0)


def _add_experiment(sub: argparse.ArgumentParser) -> None:
    _add_laws(sub)
    _add_test(sub)
    sub.add_argument('--trials', type=int, default=1000)
    sub.add_argument('--seed', type=seed, default=0)
    sub.add_argument('--threshold', choices=('zero', 'calibrated'), default='zero')
    sub.add_argument('--type1-target', type=float, default=0.05)
    sub.add_argument('--calib-trials', type=int, default=1000)


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument('--output', help="CSV path; relative paths go to ROBUST_TEST_OUTPUT_DIR; stdout if omitted")
    sub.add_argument('--workers', type=int, help="trial processes; 0 = one per physical core")


def build_parser() -> Dict[str, argparse.ArgumentParser]:
    """The top-level parser under key '' plus one parser per subcommand"""
    parser = CliArgumentParser(
        prog="robust-test",
        description="Robust simple hypothesis testing: distances, tests and Monte-Carlo experiments",
        epilog=f"distribution literals: {GRAMMAR}",
    )
    parser.add_argument('--config', help="file of `key = value` lines used as flag defaults")
    subparsers = parser.add_subparsers(dest='command', required=True, parser_class=CliArgumentParser)
    parsers = {'': parser}

    sub = parsers['distance'] = subparsers.add_parser('distance', help="distance between two laws")
    _add_laws(sub)
    sub.add_argument('--metric', choices=METRICS + ('all',), default='hellinger')
    sub.add_argument('--quadrature', action='store_true', help="skip closed forms")

    sub = parsers['test'] = subparsers.add_parser('test', help="decide between P and Q on one sample")
    _add_laws(sub)
    _add_test(sub)
    sub.add_argument('--samples', type=float_list, help="comma-separated observations")
    sub.add_argument('--source', type=distribution_literal, help="law to draw --n observations from")
    sub.add_argument('--n', type=int)
    sub.add_argument('--seed', type=seed, default=0)
    sub.add_argument('--threshold', type=float, default=0.0, help="threshold (log-threshold for neyman_pearson)")
    sub.add_argument('--tie-seed', type=seed, default=0)

    sub = parsers['simulate'] = subparsers.add_parser('simulate', help="type-I and type-II error over an n grid")
    _add_experiment(sub)
    sub.add_argument('--n', type=int_list, default=[100], help="comma-separated, strictly increasing")
    sub.add_argument('--r', type=distribution_literal, help="perturbed law replacing one arm's source")
    sub.add_argument('--r-arm', type=arm, default=Arm.NULL)

    sub = parsers['complexity'] = subparsers.add_parser('complexity', help="smallest n reaching a target error")
    _add_experiment(sub)
    sub.add_argument('--delta', type=float, default=0.1)
    sub.add_argument('--max-n', type=int)

    sub = parsers['sweep'] = subparsers.add_parser('sweep', help="accuracy on samples from perturbed laws")
    _add_experiment(sub)
    sub.add_argument('--r', type=distribution_list, help="';'-separated perturbed laws")
    sub.add_argument('--n', type=int, default=2000)

    sub = parsers['repro'] = subparsers.add_parser('repro', help="reproduce a separating construction")
    sub.add_argument('--which', choices=REPRODUCTIONS)
    sub.add_argument('--gamma', type=float, default=2.0)
    sub.add_argument('--delta', type=float)
    sub.add_argument('--k', type=float, default=5.0)
    sub.add_argument('--eps', type=float_list, default=[0.01, 0.001, 1e-4])
    sub.add_argument('--trials', type=int, default=1000)
    sub.add_argument('--max-n', type=int)
    sub.add_argument('--seed', type=seed, default=0)

    sub = parsers['bounds'] = subparsers.add_parser('bounds', help="randomized inequality suite")
    sub.add_argument('--pairs', type=int, default=1000)
    sub.add_argument('--max-support', type=int, default=10)
    sub.add_argument('--seed', type=seed, default=0)

    sub = parsers['tournament'] = subparsers.add_parser('tournament', help="pick the closest of several candidates")
    sub.add_argument('--candidates', type=distribution_list, help="';'-separated candidate laws")
    sub.add_argument('--truth', type=distribution_literal, help="law the samples are drawn from")
    sub.add_argument('--n', type=int, default=500)
    sub.add_argument('--trials', type=int, default=1)
    sub.add_argument('--seed', type=seed, default=0)

    for name in SUBCOMMANDS:
        _add_common(parsers[name])
    return parsers


def _apply_config(sub: argparse.ArgumentParser, values: Dict[str, str]) -> None:
    """Install config-file values as defaults of the chosen subcommand"""
    actions = {action.dest: action for action in sub._actions if action.dest != 'help'}
    defaults = {}
    for key, raw in values.items():
        action = actions.get(key)
        if action is None:
            raise UsageError(f"unknown config key {key!r} for {sub.prog}", key)
        if action.nargs == 0:
            defaults[key] = raw.strip().lower() in TRUE_STRINGS
            continue
        try:
            value = action.type(raw) if action.type else raw
        except (argparse.ArgumentTypeError, ValueError) as e:
            raise UsageError(f"invalid config value for {key}: {e}", key)
        if action.choices is not None and value not in action.choices:
            raise UsageError(f"invalid config value for {key}: {raw!r}", key)
        defaults[key] = value
    sub.set_defaults(**defaults)


def parse_args(argv: List[str]) -> argparse.Namespace:
    pre = CliArgumentParser(add_help=False)
    pre.add_argument('--config')
    known, rest = pre.parse_known_args(argv)
    parsers = build_parser()
    if known.config:
        command = next((token for token in rest if token in SUBCOMMANDS), None)
        if command is None:
            raise UsageError(f"a subcommand is required; choose from {', '.join(SUBCOMMANDS)}")
        allowed = [a.dest for a in parsers[command]._actions if a.dest != 'help']
        _apply_config(parsers[command], load_config_file(known.config, allowed))
    return parsers[''].parse_args(rest)


def resolved_config(args: argparse.Namespace) -> Dict[str, Any]:
    return {key: value for key, value in vars(args).items() if key not in UNRECORDED}


def run(argv: Optional[List[str]] = None, stdout: Optional[TextIO] = None) -> int:
    """Execute one command line; 0 on success, 1 on usage errors, 2 on failed checks"""
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        settings = Settings.from_env()
        configure_logging(settings.log_level)
    except ValueError as e:
        sys.stderr.write(f"error: {e}\n")
        return 1

    try:
        args = parse_args(argv)
        report = CommandHandler(settings).handle(args)
        ReportWriter(settings, stdout).write(report, resolved_config(args), getattr(args, 'seed', 0), args.output)
    except UsageError as e:
        sys.stderr.write(f"error: {e}\n")
        sys.stderr.write(f"usage: robust-test [--config PATH] {{{','.join(SUBCOMMANDS)}}} [flags]\n")
        sys.stderr.write(f"distribution literals: {GRAMMAR}\n")
        return 1
    except (InequalityViolation, BudgetExceeded) as e:
        logger.error(f"Check failed: {e}")
        sys.stderr.write(f"error: {e}\n")
        return 2
    except ValueError as e:
        sys.stderr.write(f"error: {e}\n")
        return 1
    except SystemExit as e:
        # --help
        return e.code if isinstance(e.code, int) else 0
    except Exception as e:
        logger.error(f"Unexpected failure: {e}", exc_info=True)
        return 1
    return 0
