"""
Command-line interface: zeros, resonance tables, phase scans, wave-function
grids and the verification suite.
"""
import argparse
import logging
import sys
from typing import List, Optional

from artin_scattering.commands import (
    COMMANDS,
    DEFAULT_COUNT,
    DEFAULT_GRID_POINTS,
    DEFAULT_PHASE_SAMPLES,
    DEFAULT_PHASE_WINDOW,
    DEFAULT_WAVE_BAND,
    DEFAULT_WAVE_MOMENTUM,
    RESONANCE_METHODS,
    RunConfig,
    VerifyCommand,
)
from artin_scattering.errors import ArtinError, ConfigError, SchemaError
from artin_scattering.tables import FORMATS, TableWriter
from artin_scattering.verify import print_summary

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # raise instead of exiting so main() owns the exit code
    def error(self, message):
        raise _UsageError(message)


def _common_options() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default="csv", help="Output format (default: csv)")
    common.add_argument("--output", default=None, help="Output file, '-' or omitted for stdout")
    common.add_argument("--tol", type=float, default=None, help="Override the command's numerical tolerance")
    common.add_argument("--verbose", action="store_true", help="Log progress (INFO)")
    common.add_argument("--debug", action="store_true", help="Log per-evaluation detail (DEBUG)")
    return common


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subcommand per command."""
    common = _common_options()
    parser = _Parser(
        prog="artin_scattering",
        description="Scattering data of the quantized Artin billiard on the modular surface.",
    )
    subparsers = parser.add_subparsers(dest="command", metavar="COMMAND")

    zeros = subparsers.add_parser("zeros", parents=[common], help="First zeta zeros on the critical line")
    zeros.add_argument("--count", type=int, default=DEFAULT_COUNT)

    resonances = subparsers.add_parser("resonances", parents=[common], help="Resonance energies and widths")
    resonances.add_argument("--count", type=int, default=DEFAULT_COUNT)
    resonances.add_argument("--method", choices=RESONANCE_METHODS, default="both")
    resonances.add_argument("--newton-steps", type=int, default=0, help="Newton iterations toward the pole")
    resonances.add_argument("--plot", action="store_true", help="Write a gnuplot script next to the output")

    phase = subparsers.add_parser("phase", parents=[common], help="Unwrapped phase shift over an energy window")
    phase.add_argument("--e-min", type=float, default=DEFAULT_PHASE_WINDOW[0])
    phase.add_argument("--e-max", type=float, default=DEFAULT_PHASE_WINDOW[1])
    phase.add_argument("--samples", type=int, default=DEFAULT_PHASE_SAMPLES)
    phase.add_argument("--plot", action="store_true", help="Write a gnuplot script next to the output")

    wave = subparsers.add_parser("wave", parents=[common], help="Maass wave function on an (x, y~) grid")
    wave.add_argument("--momentum", "-p", type=float, default=DEFAULT_WAVE_MOMENTUM)
    wave.add_argument("--x-points", type=int, default=DEFAULT_GRID_POINTS)
    wave.add_argument("--y-tilde-min", type=float, default=DEFAULT_WAVE_BAND[0])
    wave.add_argument("--y-tilde-max", type=float, default=DEFAULT_WAVE_BAND[1])
    wave.add_argument("--y-points", type=int, default=DEFAULT_GRID_POINTS)
    wave.add_argument("--plot", action="store_true", help="Write a gnuplot script next to the output")

    verify = subparsers.add_parser("verify", parents=[common], help="Run the numerical self-checks")
    verify.add_argument("--count", type=int, default=DEFAULT_COUNT)

    return parser


def parse_config(argv: Optional[List[str]] = None) -> RunConfig:
    """
    Parse and validate command-line arguments.

    Raises:
        ConfigError: On unknown flags or invalid values
    """
    try:
        args = build_parser().parse_args(argv)
    except _UsageError as e:
        raise ConfigError(str(e)) from e
    if not args.command:
        raise ConfigError(f"a command is required: {', '.join(COMMANDS)}")

    options = vars(args)
    debug, verbose = options.pop("debug"), options.pop("verbose")
    level = logging.DEBUG if debug else logging.INFO if verbose else None
    config = RunConfig(
        command=options.pop("command"),
        format=options.pop("format"),
        output_path=options.pop("output"),
        **options,
    )
    if level is not None:
        logging.getLogger().setLevel(level)
    return config


def run(config: RunConfig) -> int:
    """
    Execute one validated command.

    Returns:
        0 on success, 1 on a computation failure (or a failed verification)
    """
    try:
        command = COMMANDS[config.command](config)
        writer = TableWriter(config.output_path, config.format)

        if isinstance(command, VerifyCommand):
            results = command.compute()
            # the summary owns stdout, so the table is only written to a file
            if config.output_path not in (None, "-"):
                writer.write(command.name, config.params(), command.to_rows(results))
            print_summary(results)
            return EXIT_OK if results["success"] else EXIT_FAILURE

        command.compute_and_write(writer)
        return EXIT_OK

    except (ArtinError, ArithmeticError, OSError) as e:
        error_msg = f"{config.command} failed: {e}"
        logger.debug(error_msg, exc_info=True)
        print(f"✗ {error_msg}", file=sys.stderr)
        return EXIT_FAILURE


def main(argv: Optional[List[str]] = None) -> int:
    """Entry point for `python -m artin_scattering`."""
    logging.basicConfig(level=logging.WARNING, format=LOG_FORMAT, stream=sys.stderr)

    try:
        config = parse_config(argv)
    except (ConfigError, SchemaError) as e:
        print(f"✗ usage: {e}", file=sys.stderr)
        return EXIT_USAGE

    return run(config)


if __name__ == "__main__":
    sys.exit(main())
