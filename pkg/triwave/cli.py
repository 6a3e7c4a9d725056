# triwave: Inversionless infrared generation by intracavity difference-frequency mixing.
#
# Author: Peter Odding <peter@peterodding.com>
# Last Change: October 19, 2026
# URL: https://triwave.readthedocs.io

"""
Usage: triwave [OPTIONS] COMMAND

Simulate infrared generation by difference-frequency mixing of two optical
laser fields in a three-level medium, without population inversion on the
infrared transition.

Supported commands:

  run     Solve one scenario and emit a single result record.
  sweep   Solve a scenario for a range of values of one parameter.
  verify  Run the built-in oracle suite and print a pass/fail table.

Supported options:

  -c, --config=FILE

    Read the scenario from FILE (lines of the form `section.key = value').
    Keys that aren't given take their built-in default, which together form
    the canonical mid-infrared scenario.

  -o, --output=FILE

    Write the result table to FILE (it's replaced atomically). Without this
    option the table is printed on standard output.

  -f, --format=NAME

    The format of the result table: `csv' (the default) or `json'.

  -p, --param=KEY

    The dotted configuration key to sweep (required for `sweep').

  --from=VALUE, --to=VALUE

    The first and last value of the swept parameter.

  -n, --steps=COUNT

    The number of sweep steps (at least two, defaults to 11).

  -l, --log

    Space the swept values logarithmically instead of linearly.

  -s, --seed=NUMBER

    The seed of the randomized oracles of `verify' (defaults to 0).

  -v, --verbose

    Increase logging verbosity (can be repeated).

  -q, --quiet

    Decrease logging verbosity (can be repeated).

  -h, --help

    Show this message and exit.

The exit status is 0 on success, 1 when the input is invalid, 2 when a
numerical problem occurs (including a failed oracle) and 3 when an
unexpected error occurs.
"""

# Standard library modules.
import codecs
import getopt
import sys

# External dependencies.
import coloredlogs
from humanfriendly.terminal import connected_to_terminal, output, usage, warning
from verboselogs import VerboseLogger

# Modules included in our package.
from triwave import ConfigError, NumericalError, ValidationError
from triwave.config import SweepSpec, parse_config
from triwave.output import FORMATS, emit
from triwave.scenario import run_scenario, run_sweep
from triwave.verify import all_passed, render_report, run_oracles

# Public identifiers that require documentation.
__all__ = (
    'COMMANDS',
    'EXIT_INTERNAL',
    'EXIT_INVALID',
    'EXIT_NUMERICAL',
    'load_config',
    'logger',
    'main',
)

COMMANDS = ('run', 'sweep', 'verify')
"""The supported subcommands (a tuple of strings)."""

EXIT_INVALID = 1
"""The exit status for invalid input (an integer)."""

EXIT_NUMERICAL = 2
"""The exit status for numerical failures (an integer)."""

EXIT_INTERNAL = 3
"""The exit status for unexpected exceptions, which are bugs (an integer)."""

# Initialize a logger for this module.
logger = VerboseLogger(__name__)


def main():
    """Command line interface for the ``triwave`` program."""
    # Initialize logging to the terminal.
    coloredlogs.install()
    # Parse the command line arguments.
    config_file = None
    output_file = None
    output_format = 'csv'
    sweep_options = dict(steps=11, log=False)
    seed = 0
    try:
        options, arguments = getopt.gnu_getopt(sys.argv[1:], 'c:o:f:p:n:ls:vqh', [
            'config=', 'output=', 'format=', 'param=', 'from=', 'to=',
            'steps=', 'log', 'seed=', 'verbose', 'quiet', 'help',
        ])
        for option, value in options:
            if option in ('-c', '--config'):
                config_file = value
            elif option in ('-o', '--output'):
                output_file = value
            elif option in ('-f', '--format'):
                if value not in FORMATS:
                    raise ValueError("Unsupported output format %r (expected one of %s)!" % (
                        value, ", ".join(FORMATS),
                    ))
                output_format = value
            elif option in ('-p', '--param'):
                sweep_options['key'] = value
            elif option == '--from':
                sweep_options['start'] = float(value)
            elif option == '--to':
                sweep_options['stop'] = float(value)
            elif option in ('-n', '--steps'):
                sweep_options['steps'] = int(value)
            elif option in ('-l', '--log'):
                sweep_options['log'] = True
            elif option in ('-s', '--seed'):
                seed = int(value)
            elif option in ('-v', '--verbose'):
                coloredlogs.increase_verbosity()
            elif option in ('-q', '--quiet'):
                coloredlogs.decrease_verbosity()
            elif option in ('-h', '--help'):
                usage(__doc__)
                return
        if not arguments:
            usage(__doc__)
            return
        command = arguments.pop(0)
        if command not in COMMANDS:
            raise ValueError("Unknown command %r (expected one of %s)!" % (command, ", ".join(COMMANDS)))
        if arguments:
            raise ValueError("Unexpected positional arguments: %s" % " ".join(arguments))
        if command == 'sweep':
            missing = [name for name in ('key', 'start', 'stop') if name not in sweep_options]
            if missing:
                raise ValueError("The sweep command requires --param, --from and --to!")
    except (getopt.GetoptError, ValueError) as e:
        warning("Error: %s", e)
        sys.exit(EXIT_INVALID)
    # Execute the requested command.
    try:
        config = load_config(config_file)
        if command == 'verify':
            results = run_oracles(config, seed=seed)
            output(render_report(results, colors=connected_to_terminal()))
            if not all_passed(results):
                warning("Error: One or more oracles failed!")
                sys.exit(EXIT_NUMERICAL)
            return
        if command == 'sweep':
            table = run_sweep(config, SweepSpec(**sweep_options))
        else:
            table = [run_scenario(config)]
        text = emit(table, output_format, output_file)
        if not output_file:
            output(text.rstrip("\n"))
    except ValidationError as e:
        warning("Error: %s", e)
        sys.exit(EXIT_INVALID)
    except NumericalError as e:
        warning("Error: %s", e)
        sys.exit(EXIT_NUMERICAL)
    except Exception:
        logger.exception("Aborting due to unexpected exception!")
        sys.exit(EXIT_INTERNAL)


def load_config(filename=None):
    """
    Load a scenario configuration.

    :param filename: The pathname of a configuration file (a string) or
                     :data:`None` to use the built-in defaults.
    :returns: A :class:`~triwave.config.ScenarioConfig` object.
    :raises: :exc:`.ConfigError` when the file can't be read or parsed.
    """
    if not filename:
        logger.verbose("No configuration given, using the built-in defaults.")
        return parse_config('')
    try:
        with codecs.open(filename, 'r', 'UTF-8') as handle:
            text = handle.read()
    except (IOError, OSError) as e:
        raise ConfigError("Can't read configuration file %s: %s" % (filename, e.strerror or e))
    return parse_config(text, filename)
