import argparse
import json
import logging
import sys
from typing import List, Optional

from sectflow.constants.types import (ARCS, BOTH, ECT, EXIT_ACCEPT,
                                      EXIT_CONFIG, EXIT_DATA_ERROR,
                                      EXIT_NO_INPUT, EXIT_REJECT,
                                      EXIT_SOFTWARE, EXIT_USAGE, NODULES,
                                      PERMUTATION_TEST, REJECT, SECT,
                                      SIMULATION, SPLIT_TEST, TOOL_NAME,
                                      TOOL_VERSION, TRANSFORM)
from sectflow.constants.variables import SECTFLOW_LOG_LEVEL
from sectflow.exceptions import (ConfigurationError, DegenerateGroupError,
                                 EmptyShapeError, IncompatibleGridsError,
                                 InvalidArgumentError, ParseError,
                                 ShapeExceedsBallError)
from sectflow.task_generator import generate_tasks
from sectflow.utilities.file import read_config_file

DATA_ERRORS = (ParseError, EmptyShapeError, ShapeExceedsBallError, IncompatibleGridsError, DegenerateGroupError)

# Flags that replace each other; giving one on the command line drops the other from the config file
EXCLUSIVE_KEYS = [('directions', 'angles')]


class ArgumentParser(argparse.ArgumentParser):
    """
    argparse parser whose usage errors exit with EX_USAGE instead of 2.
    """

    def error(self, message: str) -> None:
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f'{self.prog}: error: {message}\n')


def _add_test_arguments(parser: argparse.ArgumentParser, modes: List[str]) -> None:
    parser.add_argument('--mode', choices=modes, help='Transform the test compares.')
    parser.add_argument('--alpha', type=float, help='Significance level in (0, 1).')
    parser.add_argument('--permutations', type=int, help='Number of random relabelings.')
    parser.add_argument('--seed', type=int, help='Unsigned 64-bit seed.')
    parser.add_argument('--radius', type=float, help='Ball radius R of the matrices (horizon T = 2R).')


def get_parser() -> argparse.ArgumentParser:
    common = ArgumentParser(add_help=False)
    common.add_argument('--config', help='YAML config file; flags override its values.')
    common.add_argument('--threads', type=int, help='joblib workers (default: SECTFLOW_THREADS).')
    common.add_argument('--verbose', action='store_true', default=None, help='Log at DEBUG level.')

    parser = ArgumentParser(prog=TOOL_NAME, description='Euler characteristic transforms of 2-D shapes and permutation tests between shape collections.')
    parser.add_argument('--version', action='version', version=f'{TOOL_NAME} {TOOL_VERSION}')
    commands = parser.add_subparsers(dest='type', required=True, metavar='command')

    transform = commands.add_parser(TRANSFORM, parents=[common], help='Transform images into ECT/SECT matrix CSVs.')
    transform.add_argument('inputs', nargs='*', default=None, help='Image files or directories (PGM/PNG).')
    directions = transform.add_mutually_exclusive_group()
    directions.add_argument('--directions', type=int, help='Number of directions evenly spaced over the circle.')
    directions.add_argument('--angles', type=float, nargs='+', help='Explicit direction angles in radians.')
    transform.add_argument('--levels', type=int, help='Number of levels on (0, T].')
    transform.add_argument('--radius', type=float, help='Ball radius R.')
    transform.add_argument('--pitch', type=float, help='Physical pixel width (default: fit the image in the ball).')
    transform.add_argument('--threshold', type=float, help='Foreground threshold on normalized intensity.')
    transform.add_argument('--mode', choices=[SECT, ECT, BOTH])
    transform.add_argument('--out', help='Output directory.')

    test = commands.add_parser(PERMUTATION_TEST, parents=[common], help='Permutation test between two matrix directories.')
    test.add_argument('--group1', help='Directory of group 1 matrix CSVs.')
    test.add_argument('--group2', help='Directory of group 2 matrix CSVs.')
    _add_test_arguments(test, [SECT, ECT])
    test.add_argument('--out', help='Optional JSON result path.')

    simulate = commands.add_parser(SIMULATION, parents=[common], help='Rejection-rate simulation experiment.')
    simulate.add_argument('--family', choices=[ARCS, NODULES])
    simulate.add_argument('--epsilons', type=float, nargs='+')
    simulate.add_argument('--n-per-group', dest='n_per_group', type=int)
    simulate.add_argument('--replicates', type=int)
    simulate.add_argument('--directions', type=int)
    simulate.add_argument('--levels', type=int)
    simulate.add_argument('--resolution', type=int)
    simulate.add_argument('--noise-sd', dest='noise_sd', type=float)
    simulate.add_argument('--noise-mean', dest='noise_mean', type=float)
    simulate.add_argument('--method', choices=[BOTH, SECT, ECT])
    simulate.add_argument('--repeats', type=int, help='Split-half repeats of the nodule family.')
    simulate.add_argument('--alpha', type=float)
    simulate.add_argument('--permutations', type=int)
    simulate.add_argument('--seed', type=int)
    simulate.add_argument('--radius', type=float)
    simulate.add_argument('--dump-masks', dest='dump_masks', action='store_true', default=None,
                          help='Write the shapes of replicate 0 as PGM files.')
    simulate.add_argument('--out', help='Output directory.')

    split = commands.add_parser(SPLIT_TEST, parents=[common], help='Split-half tests within one matrix directory.')
    split.add_argument('--group', help='Directory of matrix CSVs.')
    split.add_argument('--repeats', type=int)
    _add_test_arguments(split, [SECT, ECT])
    split.add_argument('--out', help='Output directory for the p-value CSV.')

    return parser


def get_task_config(args: argparse.Namespace) -> dict:
    """
    Function to merge the config file (if any) with the flags that were given explicitly.
    """

    flags = {key: value for key, value in vars(args).items() if value is not None and key not in ('config', 'verbose')}
    if flags.get('inputs') == []:
        flags.pop('inputs')

    config = read_config_file(args.config) if args.config else {}
    if config.get('type', args.type) != args.type:
        raise ConfigurationError(f'Config file {args.config} describes a {config["type"]!r} task, not {args.type!r}!')

    for first, second in EXCLUSIVE_KEYS:
        if first in flags:
            config.pop(second, None)
        if second in flags:
            config.pop(first, None)

    config.update(flags)

    return config


def main(argv: Optional[List[str]] = None) -> int:
    args = get_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else SECTFLOW_LOG_LEVEL,
        format='%(asctime)s %(levelname)s %(message)s'
    )

    try:
        outcome = generate_tasks(get_task_config(args))
    except ConfigurationError as error:
        logging.error(f'Configuration error: {error}')
        return EXIT_CONFIG
    except InvalidArgumentError as error:
        logging.error(f'Invalid argument: {error}')
        return EXIT_USAGE
    except DATA_ERRORS as error:
        logging.error(f'Data error: {error}')
        return EXIT_DATA_ERROR
    except OSError as error:
        logging.error(f'Cannot read input: {error}')
        return EXIT_NO_INPUT
    except Exception:
        logging.exception('Unexpected failure!')
        return EXIT_SOFTWARE

    if args.type == TRANSFORM:
        outcome = {'outputs': outcome}
    print(json.dumps(outcome, sort_keys=True))

    if args.type == PERMUTATION_TEST:
        return EXIT_REJECT if outcome['decision'] == REJECT else EXIT_ACCEPT

    return EXIT_ACCEPT
