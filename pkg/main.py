import argparse
import logging
import sys
import time

import coloredlogs

from stapde.commands import COMMANDS, run_command
from stapde.exceptions import EXIT_IO, StapdeError
from stapde.experimentOptions import ExperimentOptions
from stapde.formatter import StapdeFormatter

log = logging.getLogger('stapde')


def parse_args():
    parser = argparse.ArgumentParser(description='Clifford and spacetime-algebra surrogates for Maxwell simulations')
    parser.add_argument(
        'command',
        choices=list(COMMANDS),
        help='gen: simulate datasets; train: fit models; eval: single-step metrics; rollout: multi-step metrics; '
             'export: field maps and loss tables; selftest: algebra oracle and gradient checks.')
    parser.add_argument(
        '--config',
        help='Experiment configuration file (INI).')
    parser.add_argument(
        '--set',
        action='append',
        default=[],
        metavar='SECTION.KEY=VALUE',
        help='Override one configuration key. May be repeated.')
    parser.add_argument(
        '--output',
        help='Output directory; overrides [experiment] output_dir.')
    parser.add_argument(
        '--log-level',
        default='info')
    parser.add_argument(
        '--test',
        action='store_true',
        help='Evaluate at 64-bit and record runs in experiments-test.db'
    )
    return parser.parse_args()


log_level_table = {
    'warn': logging.WARN,
    'warning': logging.WARNING,
    'info': logging.INFO,
    'debug': logging.DEBUG,
    'error': logging.ERROR,
    'critical': logging.CRITICAL
}

args = parse_args()
log_test_indicator = ' [TEST] ' if args.test else ''
log_level = log_level_table[args.log_level.lower()]
log_format = '%(levelname)s' + log_test_indicator + ':%(name)s: %(asctime)s - %(message)s'
coloredlogs.install(level=log_level, fmt=log_format, datefmt='%Y-%m-%d %H:%M:%S')
logging.basicConfig(level=log_level, datefmt='%Y-%m-%d %H:%M:%S', format=log_format)

start_time = time.time()
try:
    if args.command == 'selftest' and args.config is None:
        options = None
    else:
        options = ExperimentOptions.load(args.config, args.set, args.output)
        options.is_test_mode = args.test
        options.workers = ExperimentOptions.threads_from_environment()
    log.info(f'{args.command} - STARTED')
    exit_code = run_command(args.command, options)
    log.info(f'{args.command} - COMPLETED in {StapdeFormatter.format_elapsed(time.time() - start_time)}')
except StapdeError as e:
    log.error(str(e))
    exit_code = e.exit_code
except OSError as e:
    log.error(f'I/O failure: {e}')
    exit_code = EXIT_IO

sys.exit(exit_code)
