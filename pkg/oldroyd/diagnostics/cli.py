#!/usr/bin/env python
# encoding: utf-8

# Copyright (C) oldroyd-fe developers
# All rights reserved.

"""Command line entry point.

::

    oldroyd-fe run --config run.ini
    oldroyd-fe check --config run.ini
    oldroyd-fe verify-lemmas --samples 10000 --seed 0
    oldroyd-fe sweep --config run.ini --dt 0.01 0.05 0.25 1.0
"""

import argparse
import json
import logging
import sys

from ..exceptions import ConfigError, MeshError, SolverException
from ..version import __version__
from .lemmas import verify_lemmas
from .run_config import load_run_config
from .runner import EXIT_CONFIG, EXIT_PASS, EXIT_SOLVER, EXIT_CERTIFICATE, dt_sweep, log_separation, run_simulation

__all__ = ['main', 'build_parser']

logger = logging.getLogger(__name__)

LOG_FORMAT = '%(asctime)s %(levelname)s %(name)s: %(message)s'


def build_parser():
    parser = argparse.ArgumentParser(prog='oldroyd-fe', description='Energy stable Oldroyd-B finite element runs')
    parser.add_argument('--version', action='version', version='%(prog)s ' + __version__)
    parser.add_argument('--log-level', default='INFO', choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'],
                        help='root logger level')
    sub = parser.add_subparsers(dest='command')

    run = sub.add_parser('run', help='run a configuration and write its energy trace and certificate summary')
    run.add_argument('--config', required=True, help='INI run configuration')

    check = sub.add_parser('check', help='run a configuration and stop at the first failed certificate')
    check.add_argument('--config', required=True, help='INI run configuration')

    lemmas = sub.add_parser('verify-lemmas', help='randomized checks of the matrix inequalities and identities')
    lemmas.add_argument('--samples', type=int, default=10000, help='random matrices per suite')
    lemmas.add_argument('--seed', type=int, default=0, help='random seed')

    sweep = sub.add_parser('sweep', help='conformation against log formulation over several time steps')
    sweep.add_argument('--config', required=True, help='INI run configuration of the scenario')
    sweep.add_argument('--dt', type=float, nargs='+', default=[0.01, 0.05, 0.25, 1.0], help='time steps')
    return parser


def _verify_lemmas(args):
    report = verify_lemmas(args.samples, args.seed)
    print(json.dumps(report.to_dict(), indent=2, sort_keys=True, default=str))
    return EXIT_PASS if report.passed else EXIT_CERTIFICATE


def _sweep(args):
    try:
        cfg = load_run_config(args.config)
        outcomes = dt_sweep(cfg, args.dt)
    except (ConfigError, MeshError) as ex:
        logger.error(u"cannot sweep {0}: {1}".format(args.config, ex))
        return EXIT_CONFIG
    print(json.dumps({'outcomes': [o._asdict() for o in outcomes], 'separated': log_separation(outcomes)},
                     indent=2, sort_keys=True, default=str))
    return EXIT_PASS


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=getattr(logging, args.log_level), format=LOG_FORMAT)
    if args.command is None:
        parser.print_help()
        return EXIT_CONFIG

    try:
        if args.command == 'run':
            return run_simulation(args.config)
        if args.command == 'check':
            return run_simulation(args.config, stop_on_failure=True)
        if args.command == 'verify-lemmas':
            return _verify_lemmas(args)
        return _sweep(args)
    except SolverException as ex:
        logger.error(u"{0} aborted: {1}".format(args.command, ex))
        return EXIT_SOLVER


if __name__ == '__main__':
    sys.exit(main())
