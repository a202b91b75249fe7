# -*- coding: utf-8 -*-
# SPDX-FileCopyrightText: 2024 metaconflict developers
#
# SPDX-License-Identifier: AGPL-3.0-or-later

import argparse
import logging
from pathlib import Path
from typing import List, Optional

import psutil

from metaconflict.config import Config
from metaconflict.search import (
    DEFAULT_MAX_ITEMS_EXACT,
    DEFAULT_RESTARTS,
    MAX_SEED,
)

DEFAULT_CONFIG_PATH = "~/.config/metaconflict.conf"
DEFAULT_LOG_CONFIG_PATH = "~/.config/metaconflict-logging.conf"
DEFAULT_LOG_LEVEL = "WARNING"
DEFAULT_SEED = 0
DEFAULT_WORKERS = 1
DEFAULT_OUTPUT = "json"
DEFAULT_FRAME_SIZE = 0  # 0 = one atom per cluster
DEFAULT_SHARPNESS = 0.9
DEFAULT_LINK_PROBABILITY = 0.8

ParserType = argparse.ArgumentParser
Arguments = argparse.Namespace

logger = logging.getLogger(__name__)


def seed(string: str) -> int:
    """Check if provided string is a 64 bit unsigned integer."""
    value = int(string)
    if not 0 <= value <= MAX_SEED:
        raise argparse.ArgumentTypeError('seed must be in [0, 2^64-1]')
    return value


def positive_int(string: str) -> int:
    value = int(string)
    if value < 1:
        raise argparse.ArgumentTypeError('value must be a positive integer')
    return value


def workers(string: str) -> int:
    """Number of worker processes, 0 meaning one per physical CPU."""
    value = int(string)
    if value < 0:
        raise argparse.ArgumentTypeError('workers must not be negative')
    return value


def probability(string: str) -> float:
    value = float(string)
    if not 0 <= value <= 1:
        raise argparse.ArgumentTypeError('value must be in [0,1]')
    return value


def log_level(string: str) -> str:
    """Check if provided string is a valid log level."""

    if not hasattr(logging, string.upper()):
        raise argparse.ArgumentTypeError(
            'log level must be one of {debug,info,warning,error,critical}'
        )
    return string.upper()


class CliParser:
    def __init__(self, description: str = 'metaconflict') -> None:
        """Create a command-line arguments parser for metaconflict."""
        self._name = description
        parser = argparse.ArgumentParser(
            prog='metaconflict',
            description=(
                'Cluster belief functions by minimizing the metaconflict '
                'of attracting and conflicting metalevel evidence.'
            ),
        )

        parser.add_argument(
            '--version', action='store_true', help='Print version then exit.'
        )
        parser.add_argument(
            '-s',
            '--config',
            nargs='?',
            help=f'Configuration file path (default: {DEFAULT_CONFIG_PATH})',
        )
        parser.add_argument(
            '--log-config',
            nargs='?',
            default=DEFAULT_LOG_CONFIG_PATH,
            help='Log configuration file path (default: %(default)s)',
        )
        parser.add_argument(
            '-L',
            '--log-level',
            default=DEFAULT_LOG_LEVEL,
            type=log_level,
            help='Wished level of logging. Default: %(default)s',
        )
        parser.add_argument(
            '-l', '--log-file', help='Path to the logging file.'
        )

        subparsers = parser.add_subparsers(dest='command', metavar='COMMAND')

        report = argparse.ArgumentParser(add_help=False)
        report.add_argument(
            'instance', type=Path, help='Problem instance file (JSON).'
        )
        report.add_argument(
            '--output',
            default=DEFAULT_OUTPUT,
            choices=['json', 'text'],
            help='Report format. Default: %(default)s',
        )

        weighting = argparse.ArgumentParser(add_help=False)
        weighting.add_argument(
            '--alpha',
            type=probability,
            default=None,
            help=(
                'Weight of the attracting term. Skips the entropy stage. '
                'Default: computed from the evidence'
            ),
        )

        cluster = subparsers.add_parser(
            'cluster',
            parents=[report, weighting],
            help='Find the partition with minimal metaconflict.',
        )
        cluster.add_argument(
            '--method',
            choices=['exact', 'local'],
            default=None,
            help=(
                'Search method. Default: exact for at most '
                '--max-items-exact items, local otherwise'
            ),
        )
        cluster.add_argument(
            '--seed',
            type=seed,
            default=DEFAULT_SEED,
            help='Seed of the local search. Default: %(default)s',
        )
        cluster.add_argument(
            '--restarts',
            type=positive_int,
            default=DEFAULT_RESTARTS,
            help='Restarts of the local search. Default: %(default)s',
        )
        cluster.add_argument(
            '--max-items-exact',
            type=positive_int,
            default=DEFAULT_MAX_ITEMS_EXACT,
            help='Largest item count for exact search. Default: %(default)s',
        )
        cluster.add_argument(
            '--workers',
            type=workers,
            default=DEFAULT_WORKERS,
            help=(
                'Worker processes for local search restarts, 0 for one per '
                'physical CPU. Default: %(default)s'
            ),
        )

        subparsers.add_parser(
            'evaluate',
            parents=[report, weighting],
            help='Report the metaconflict of the partition in the instance.',
        )
        subparsers.add_parser(
            'entropy',
            parents=[report],
            help='Report the entropies of the pooled metalevel evidence.',
        )

        generate = subparsers.add_parser(
            'generate', help='Write a synthetic instance with ground truth.'
        )
        generate.add_argument(
            'out_file', type=Path, help='Instance file to write.'
        )
        generate.add_argument(
            '-n', '--items', type=positive_int, required=True, dest='n'
        )
        generate.add_argument(
            '-k', '--clusters', type=positive_int, required=True, dest='k'
        )
        generate.add_argument(
            '--frame-size',
            type=int,
            default=DEFAULT_FRAME_SIZE,
            help='Atoms of the frame, 0 for one per cluster. '
            'Default: %(default)s',
        )
        generate.add_argument(
            '--sharpness',
            type=probability,
            default=DEFAULT_SHARPNESS,
            help='Mass on the cluster atom. Default: %(default)s',
        )
        generate.add_argument(
            '--link-probability',
            type=probability,
            default=DEFAULT_LINK_PROBABILITY,
            help='Attraction within clusters. Default: %(default)s',
        )
        generate.add_argument(
            '--seed',
            type=seed,
            default=DEFAULT_SEED,
            help='Seed of the generator. Default: %(default)s',
        )

        self.parser = parser
        self._subparsers = subparsers

    def _set_defaults(self, configfilename: Optional[str] = None) -> None:
        self._config = self._load_config(configfilename)
        defaults = self._config.defaults()
        for parser in [self.parser, *self._subparsers.choices.values()]:
            # pylint: disable=protected-access
            dests = {action.dest for action in parser._actions}
            parser.set_defaults(
                **{k: v for k, v in defaults.items() if k in dests}
            )

    def _load_config(self, configfile: Optional[str]) -> Config:
        config = Config(self._name)

        configpath = Path(configfile or DEFAULT_CONFIG_PATH)

        if not configpath.expanduser().resolve().exists():
            if configfile:
                # user has passed an config file
                # print error and exit
                self.parser.error(f'Config file {configpath} does not exist')
            else:
                logger.debug('Ignoring non existing config file %s', configpath)
                return config

        try:
            config.load(configpath)
            logger.debug('Loaded config %s', configpath)
        except Exception as e:  # pylint: disable=broad-except
            self.parser.error(
                f'Error while parsing config file {configpath}. Error was {e}'
            )

        return config

    def parse_arguments(self, args: Optional[List[str]] = None) -> Arguments:
        # Parse args to get the config file path passed as option
        _args, _ = self.parser.parse_known_args(args)

        # Load the defaults from the config file if it exists. Options
        # given on the command line still take precedence.
        self._set_defaults(_args.config)
        args = self.parser.parse_args(args)

        if not args.version and not args.command:
            self.parser.error('a command is required')

        self._check_choices(args)

        if getattr(args, 'workers', None) == 0:
            args.workers = psutil.cpu_count(logical=False) or 1

        return args

    def _check_choices(self, args: Arguments) -> None:
        """Defaults from the config file bypass the choices check of
        argparse."""
        parser = self._subparsers.choices.get(args.command)
        if parser is None:
            return

        # pylint: disable=protected-access
        for action in parser._actions:
            value = getattr(args, action.dest, None)
            if action.choices and value is not None:
                if value not in action.choices:
                    choices = ', '.join(map(repr, action.choices))
                    self.parser.error(
                        f'invalid {action.dest} {value!r} '
                        f'(choose from {choices})'
                    )


def create_parser(description: str = 'metaconflict') -> CliParser:
    return CliParser(description)
