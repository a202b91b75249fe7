# -*- coding: utf-8 -*-
# SPDX-FileCopyrightText: 2024 metaconflict developers
#
# SPDX-License-Identifier: AGPL-3.0-or-later

"""Command line front end.

Runs evidence level, cluster level, partition level, weighting and
minimization in that order and prints machine-readable reports.
"""

import json
import logging
import math
import sys

from typing import Any, Callable, Dict, List, Optional

from metaconflict import __version__
from metaconflict.errors import InputError, MetaconflictError
from metaconflict.evidence import AttractionMatrix, ConflictMatrix
from metaconflict.instance import ProblemInstance
from metaconflict.logger import init_logging
from metaconflict.parser import Arguments, create_parser
from metaconflict.scenario import generate
from metaconflict.search import (
    SearchConfig,
    evaluate_partition,
    legacy_mcf,
    logsum_objective,
    search,
    subset_conflicts,
)
from metaconflict.timer import Timer
from metaconflict.weighting import entropy_report

COPYRIGHT = """Copyright (C) 2024 metaconflict developers
License AGPL-3.0-or-later
This is free software: you are free to change and redistribute it.
There is NO WARRANTY, to the extent permitted by law."""

SINGLETON_BIAS = (
    'The attracting support of the partition is 0. Partitions with a '
    'singleton cluster never receive attracting support, which biases the '
    'search towards fewer clusters.'
)
DEGENERATE_ALPHA = (
    'Neither attracting nor conflicting evidence carries information; '
    'alpha is set to 0.5 and the metaconflict is constant.'
)

Report = Dict[str, Any]

logger = logging.getLogger(__name__)


def print_version(file=None) -> None:
    """Prints the version and license information."""
    file = file or sys.stdout
    print(f"metaconflict {__version__}", file=file)
    print(file=file)
    print(COPYRIGHT, file=file)


def _finite(value: float) -> Any:
    return value if math.isfinite(value) else 'inf'


def _weighting(
    conflict: ConflictMatrix,
    attraction: AttractionMatrix,
    args: Arguments,
    report: Report,
) -> float:
    """Alpha from the override or the entropies; records both in the
    report."""
    override = getattr(args, 'alpha', None)
    if override is not None:
        report['alpha_source'] = 'override'
        return override

    with Timer('weighting'):
        entropy = entropy_report(conflict, attraction)
    report['alpha_source'] = 'entropy'
    report['entropy'] = entropy.serialize()
    if entropy.degenerate:
        report['advisories'].append(DEGENERATE_ALPHA)
    return entropy.alpha


def _base_report(command: str, instance: ProblemInstance) -> Report:
    return {
        'command': command,
        'mode': 'evidence' if instance.evidence_mode else 'matrix',
        'n': instance.n,
        'advisories': [],
    }


def cmd_cluster(args: Arguments) -> Report:
    instance = ProblemInstance.load(args.instance)
    report = _base_report('cluster', instance)

    with Timer('evidence level'):
        conflict = instance.conflict_matrix()
    report['conflict'] = conflict.tolist()

    alpha = _weighting(conflict, instance.attraction, args, report)
    config = SearchConfig(
        method=args.method,
        seed=args.seed,
        restarts=args.restarts,
        max_items_exact=args.max_items_exact,
        alpha_override=args.alpha,
        workers=args.workers,
    )
    method = config.resolve_method(instance.n)
    report['method'] = method.value
    if method.value == 'local':
        report['seed'] = config.seed
        report['restarts'] = config.restarts

    result = search(conflict, instance.attraction, alpha, config)
    report['alpha'] = alpha
    report['result'] = result.serialize()
    if result.attraction_vanishes:
        report['advisories'].append(SINGLETON_BIAS)
    if instance.truth is not None:
        report['truth_recovered'] = result.partition == instance.truth

    return report


def cmd_evaluate(args: Arguments) -> Report:
    instance = ProblemInstance.load(args.instance)
    partition = instance.partition
    if partition is None:
        partition = instance.truth
    if partition is None:
        raise InputError(f'Instance {args.instance} has no partition')

    report = _base_report('evaluate', instance)
    conflict = instance.conflict_matrix()
    alpha = _weighting(conflict, instance.attraction, args, report)

    result = evaluate_partition(conflict, instance.attraction, alpha, partition)
    report['alpha'] = alpha
    report['result'] = result.serialize()
    report['logsum'] = _finite(logsum_objective(conflict, partition))

    if instance.evidence_mode:
        conflicts = subset_conflicts(instance.items, partition)
        report['legacy'] = {
            'subset_conflicts': conflicts,
            'mcf': legacy_mcf(conflicts),
        }
    if result.attraction_vanishes:
        report['advisories'].append(SINGLETON_BIAS)

    return report


def cmd_entropy(args: Arguments) -> Report:
    instance = ProblemInstance.load(args.instance)
    report = _base_report('entropy', instance)

    entropy = entropy_report(instance.conflict_matrix(), instance.attraction)
    report.update(entropy.serialize())
    if entropy.degenerate:
        report['advisories'].append(DEGENERATE_ALPHA)

    return report


def cmd_generate(args: Arguments) -> Report:
    frame_size = args.frame_size or args.k
    scenario = generate(
        args.n,
        args.k,
        frame_size,
        args.sharpness,
        args.link_probability,
        args.seed,
    )
    scenario.to_instance().dump(args.out_file)

    report = {'command': 'generate', 'file': str(args.out_file)}
    report.update(scenario.params.serialize())
    report['seed'] = scenario.seed
    report['truth'] = scenario.truth.serialize()
    return report


COMMANDS = {
    'cluster': cmd_cluster,
    'evaluate': cmd_evaluate,
    'entropy': cmd_entropy,
    'generate': cmd_generate,
}  # type: Dict[str, Callable[[Arguments], Report]]


def _text_lines(value: Any, prefix: str) -> List[str]:
    if isinstance(value, dict):
        lines = []
        for key in sorted(value):
            name = f'{prefix}.{key}' if prefix else key
            lines.extend(_text_lines(value[key], name))
        return lines
    return [f'{prefix}: {json.dumps(value)}']


def render(report: Report, output: str = 'json') -> str:
    if output == 'json':
        return json.dumps(report, indent=2, sort_keys=True) + '\n'
    if output == 'text':
        return '\n'.join(_text_lines(report, '')) + '\n'
    raise InputError(f'Unknown output format {output!r}')


def main(args: Optional[List[str]] = None) -> int:
    """metaconflict main function."""

    parser = create_parser()
    arguments = parser.parse_arguments(args)

    if arguments.version:
        print_version()
        return 0

    init_logging(
        arguments.log_level,
        log_file=arguments.log_file,
        log_config=arguments.log_config,
    )

    try:
        report = COMMANDS[arguments.command](arguments)
        output = render(report, getattr(arguments, 'output', 'json'))
    except MetaconflictError as e:
        logger.error('%s', e)
        return e.status

    sys.stdout.write(output)
    return 0


if __name__ == '__main__':
    sys.exit(main())
