# -*- coding: utf-8 -*-
# SPDX-FileCopyrightText: 2024 metaconflict developers
#
# SPDX-License-Identifier: AGPL-3.0-or-later

"""Problem instance documents.

An instance is a single JSON document holding either a frame and evidence
items (evidence mode) or a conflict matrix (matrix mode), plus optional
attraction and external conflict triplets and an optional partition.
"""

import json
import logging

from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

from packaging.version import InvalidVersion, Version

from metaconflict.errors import InputError
from metaconflict.evidence import (
    AttractionMatrix,
    ConflictMatrix,
    EvidenceItem,
    Frame,
    MassFunction,
    PairwiseMatrix,
    check_unique_ids,
    conflict_matrix,
)
from metaconflict.metalevel import (
    Partition,
    check_probability,
    merge_external_conflict,
)

logger = logging.getLogger(__name__)

FORMAT_VERSION = Version('1.0')

Triplet = Tuple[int, int, float]


def _require(data: Dict[str, Any], key: str, kind: type) -> Any:
    value = data.get(key)
    if not isinstance(value, kind):
        raise InputError(f'Field {key!r} must be a {kind.__name__}')
    return value


def _parse_matrix(data: Dict[str, Any], key: str) -> List[List[float]]:
    rows = _require(data, key, list)
    for row in rows:
        if not isinstance(row, list):
            raise InputError(f'Rows of {key!r} must be lists')
        for value in row:
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise InputError(f'Invalid {key} entry {value!r}')
    return rows


def _parse_version(data: Dict[str, Any]) -> Version:
    raw = data.get('format_version', str(FORMAT_VERSION))
    try:
        version = Version(str(raw))
    except InvalidVersion:
        raise InputError(f'Invalid format_version {raw!r}') from None
    if version.major > FORMAT_VERSION.major:
        raise InputError(
            f'Instance format {version} is newer than the supported '
            f'format {FORMAT_VERSION}'
        )
    return version


def _parse_items(frame: Frame, raw_items: List[Any]) -> List[EvidenceItem]:
    items = []
    for raw in raw_items:
        if not isinstance(raw, dict):
            raise InputError('Evidence items must be objects')
        item_id = raw.get('id')
        masses = _require(raw, 'masses', list)
        focal_masses = []
        for entry in masses:
            if not isinstance(entry, dict):
                raise InputError(f'Masses of {item_id!r} must be objects')
            focal = _require(entry, 'focal', list)
            mass = entry.get('mass')
            if isinstance(mass, bool) or not isinstance(mass, (int, float)):
                raise InputError(f'Mass of {item_id!r} must be a number')
            focal_masses.append((focal, mass))
        mass_function = MassFunction.from_focal_atoms(frame, focal_masses)
        items.append(EvidenceItem(item_id, mass_function))
    check_unique_ids(items)
    return items


def _parse_triplets(
    raw_triplets: Any, key: str, n: int, ids: Dict[str, int]
) -> List[Triplet]:
    if not isinstance(raw_triplets, list):
        raise InputError(f'Field {key!r} must be a list')

    def resolve(endpoint: Any) -> int:
        if isinstance(endpoint, str):
            if endpoint not in ids:
                raise InputError(f'Unknown item id {endpoint!r} in {key!r}')
            return ids[endpoint]
        if isinstance(endpoint, bool) or not isinstance(endpoint, int):
            raise InputError(f'Invalid item reference {endpoint!r} in {key!r}')
        if not 0 <= endpoint < n:
            raise InputError(f'Item index {endpoint} out of range in {key!r}')
        return endpoint

    triplets = []
    for raw in raw_triplets:
        if not isinstance(raw, dict):
            raise InputError(f'Entries of {key!r} must be objects')
        value = check_probability(raw.get('p'), f'{key} value')
        triplets.append((resolve(raw.get('i')), resolve(raw.get('j')), value))
    return triplets


def _parse_partition(raw: Any, n: int, key: str) -> Partition:
    if not isinstance(raw, list) or len(raw) != n:
        raise InputError(f'Field {key!r} must be a list of {n} labels')
    for label in raw:
        if isinstance(label, bool) or not isinstance(label, int):
            raise InputError(f'Invalid cluster label {label!r} in {key!r}')
    if sorted(set(raw)) != list(range(len(set(raw)))):
        raise InputError(f'Labels of {key!r} must form the range 0..r-1')
    return Partition.canonical(raw)


def _serialize_triplets(matrix: PairwiseMatrix) -> List[Dict[str, Any]]:
    return [
        {'i': i, 'j': j, 'p': matrix[i, j]}
        for i in range(matrix.n)
        for j in range(i + 1, matrix.n)
        if matrix[i, j] > 0
    ]


@dataclass(frozen=True)
class ProblemInstance:
    """A clustering problem as read from or written to a file"""

    attraction: AttractionMatrix
    frame: Optional[Frame] = None
    items: Optional[Tuple[EvidenceItem, ...]] = None
    conflict: Optional[ConflictMatrix] = None
    external_conflict: Optional[ConflictMatrix] = None
    partition: Optional[Partition] = None
    truth: Optional[Partition] = None
    format_version: Version = FORMAT_VERSION

    def __post_init__(self) -> None:
        if (self.items is None) == (self.conflict is None):
            raise InputError(
                'An instance needs either evidence items or a conflict matrix'
            )
        if self.items is not None and self.frame is None:
            raise InputError('Evidence items need a frame')

        n = self.n
        for name in ('attraction', 'external_conflict'):
            matrix = getattr(self, name)
            if matrix is not None and matrix.n != n:
                raise InputError(f'{name} has size {matrix.n}, expected {n}')
        for name in ('partition', 'truth'):
            partition = getattr(self, name)
            if partition is not None and partition.n != n:
                raise InputError(
                    f'{name} has {partition.n} items, expected {n}'
                )

    @property
    def evidence_mode(self) -> bool:
        return self.items is not None

    @property
    def n(self) -> int:
        if self.items is not None:
            return len(self.items)
        return self.conflict.n

    def internal_conflict(self) -> ConflictMatrix:
        """Pairwise conflicts of the evidence, or the given matrix."""
        if self.items is not None:
            return conflict_matrix(self.items, self.frame)
        return self.conflict

    def conflict_matrix(self) -> ConflictMatrix:
        """Conflicts with the external conflicting evidence merged in."""
        conflict = self.internal_conflict()
        if self.external_conflict is not None:
            conflict = merge_external_conflict(
                conflict, self.external_conflict
            )
        return conflict

    @classmethod
    def deserialize(cls, data: Any) -> "ProblemInstance":
        if not isinstance(data, dict):
            raise InputError('An instance must be a JSON object')

        version = _parse_version(data)

        has_items = 'items' in data
        has_conflict = 'conflict' in data
        if has_items == has_conflict:
            raise InputError(
                'Exactly one of "items" and "conflict" must be given'
            )

        frame = None
        items = None
        conflict = None
        ids = {}  # type: Dict[str, int]

        if has_items:
            frame = Frame(tuple(_require(data, 'frame', list)))
            items = tuple(_parse_items(frame, _require(data, 'items', list)))
            if not items:
                raise InputError('At least one evidence item is required')
            ids = {item.id: i for i, item in enumerate(items)}
            n = len(items)
        else:
            conflict = ConflictMatrix(_parse_matrix(data, 'conflict'))
            n = conflict.n

        attraction = AttractionMatrix.from_triplets(
            n, _parse_triplets(data.get('attraction', []), 'attraction', n, ids)
        )

        external = None
        if 'external_conflict' in data:
            external = ConflictMatrix.from_triplets(
                n,
                _parse_triplets(
                    data['external_conflict'], 'external_conflict', n, ids
                ),
            )

        partition = None
        if 'partition' in data:
            partition = _parse_partition(data['partition'], n, 'partition')
        truth = None
        if 'truth' in data:
            truth = _parse_partition(data['truth'], n, 'truth')

        return cls(
            attraction=attraction,
            frame=frame,
            items=items,
            conflict=conflict,
            external_conflict=external,
            partition=partition,
            truth=truth,
            format_version=version,
        )

    @classmethod
    def loads(cls, payload: Union[str, bytes]) -> "ProblemInstance":
        try:
            data = json.loads(payload)
        except ValueError as e:
            raise InputError(f'Instance is not valid JSON. {e}') from None
        except RecursionError:
            raise InputError('Instance JSON is nested too deeply') from None
        return cls.deserialize(data)

    @classmethod
    def load(cls, path: Path) -> "ProblemInstance":
        try:
            payload = Path(path).read_text(encoding='utf-8')
        except OSError as e:
            raise InputError(f'Could not read instance {path}. {e}') from None
        except UnicodeDecodeError as e:
            raise InputError(f'Instance {path} is not UTF-8. {e}') from None

        instance = cls.loads(payload)
        logger.info(
            'Loaded instance %s with %d items (%s mode)',
            path,
            instance.n,
            'evidence' if instance.evidence_mode else 'matrix',
        )
        return instance

    def serialize(self) -> Dict[str, Any]:
        data = {
            'format_version': str(self.format_version),
        }  # type: Dict[str, Any]
        if self.items is not None:
            data['frame'] = list(self.frame.atoms)
            data['items'] = [
                {'id': item.id, 'masses': item.mass.serialize()}
                for item in self.items
            ]
        else:
            data['conflict'] = self.conflict.tolist()

        data['attraction'] = _serialize_triplets(self.attraction)
        if self.external_conflict is not None:
            data['external_conflict'] = _serialize_triplets(
                self.external_conflict
            )
        if self.partition is not None:
            data['partition'] = self.partition.serialize()
        if self.truth is not None:
            data['truth'] = self.truth.serialize()
        return data

    def dumps(self) -> str:
        return json.dumps(self.serialize(), indent=2, sort_keys=True) + '\n'

    def dump(self, path: Path) -> None:
        try:
            Path(path).write_text(self.dumps(), encoding='utf-8')
        except OSError as e:
            raise InputError(f'Could not write instance {path}. {e}') from None
