# -*- coding: utf-8 -*-
# SPDX-FileCopyrightText: 2024 metaconflict developers
#
# SPDX-License-Identifier: AGPL-3.0-or-later

"""Frames of discernment, basic probability assignments and the conflict of
Dempster's rule between belief functions."""

import logging
import math

from dataclasses import dataclass, field
from functools import reduce
from types import MappingProxyType
from typing import (
    Any,
    Dict,
    Iterable,
    List,
    Mapping,
    Optional,
    Sequence,
    Tuple,
    Union,
)

import numpy as np

from metaconflict.errors import InputError

logger = logging.getLogger(__name__)

MAX_FRAME_SIZE = 64
MASS_TOLERANCE = 1e-9


@dataclass(frozen=True)
class Frame:
    """An ordered set of distinct atoms.

    Focal sets are bit masks against this order, so the order is fixed
    once the frame is created.
    """

    atoms: Tuple[str, ...]
    _index: Dict[str, int] = field(
        init=False, repr=False, compare=False, hash=False
    )

    def __post_init__(self) -> None:
        atoms = tuple(self.atoms)
        object.__setattr__(self, 'atoms', atoms)

        if not atoms:
            raise InputError('A frame needs at least one atom')
        if len(atoms) > MAX_FRAME_SIZE:
            raise InputError(
                f'Frame has {len(atoms)} atoms, at most {MAX_FRAME_SIZE} '
                'are supported'
            )
        for atom in atoms:
            if not isinstance(atom, str) or not atom:
                raise InputError(f'Invalid atom label {atom!r}')
        if len(set(atoms)) != len(atoms):
            raise InputError(f'Duplicate atom labels in frame {list(atoms)}')

        object.__setattr__(
            self, '_index', {atom: i for i, atom in enumerate(atoms)}
        )

    def __len__(self) -> int:
        return len(self.atoms)

    @property
    def full_mask(self) -> int:
        return (1 << len(self.atoms)) - 1

    def index(self, atom: str) -> int:
        try:
            return self._index[atom]
        except (KeyError, TypeError):
            raise InputError(f'Unknown atom {atom!r}') from None

    def mask(self, atoms: Iterable[str]) -> int:
        """Return the bit mask of a set of atoms."""
        result = 0
        for atom in atoms:
            result |= 1 << self.index(atom)
        return result

    def atoms_of(self, mask: int) -> List[str]:
        return [atom for i, atom in enumerate(self.atoms) if mask >> i & 1]


class MassFunction:
    """A basic probability assignment over a frame.

    Entries map non-empty focal sets (bit masks) to their mass. The mass of
    the empty set is kept apart in ``empty_mass``; it is only non-zero for
    results of a combination, where it carries the conflict.
    """

    __slots__ = ('_frame', '_entries', '_empty_mass')

    def __init__(
        self,
        frame: Frame,
        entries: Mapping[int, float],
        empty_mass: float = 0.0,
    ) -> None:
        full_mask = frame.full_mask
        cleaned = {}  # type: Dict[int, float]

        for mask, mass in entries.items():
            if not isinstance(mask, int) or not 0 < mask <= full_mask:
                raise InputError(f'Invalid focal set {mask!r} for the frame')
            mass = float(mass)
            if not math.isfinite(mass) or mass < 0:
                raise InputError(f'Invalid mass {mass} for a focal set')
            # zero-mass focal sets are dropped
            if mass > 0:
                cleaned[mask] = mass

        empty_mass = float(empty_mass)
        if not math.isfinite(empty_mass) or not 0 <= empty_mass <= 1:
            raise InputError(f'Invalid mass {empty_mass} for the empty set')

        total = math.fsum(cleaned.values()) + empty_mass
        if abs(total - 1.0) > MASS_TOLERANCE:
            raise InputError(f'Masses sum to {total!r} instead of 1')
        if total != 1.0:
            cleaned = {mask: mass / total for mask, mass in cleaned.items()}
            empty_mass /= total

        self._frame = frame
        self._entries = MappingProxyType(cleaned)
        self._empty_mass = empty_mass

    @classmethod
    def from_focal_atoms(
        cls,
        frame: Frame,
        focal_masses: Iterable[Tuple[Iterable[str], float]],
    ) -> "MassFunction":
        """Create user supplied evidence from (atoms, mass) pairs.

        The focal sets of such evidence must not be empty and each focal set
        may only be listed once.
        """
        entries = {}  # type: Dict[int, float]
        for atoms, mass in focal_masses:
            mask = frame.mask(atoms)
            if not mask:
                raise InputError('Focal sets of evidence must not be empty')
            if mask in entries:
                raise InputError(
                    f'Focal set {frame.atoms_of(mask)} is listed twice'
                )
            entries[mask] = mass

        return cls(frame, entries)

    @classmethod
    def vacuous(cls, frame: Frame) -> "MassFunction":
        return cls(frame, {frame.full_mask: 1.0})

    @property
    def frame(self) -> Frame:
        return self._frame

    @property
    def entries(self) -> Mapping[int, float]:
        return self._entries

    @property
    def empty_mass(self) -> float:
        return self._empty_mass

    def mass(self, atoms: Iterable[str]) -> float:
        """Return the mass of a focal set given by its atoms."""
        mask = self._frame.mask(atoms)
        if not mask:
            return self._empty_mass
        return self._entries.get(mask, 0.0)

    def serialize(self) -> List[Dict[str, Any]]:
        return [
            {'focal': self._frame.atoms_of(mask), 'mass': mass}
            for mask, mass in sorted(self._entries.items())
        ]

    def __repr__(self) -> str:
        return (
            f'MassFunction(frame={list(self._frame.atoms)}, '
            f'entries={dict(self._entries)}, empty_mass={self._empty_mass})'
        )


@dataclass(frozen=True)
class EvidenceItem:
    """A belief function to be clustered"""

    id: str
    mass: MassFunction

    def __post_init__(self) -> None:
        if not isinstance(self.id, str) or not self.id:
            raise InputError(f'Invalid evidence id {self.id!r}')


class PairwiseMatrix:
    """A symmetric n×n matrix of pairwise metalevel evidence in [0, 1] with a
    zero diagonal. The values are read-only."""

    name = 'pairwise'

    def __init__(self, values: Union[Sequence[Sequence[float]], np.ndarray]):
        try:
            array = np.array(values, dtype=float)
        except (TypeError, ValueError) as e:
            raise InputError(f'Invalid {self.name} matrix. {e}') from None

        if array.ndim != 2 or array.shape[0] != array.shape[1]:
            raise InputError(f'The {self.name} matrix must be square')
        if array.shape[0] < 1:
            raise InputError(f'The {self.name} matrix must not be empty')
        if not np.all(np.isfinite(array)):
            raise InputError(f'The {self.name} matrix has non-finite values')
        if np.any(array < 0) or np.any(array > 1):
            raise InputError(f'The {self.name} matrix has values outside [0,1]')
        if np.any(np.diag(array) != 0):
            raise InputError(f'The {self.name} matrix diagonal must be zero')
        if not np.array_equal(array, array.T):
            raise InputError(f'The {self.name} matrix is not symmetric')

        array.flags.writeable = False
        self._values = array

    @classmethod
    def zeros(cls, n: int) -> "PairwiseMatrix":
        return cls(np.zeros((n, n)))

    @classmethod
    def from_triplets(
        cls, n: int, triplets: Iterable[Tuple[int, int, float]]
    ) -> "PairwiseMatrix":
        """Build a matrix from (i, j, value) triplets. Absent pairs are 0."""
        if n < 1:
            raise InputError(f'The {cls.name} matrix must not be empty')

        values = np.zeros((n, n))
        seen = set()
        for i, j, value in triplets:
            if not (0 <= i < n and 0 <= j < n):
                raise InputError(f'Pair ({i}, {j}) is out of range for n={n}')
            if i == j:
                raise InputError(f'Pair ({i}, {j}) refers to a single item')
            pair = (min(i, j), max(i, j))
            if pair in seen:
                raise InputError(f'Pair {pair} is given more than once')
            seen.add(pair)
            values[i, j] = values[j, i] = value

        return cls(values)

    @property
    def n(self) -> int:
        return self._values.shape[0]

    @property
    def values(self) -> np.ndarray:
        return self._values

    def __getitem__(self, key: Tuple[int, int]) -> float:
        return float(self._values[key])

    def check_members(self, members: Iterable[int]) -> Tuple[int, ...]:
        """Validate a set of item indices against the matrix."""
        checked = tuple(int(i) for i in members)
        for i in checked:
            if not 0 <= i < self.n:
                raise InputError(f'Item index {i} is out of range')
        if len(set(checked)) != len(checked):
            raise InputError(f'Item indices {list(checked)} are not distinct')
        return checked

    def pair_values(self, members: Sequence[int]) -> np.ndarray:
        """Values of all unordered pairs i < j of the given members."""
        sub = self._values[np.ix_(members, members)]
        return sub[np.triu_indices(len(members), 1)]

    def edges(self) -> np.ndarray:
        """Values of all unordered pairs of the matrix."""
        return self._values[np.triu_indices(self.n, 1)]

    def permuted(self, order: Sequence[int]) -> "PairwiseMatrix":
        return type(self)(self._values[np.ix_(order, order)])

    def tolist(self) -> List[List[float]]:
        return self._values.tolist()

    def __eq__(self, other: object) -> bool:
        if type(other) is not type(self):
            return NotImplemented
        return np.array_equal(self._values, other.values)

    def __repr__(self) -> str:
        return f'{type(self).__name__}({self.tolist()})'


class ConflictMatrix(PairwiseMatrix):
    """Pairwise conflicts c_ij of Dempster's rule"""

    name = 'conflict'


class AttractionMatrix(PairwiseMatrix):
    """Pairwise degrees of attraction p_ij from an external source"""

    name = 'attraction'


def _check_frames(items: Sequence[MassFunction]) -> None:
    frame = items[0].frame
    for item in items[1:]:
        if item.frame != frame:
            raise InputError(
                'Belief functions are defined over different frames '
                f'{list(frame.atoms)} and {list(item.frame.atoms)}'
            )


def combine_pair(a: MassFunction, b: MassFunction) -> MassFunction:
    """Unnormalized conjunctive combination of two mass functions.

    Mass of empty intersections is accumulated in the empty set and no
    normalization is applied.
    """
    _check_frames([a, b])

    combined = {}  # type: Dict[int, float]
    empty = a.empty_mass + b.empty_mass - a.empty_mass * b.empty_mass

    for mask_a, mass_a in a.entries.items():
        for mask_b, mass_b in b.entries.items():
            product = mass_a * mass_b
            intersection = mask_a & mask_b
            if intersection:
                combined[intersection] = (
                    combined.get(intersection, 0.0) + product
                )
            else:
                empty += product

    return MassFunction(a.frame, combined, min(empty, 1.0))


def conflict_pair(a: MassFunction, b: MassFunction) -> float:
    """The conflict of Dempster's rule when combining a and b."""
    return combine_pair(a, b).empty_mass


def conf_subset(items: Sequence[MassFunction]) -> float:
    """The conflict of Dempster's rule when combining all items.

    Folds the unnormalized combination left to right; the empty-set mass of
    the result equals the composed conflict of sequential normalized
    combinations.
    """
    if not items:
        raise InputError('Conflict of an empty set of belief functions')
    _check_frames(items)

    return reduce(combine_pair, items).empty_mass


def check_unique_ids(items: Sequence[EvidenceItem]) -> None:
    seen = set()
    for item in items:
        if item.id in seen:
            raise InputError(f'Evidence id {item.id!r} is not unique')
        seen.add(item.id)


def conflict_matrix(
    items: Sequence[EvidenceItem], frame: Optional[Frame] = None
) -> ConflictMatrix:
    """All pairwise conflicts between the belief functions of the items."""
    if not items:
        raise InputError('At least one evidence item is required')
    check_unique_ids(items)

    masses = [item.mass for item in items]
    if frame is not None and masses[0].frame != frame:
        raise InputError('Evidence is not defined over the instance frame')
    _check_frames(masses)

    n = len(masses)
    values = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            values[i, j] = values[j, i] = conflict_pair(masses[i], masses[j])

    logger.debug('Computed %d pairwise conflicts', n * (n - 1) // 2)

    return ConflictMatrix(values)
