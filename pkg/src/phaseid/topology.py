"""Phase-connectivity forest: three depth-one trees rooted at the transformer phases.

A consumer's parent is its phase. The parent-row block of the forest's
incidence matrix carries a single -1 per consumer column, so its negation
(the connectivity matrix) is a 0/1 matrix with exactly one 1 per column.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .errors import MalformedMatrix

N_PHASES = 3


class Phase(enum.IntEnum):
    A = 0
    B = 1
    C = 2

    @classmethod
    def parse(cls, value: "Phase | int | str") -> "Phase":
        if isinstance(value, Phase):
            return value
        if isinstance(value, str):
            try:
                return cls[value.strip().upper()]
            except KeyError:
                raise ValueError(f"unknown phase {value!r}") from None
        return cls(int(value))


@dataclass(frozen=True)
class PhaseAssignment:
    """Total map consumer index -> phase."""

    phases: tuple[Phase, ...]

    def __post_init__(self):
        object.__setattr__(self, "phases", tuple(Phase.parse(p) for p in self.phases))

    @classmethod
    def from_sequence(cls, phases: Iterable) -> "PhaseAssignment":
        return cls(tuple(phases))

    @classmethod
    def from_mapping(cls, mapping: Mapping[int, "Phase | int | str"]) -> "PhaseAssignment":
        n_i = len(mapping)
        if sorted(mapping) != list(range(n_i)):
            raise ValueError("consumer indices must be dense and zero-based")
        return cls(tuple(mapping[c] for c in range(n_i)))

    @property
    def n_i(self) -> int:
        return len(self.phases)

    def phase_of(self, consumer: int) -> Phase:
        return self.phases[consumer]

    def as_array(self) -> np.ndarray:
        return np.fromiter((int(p) for p in self.phases), dtype=np.int64, count=self.n_i)

    def counts(self) -> tuple[int, int, int]:
        arr = self.as_array()
        return tuple(int(np.count_nonzero(arr == k)) for k in range(N_PHASES))

    def consumers_on(self, phase: Phase | int | str) -> list[int]:
        p = Phase.parse(phase)
        return [c for c, q in enumerate(self.phases) if q == p]

    def permuted(self, order: Iterable[int]) -> "PhaseAssignment":
        """New assignment whose consumer ``k`` is this assignment's consumer ``order[k]``."""
        return PhaseAssignment(tuple(self.phases[i] for i in order))

    def __len__(self) -> int:
        return self.n_i


def assignment_to_matrix(a: PhaseAssignment) -> np.ndarray:
    """3 x n_i connectivity matrix with entry (r, c) = 1 iff consumer c is on phase r."""
    m = np.zeros((N_PHASES, a.n_i), dtype=np.int8)
    m[a.as_array(), np.arange(a.n_i)] = 1
    return m


def matrix_to_assignment(m) -> PhaseAssignment:
    """Inverse of :func:`assignment_to_matrix`.

    Raises MalformedMatrix unless every entry is 0 or 1 and every column sums to 1.
    """
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != N_PHASES:
        raise MalformedMatrix(f"expected a 3 x n_i matrix, got shape {m.shape}")
    bad = ~np.isin(m, (0, 1))
    if bad.any():
        r, c = np.argwhere(bad)[0]
        raise MalformedMatrix(f"entry ({r}, {c}) = {m[r, c]!r} is not 0 or 1")
    sums = m.sum(axis=0)
    if (sums != 1).any():
        c = int(np.flatnonzero(sums != 1)[0])
        raise MalformedMatrix(f"column {c} sums to {sums[c]}, expected 1")
    return PhaseAssignment(tuple(int(r) for r in np.argmax(m, axis=0)))


def incidence_parent_block(a: PhaseAssignment) -> np.ndarray:
    """Parent-row block of the forest's incidence matrix (edges leave the phase node)."""
    return -assignment_to_matrix(a).astype(np.int64)
