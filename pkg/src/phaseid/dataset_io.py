"""CSV dataset format.

One row per meter::

    meter_id,role,phase_hint,interval_0,...,interval_{N-1}

``role`` is one of ``phase_A``, ``phase_B``, ``phase_C`` or ``consumer``.
``phase_hint`` carries the true phase of a consumer for simulated data and
is blank for field data. Readings are decimal Wh written with 17
significant digits, so a write/read cycle is bit-exact.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .errors import ParseError, SchemaMismatch
from .measurements import MeasurementMatrix
from .simulator import SimulatedDataset
from .topology import Phase, PhaseAssignment

PHASE_ROLES = ("phase_A", "phase_B", "phase_C")
CONSUMER_ROLE = "consumer"
HEADER_PREFIX = ("meter_id", "role", "phase_hint")


@dataclass(frozen=True, eq=False)
class LoadedDataset:
    measurements: MeasurementMatrix
    meter_ids: tuple[str, ...]  # in matrix row order
    assignment: PhaseAssignment | None = None

    @property
    def consumer_ids(self) -> tuple[str, ...]:
        return self.meter_ids[3:]


def default_meter_ids(n_i: int) -> tuple[str, ...]:
    return ("TX_A", "TX_B", "TX_C") + tuple(f"M{c:04d}" for c in range(n_i))


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def export_dataset(d, path, meter_ids=None) -> None:
    """Write a SimulatedDataset or LoadedDataset to ``path``."""
    if isinstance(d, SimulatedDataset):
        z, a = d.noisy, d.truth.assignment
    elif isinstance(d, LoadedDataset):
        z, a = d.measurements, d.assignment
        meter_ids = meter_ids or d.meter_ids
    else:
        raise TypeError(f"cannot export {type(d).__name__}")
    ids = tuple(meter_ids) if meter_ids else default_meter_ids(z.n_i)
    if len(ids) != z.n:
        raise ValueError(f"{len(ids)} meter ids for {z.n} rows")

    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(list(HEADER_PREFIX) + [f"interval_{j}" for j in range(z.N)])
        for i, row in enumerate(z.values):
            if i < 3:
                role, hint = PHASE_ROLES[i], Phase(i).name
            else:
                role, hint = CONSUMER_ROLE, a.phase_of(i - 3).name if a is not None else ""
            w.writerow([ids[i], role, hint] + [_fmt(x) for x in row])


def _check_header(header: list[str]) -> int:
    if tuple(header[:3]) != HEADER_PREFIX:
        raise SchemaMismatch(f"header must start with {','.join(HEADER_PREFIX)}, got {header[:3]}")
    intervals = header[3:]
    if not intervals:
        raise SchemaMismatch("header has no interval columns")
    for j, name in enumerate(intervals):
        if name != f"interval_{j}":
            raise SchemaMismatch(f"header column {j + 4} is {name!r}, expected 'interval_{j}'")
    return len(intervals)


def import_dataset(path, interval_minutes: int = 15) -> LoadedDataset:
    """Parse a dataset file; phase rows are reordered to A, B, C, consumers keep file order.

    Negative or non-finite readings are rejected.
    """
    phase_rows: dict[str, tuple[str, list[float]]] = {}
    consumers: list[tuple[str, str, list[float]]] = []
    seen_ids: set[str] = set()

    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaMismatch("empty file") from None
        N = _check_header(header)
        width = N + 3
        for row in reader:
            line = reader.line_num
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != width:
                raise ParseError(f"expected {width} columns, found {len(row)}", line, min(len(row), width) + 1)
            meter_id, role, hint = (cell.strip() for cell in row[:3])
            if not meter_id:
                raise ParseError("empty meter_id", line, 1)
            if meter_id in seen_ids:
                raise ParseError(f"duplicate meter_id {meter_id!r}", line, 1)
            seen_ids.add(meter_id)
            values = []
            for col, cell in enumerate(row[3:], start=4):
                try:
                    x = float(cell)
                except ValueError:
                    raise ParseError(f"not a number: {cell!r}", line, col) from None
                if not math.isfinite(x):
                    raise ParseError(f"non-finite reading {cell!r}", line, col)
                if x < 0:
                    raise ParseError(f"negative reading {cell!r}", line, col)
                values.append(x)
            if role in PHASE_ROLES:
                if role in phase_rows:
                    raise SchemaMismatch(f"line {line}: second meter with role {role}")
                phase_rows[role] = (meter_id, values)
            elif role == CONSUMER_ROLE:
                if hint and hint.upper() not in Phase.__members__:
                    raise ParseError(f"unknown phase_hint {hint!r}", line, 3)
                consumers.append((meter_id, hint.upper(), values))
            else:
                raise ParseError(f"unknown role {role!r}", line, 2)

    missing = [r for r in PHASE_ROLES if r not in phase_rows]
    if missing:
        raise SchemaMismatch(f"missing phase meters: {', '.join(missing)}")

    hints = [h for _, h, _ in consumers]
    if all(hints) and consumers:
        assignment = PhaseAssignment(tuple(hints))
    elif not any(hints):
        assignment = None
    else:
        raise SchemaMismatch("phase_hint must be given for all consumers or for none")

    ids = tuple(phase_rows[r][0] for r in PHASE_ROLES) + tuple(m for m, _, _ in consumers)
    rows = [phase_rows[r][1] for r in PHASE_ROLES] + [v for _, _, v in consumers]
    z = MeasurementMatrix(np.array(rows, dtype=np.float64).reshape(len(rows), N), interval_minutes)
    return LoadedDataset(measurements=z, meter_ids=ids, assignment=assignment)
