"""Seeded emulation of trace-corruption patterns for systematic testing.

Corruptions hit non-overlapping blocks of rows: the row space is tiled into
``block_size`` chunks and ``round(rate * rows / block_size)`` tiles (at least
one) are drawn at random, biased toward blocks containing a target marker
for the targeted kinds.  Everything is driven by ``random.Random(seed)``,
so a job reproduces bit-for-bit across runs and platforms.

Misplaced end-of-line corruption is special: it damages the *file*, not the
table (merged lines are no longer rows), so it is applied to serialised CSV
lines by :func:`corrupt_lines` / :func:`corrupt_file` rather than by
:func:`corrupt`.
"""

from __future__ import annotations

import enum
import random
import statistics
import string
from dataclasses import dataclass, replace
from pathlib import Path

from .ast import DataType
from .errors import DataError
from .inspector import infer_column_type
from .table import (
    Cell,
    Column,
    Table,
    csv_lines,
    format_cell,
    parse_real_cell,
    read_csv,
)

OUT_OF_BOUNDS_VALUE = 99999.999
INJECTION_ALPHABET = string.ascii_letters + "#!?*"

# Composed jobs get decorrelated seed streams even when they share a seed.
_SEED_STRIDE = 1_000_003


class CorruptionKind(enum.Enum):
    TYPE_MISMATCH = "type-mismatch"
    TYPE_MISMATCH_UART = "type-mismatch-uart"
    OUT_OF_BOUNDS = "out-of-bounds"
    OUT_OF_ORDER_KEEP_TIMESTAMPS = "out-of-order-keep-timestamps"
    OUT_OF_ORDER_NEW_TIMESTAMPS = "out-of-order-new-timestamps"
    MISSING_FIELDS = "missing-fields"
    MISSING_ROWS = "missing-rows"
    MISPLACED_EOL = "misplaced-eol"


@dataclass(frozen=True)
class CorruptionJob:
    kind: CorruptionKind
    block_size: int = 10
    rate: float = 0.005
    seed: int = 0
    uart_target: str | None = None
    columns: tuple[str, ...] | None = None  # restrict damage to these columns
    random_columns: bool = False  # out-of-bounds: random column subset per block

    def __post_init__(self) -> None:
        if self.block_size < 1:
            raise DataError("block size must be at least 1")
        if not 0 < self.rate <= 1:
            raise DataError("corruption rate must be in (0, 1]")
        if self.kind is CorruptionKind.TYPE_MISMATCH_UART and not self.uart_target:
            raise DataError("targeted type mismatch requires a uart target")


def _is_targeted(job: CorruptionJob) -> bool:
    if job.kind is CorruptionKind.TYPE_MISMATCH_UART:
        return True
    return job.kind is CorruptionKind.MISSING_ROWS and job.uart_target is not None


def _block_has_marker(table: Table, start: int, size: int, marker: str) -> bool:
    for column in table.columns:
        for cell in column.cells[start:start + size]:
            if cell is not None and format_cell(cell) == marker:
                return True
    return False


def select_blocks(row_count: int, job: CorruptionJob, table: Table | None = None) -> list[int]:
    """Pick non-overlapping block start rows; seeded, so reproducible.

    Targeted kinds prefer blocks containing the uart target and fall back to
    random blocks once those run out; ``table`` supplies the cells for that
    bias and may be omitted for unbiased kinds.
    """
    if row_count < job.block_size:
        raise DataError(
            f"table of {row_count} rows is smaller than one {job.block_size}-row block")
    tiles = row_count // job.block_size
    count = min(tiles, max(1, round(job.rate * row_count / job.block_size)))
    rng = random.Random(job.seed)
    tile_ids = list(range(tiles))
    if _is_targeted(job) and table is not None and job.uart_target:
        marked = [
            t for t in tile_ids
            if _block_has_marker(table, t * job.block_size, job.block_size, job.uart_target)
        ]
        rest = [t for t in tile_ids if t not in set(marked)]
        rng.shuffle(marked)
        rng.shuffle(rest)
        chosen = (marked + rest)[:count]
    else:
        chosen = rng.sample(tile_ids, count)
    return sorted(t * job.block_size for t in chosen)


def _numeric_column_names(table: Table) -> list[str]:
    # Majority vote rather than strict inference: composed jobs must still
    # recognise a sensor column whose cells an earlier job made unparsable.
    names = []
    for column in table.columns:
        known = [c for c in column.cells if c is not None]
        parsable = sum(
            1 for c in known if parse_real_cell(format_cell(c)) is not None)
        if known and parsable * 2 > len(known):
            names.append(column.name)
    return names


def _damage_columns(table: Table, job: CorruptionJob) -> list[str]:
    if job.columns is not None:
        for name in job.columns:
            if not table.has_column(name):
                raise DataError(f"corruption targets unknown column '{name}'")
        return list(job.columns)
    names = _numeric_column_names(table)
    if not names:
        raise DataError("table has no numeric columns to corrupt")
    return names


def _inject(rng: random.Random, text: str, must_break_parsing: bool) -> str:
    for _ in range(8):
        symbol = rng.choice(INJECTION_ALPHABET)
        at = rng.randrange(len(text) + 1)
        candidate = text[:at] + symbol + text[at:]
        if not must_break_parsing or parse_real_cell(candidate) is None:
            return candidate
    return text + "#"  # adversarially parsable no matter where we insert


def _copy_columns(table: Table) -> list[Column]:
    return [Column(c.name, list(c.cells)) for c in table.columns]


def _corrupt_type_mismatch(table: Table, job: CorruptionJob, rng: random.Random,
                           blocks: list[int]) -> Table:
    columns = _copy_columns(table)
    victims = set(_damage_columns(table, job))
    numeric = set(_numeric_column_names(table))
    for start in blocks:
        for column in columns:
            if column.name not in victims:
                continue
            for i in range(start, min(start + job.block_size, table.row_count)):
                cell = column.cells[i]
                if cell is None:
                    continue
                text = format_cell(cell)
                column.cells[i] = _inject(rng, text, column.name in numeric)
    return Table(columns)


def _corrupt_out_of_bounds(table: Table, job: CorruptionJob, rng: random.Random,
                           blocks: list[int]) -> Table:
    columns = _copy_columns(table)
    all_victims = _damage_columns(table, job)
    by_name = {c.name: c for c in columns}
    for start in blocks:
        victims = all_victims
        if job.random_columns and job.columns is None:
            victims = [n for n in all_victims if rng.random() < 0.5] or \
                [rng.choice(all_victims)]
        for name in victims:
            column = by_name[name]
            for i in range(start, min(start + job.block_size, table.row_count)):
                if column.cells[i] is not None:
                    column.cells[i] = OUT_OF_BOUNDS_VALUE
    return Table(columns)


def _permute_blocks(table: Table, job: CorruptionJob, rng: random.Random,
                    blocks: list[int]) -> tuple[list[Column], list[list[int]]]:
    columns = _copy_columns(table)
    permutations = []
    for start in blocks:
        stop = min(start + job.block_size, table.row_count)
        order = list(range(start, stop))
        rng.shuffle(order)
        permutations.append(order)
        for column, original in zip(columns, table.columns):
            column.cells[start:stop] = [original.cells[i] for i in order]
    return columns, permutations


def _median_interval(cells: list[Cell], stop: int) -> float | None:
    # Median of consecutive deltas over parsable neighbours before `stop`.
    values: list[float | None] = []
    for cell in cells[:stop]:
        text = format_cell(cell) if cell is not None else ""
        values.append(parse_real_cell(text) if text else None)
    deltas = [
        b - a for a, b in zip(values, values[1:])
        if a is not None and b is not None
    ]
    return statistics.median(deltas) if deltas else None


def _corrupt_new_timestamps(table: Table, job: CorruptionJob, rng: random.Random,
                            blocks: list[int]) -> Table:
    if not table.columns:
        raise DataError("cannot corrupt an empty table")
    columns, _ = _permute_blocks(table, job, rng, blocks)
    ts_column = columns[0]  # convention: the leading column carries timestamps
    original_ts = table.columns[0]
    emit_int = infer_column_type(original_ts) is DataType.INT
    for start in blocks:
        stop = min(start + job.block_size, table.row_count)
        first = original_ts.cells[start]
        base = parse_real_cell(format_cell(first)) if first is not None else None
        if base is None:
            continue  # nothing trustworthy to rebase on
        step = _median_interval(original_ts.cells, start)
        if step is None or step <= 0:
            step = _median_interval(original_ts.cells, table.row_count) or 1.0
        for offset, i in enumerate(range(start, stop)):
            value = base + step * offset
            if emit_int and float(value).is_integer():
                ts_column.cells[i] = int(value)
            else:
                ts_column.cells[i] = value
    return Table(columns)


def _corrupt_missing_fields(table: Table, job: CorruptionJob, rng: random.Random,
                            blocks: list[int]) -> Table:
    columns = _copy_columns(table)
    victims = _damage_columns(table, job)
    by_name = {c.name: c for c in columns}
    for start in blocks:
        column = by_name[rng.choice(victims)]
        for i in range(start, min(start + job.block_size, table.row_count)):
            column.cells[i] = None
    return Table(columns)


def corrupt(table: Table, job: CorruptionJob) -> Table:
    """Apply one in-memory corruption job; the input table is left untouched."""
    if table.row_count == 0:
        raise DataError("cannot corrupt an empty table")
    if job.kind is CorruptionKind.MISPLACED_EOL:
        raise DataError(
            "misplaced-eol corrupts the serialised file; use corrupt_file or corrupt_lines")
    blocks = select_blocks(table.row_count, job, table)
    rng = random.Random(job.seed)
    if job.kind in (CorruptionKind.TYPE_MISMATCH, CorruptionKind.TYPE_MISMATCH_UART):
        return _corrupt_type_mismatch(table, job, rng, blocks)
    if job.kind is CorruptionKind.OUT_OF_BOUNDS:
        return _corrupt_out_of_bounds(table, job, rng, blocks)
    if job.kind is CorruptionKind.OUT_OF_ORDER_KEEP_TIMESTAMPS:
        columns, _ = _permute_blocks(table, job, rng, blocks)
        return Table(columns)
    if job.kind is CorruptionKind.OUT_OF_ORDER_NEW_TIMESTAMPS:
        return _corrupt_new_timestamps(table, job, rng, blocks)
    if job.kind is CorruptionKind.MISSING_FIELDS:
        return _corrupt_missing_fields(table, job, rng, blocks)
    assert job.kind is CorruptionKind.MISSING_ROWS
    doomed = {i for start in blocks for i in range(start, start + job.block_size)}
    survivors = [i for i in range(table.row_count) if i not in doomed]
    return table.take_rows(survivors)


def corrupt_lines(data_lines: list[str], job: CorruptionJob) -> list[str]:
    """Merge adjacent line pairs inside selected blocks (misplaced EOL markers)."""
    if job.kind is not CorruptionKind.MISPLACED_EOL:
        raise DataError("corrupt_lines only handles misplaced-eol jobs")
    blocks = set(select_blocks(len(data_lines), job))
    merged: list[str] = []
    i = 0
    block_end = -1
    while i < len(data_lines):
        if i in blocks:
            block_end = min(i + job.block_size, len(data_lines))
        if i < block_end and i + 1 < block_end:
            merged.append(data_lines[i] + data_lines[i + 1])
            i += 2
        else:
            merged.append(data_lines[i])
            i += 1
    return merged


def seed_for_position(job: CorruptionJob, position: int) -> CorruptionJob:
    return job if position == 0 else replace(job, seed=job.seed + position * _SEED_STRIDE)


def compose(table: Table, jobs: list[CorruptionJob]) -> Table:
    """Apply table-level jobs sequentially, each with its own seed stream."""
    if not jobs:
        raise DataError("compose requires at least one job")
    for position, job in enumerate(jobs):
        table = corrupt(table, seed_for_position(job, position))
    return table


def corrupt_file(src: str | Path, dst: str | Path, jobs: list[CorruptionJob]) -> None:
    """Read a reference CSV, apply all jobs and write the corrupted file.

    Table-level jobs run first in their given order; misplaced-eol jobs then
    operate on the serialised data lines, since the damaged artifact is the
    file itself.
    """
    if not jobs:
        raise DataError("corrupt_file requires at least one job")
    table = read_csv(src)
    line_jobs: list[CorruptionJob] = []
    for position, job in enumerate(jobs):
        effective = seed_for_position(job, position)
        if job.kind is CorruptionKind.MISPLACED_EOL:
            line_jobs.append(effective)
        else:
            table = corrupt(table, effective)
    lines = csv_lines(table)
    header, data = lines[0], lines[1:]
    for job in line_jobs:
        data = corrupt_lines(data, job)
    with open(dst, "w", newline="", encoding="utf-8") as fh:
        fh.write(header + "\n")
        for line in data:
            fh.write(line + "\n")
