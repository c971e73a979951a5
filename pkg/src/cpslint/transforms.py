"""Executable semantics of export directives.

Per output column the directive order is fixed: rename, then type
enforcement, then range validation, then imputation.  Imputation runs last
so it can fill cells the earlier stages emptied.  Sorting and
compartmentalisation operate on the assembled output table and refer to
output column names.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass

import numpy as np

from .ast import ColumnPlan, DataType, ExportCmd, ImputeKind, ImputeStrategy
from .errors import DataError
from .table import (
    Cell,
    Column,
    Table,
    format_cell,
    is_numeric_cell,
    parse_int_cell,
    parse_real_cell,
)


@dataclass(frozen=True)
class PhaseSegment:
    start_row: int
    end_row_exclusive: int
    index: int


def _coerce(cell: Cell, declared: DataType) -> Cell:
    if cell is None:
        return None
    text = cell if isinstance(cell, str) else format_cell(cell)
    if declared is DataType.STR:
        return text
    if declared is DataType.INT:
        return parse_int_cell(text)
    return parse_real_cell(text)


def enforce_type(column: Column, declared: DataType) -> Column:
    """Reparse every cell as ``declared``; unparsable cells become empty.

    Non-string cells are serialised canonically first, so enforcing a type
    twice is a no-op and a real-typed parse of an integer yields a float.
    """
    return Column(column.name, [_coerce(c, declared) for c in column.cells])


def apply_range(column: Column, lo: float, hi: float) -> Column:
    """Empty numeric cells outside the inclusive ``[lo, hi]`` interval."""
    cells = [
        None if is_numeric_cell(c) and not lo <= c <= hi else c
        for c in column.cells
    ]
    return Column(column.name, cells)


def _numeric_values(column: Column) -> list[tuple[int, float]]:
    known: list[tuple[int, float]] = []
    for i, cell in enumerate(column.cells):
        if cell is None:
            continue
        if not is_numeric_cell(cell):
            raise DataError(
                f"column '{column.name}' holds non-numeric cells; "
                "numeric imputation needs a typed numeric column")
        known.append((i, float(cell)))
    return known


def _axis_positions(column: Column, x_axis: Column | None) -> list[float]:
    if x_axis is None:
        return [float(i) for i in range(len(column.cells))]
    positions: list[float] = []
    previous: float | None = None
    for cell in x_axis.cells:
        if not is_numeric_cell(cell):
            raise DataError(f"imputation axis '{x_axis.name}' has non-numeric cells")
        value = float(cell)
        if previous is not None and value <= previous:
            raise DataError(f"imputation axis '{x_axis.name}' must be strictly increasing")
        previous = value
        positions.append(value)
    return positions


def _fill_constant(column: Column, value: float) -> Column:
    return Column(column.name, [value if c is None else c for c in column.cells])


def _fill_directional(column: Column, backwards: bool) -> Column:
    cells = list(column.cells)
    indices = range(len(cells) - 1, -1, -1) if backwards else range(len(cells))
    last: Cell = None
    for i in indices:
        if cells[i] is None:
            cells[i] = last
        else:
            last = cells[i]
    return Column(column.name, cells)


def _fill_linear(column: Column, xs: list[float]) -> Column:
    known = _numeric_values(column)
    cells = list(column.cells)
    for gap_start, (j, yj) in enumerate(known[:-1]):
        k, yk = known[gap_start + 1]
        for i in range(j + 1, k):
            if cells[i] is None:
                t = (xs[i] - xs[j]) / (xs[k] - xs[j])
                cells[i] = yj + (yk - yj) * t
    return Column(column.name, cells)


def _fill_polynomial(column: Column, xs: list[float], order: int) -> Column:
    known = _numeric_values(column)
    if len(known) < order + 1:
        raise DataError(
            f"polynomial imputation of order {order} on column '{column.name}' "
            f"needs at least {order + 1} known cells, found {len(known)}")
    coeffs = np.polyfit([xs[i] for i, _ in known], [v for _, v in known], order)
    cells = [
        float(np.polyval(coeffs, xs[i])) if cell is None else cell
        for i, cell in enumerate(column.cells)
    ]
    return Column(column.name, cells)


def impute(column: Column, strategy: ImputeStrategy, x_axis: Column | None = None) -> Column:
    """Fill empty cells per ``strategy``; known cells are never altered.

    Forward/back fill copy neighbouring cells verbatim and leave leading
    (respectively trailing) gaps empty, as does linear interpolation:
    extrapolating past the known range would invent data.  A polynomial fit
    is global least-squares and evaluates at every empty position.
    """
    if strategy.kind is ImputeKind.FORWARD_FILL:
        return _fill_directional(column, backwards=False)
    if strategy.kind is ImputeKind.BACK_FILL:
        return _fill_directional(column, backwards=True)

    known = _numeric_values(column)
    if strategy.kind in (ImputeKind.MEAN, ImputeKind.MEDIAN):
        if not known:
            raise DataError(
                f"cannot impute column '{column.name}': no known cells to average")
        values = [v for _, v in known]
        fill = statistics.fmean(values) if strategy.kind is ImputeKind.MEAN \
            else float(statistics.median(values))
        return _fill_constant(column, fill)

    xs = _axis_positions(column, x_axis)
    if strategy.kind is ImputeKind.LINEAR:
        return _fill_linear(column, xs)
    assert strategy.kind is ImputeKind.POLYNOMIAL and strategy.order is not None
    return _fill_polynomial(column, xs, strategy.order)


def sort_rows(table: Table, by: str) -> Table:
    """Stable ascending sort on a numeric column; empty keys go last."""
    column = table.column(by)
    for cell in column.cells:
        if cell is not None and not is_numeric_cell(cell):
            raise DataError(f"sort column '{by}' holds non-numeric cells")

    def key(i: int) -> tuple[int, float]:
        cell = column.cells[i]
        return (1, 0.0) if cell is None else (0, float(cell))

    order = sorted(range(table.row_count), key=key)
    return table.take_rows(order)


def compute_segments(table: Table, column: str, marker: str) -> list[PhaseSegment]:
    """Partition rows into phases opened by each marker row.

    Rows before the first marker form a preamble segment; with no marker at
    all the whole table is one segment.  Concatenating the segments in index
    order reproduces the table exactly.
    """
    cells = table.column(column).cells
    starts = [
        i for i, cell in enumerate(cells)
        if cell is not None and format_cell(cell) == marker
    ]
    if not starts or starts[0] != 0:
        starts = [0] + starts
    bounds = starts + [table.row_count]
    return [
        PhaseSegment(bounds[i], bounds[i + 1], i)
        for i in range(len(bounds) - 1)
    ]


def expand_target(target: str, segment_index: int) -> str:
    return target.replace("#", str(segment_index))


def plan_column(table: Table, plan: ColumnPlan) -> Column:
    """Run one column plan: rename, then type, range and imputation in order."""
    source = table.column(plan.source_name)
    column = Column(plan.output_name, list(source.cells))
    if plan.declared_type is not None:
        column = enforce_type(column, plan.declared_type)
    if plan.valid_range is not None:
        column = apply_range(column, *plan.valid_range)
    if plan.impute is not None:
        column = impute(column, plan.impute)
    return column


def run_export(table: Table, cmd: ExportCmd) -> list[tuple[str, Table]]:
    """Produce the ``(relative path, table)`` outputs of one export command."""
    out = Table([plan_column(table, plan) for plan in cmd.columns])
    if cmd.sort_by is not None:
        out = sort_rows(out, cmd.sort_by)
    if cmd.cut is None:
        return [(cmd.target, out)]
    segments = compute_segments(out, cmd.cut.column, cmd.cut.marker)
    return [
        (expand_target(cmd.target, seg.index), out.slice_rows(seg.start_row, seg.end_row_exclusive))
        for seg in segments
    ]
