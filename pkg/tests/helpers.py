"""Shared test utilities: table shorthand and value-level CSV comparison."""

from __future__ import annotations

import csv
from pathlib import Path

from cpslint.table import Cell, Column, Table, parse_real_cell


def col(name: str, *cells: Cell) -> Column:
    return Column(name, list(cells))


def table(**columns) -> Table:
    return Table([Column(name, list(cells)) for name, cells in columns.items()])


def read_rows(path: str | Path) -> list[list[str]]:
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.reader(fh))


def cells_equal(a: str, b: str, tol: float) -> bool:
    if a == b:
        return True
    va, vb = parse_real_cell(a), parse_real_cell(b)
    if va is None or vb is None:
        return False
    return abs(va - vb) < tol


def csv_value_diff(a: str | Path, b: str | Path, tol: float = 1e-9) -> list[str]:
    """Human-readable differences between two CSVs at value level; [] if equal.

    Headers and row counts must match exactly; string and empty cells compare
    exactly; cells numeric on both sides compare within ``tol`` (strictly).
    """
    rows_a, rows_b = read_rows(a), read_rows(b)
    problems: list[str] = []
    if rows_a[0] != rows_b[0]:
        return [f"headers differ: {rows_a[0]} vs {rows_b[0]}"]
    if len(rows_a) != len(rows_b):
        return [f"row counts differ: {len(rows_a) - 1} vs {len(rows_b) - 1}"]
    for i, (ra, rb) in enumerate(zip(rows_a[1:], rows_b[1:]), start=1):
        if len(ra) != len(rb):
            problems.append(f"row {i}: field counts differ")
            continue
        for name, ca, cb in zip(rows_a[0], ra, rb):
            if not cells_equal(ca, cb, tol):
                problems.append(f"row {i} column {name}: {ca!r} vs {cb!r}")
    return problems
