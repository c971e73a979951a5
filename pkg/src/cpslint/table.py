"""Columnar in-memory table over typed-or-empty cells, plus CSV I/O.

Cells are plain Python values: ``int``, ``float`` (always finite), ``str``
or ``None`` for an empty cell.  Tables are treated as values; every
transform builds a new table and never mutates its input.

CSV dialect: comma-delimited, optional double-quote quoting with doubled
quotes as escapes, ``\\n`` or ``\\r\\n`` accepted on read, ``\\n`` written.
The first line is a mandatory header of pairwise-distinct column names.
A field that is blank after stripping whitespace reads as an empty cell.
"""

from __future__ import annotations

import csv
import io
import math
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

from .ast import RowFilter, SubstringFilter
from .errors import DataError

Cell = int | float | str | None

_INT_RE = re.compile(r"[+-]?\d+")
_REAL_RE = re.compile(r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")


def parse_int_cell(text: str) -> int | None:
    """Parse an optional sign plus digits; anything else is no integer."""
    text = text.strip()
    if _INT_RE.fullmatch(text):
        return int(text)
    return None


def parse_real_cell(text: str) -> float | None:
    """Parse decimal or scientific notation; non-finite results count as failures."""
    text = text.strip()
    if not _REAL_RE.fullmatch(text):
        return None
    value = float(text)
    return value if math.isfinite(value) else None


def format_real(value: float) -> str:
    # Shortest round-trip decimal, keeping a trailing '.0' to mark realness.
    text = repr(float(value))
    if "." not in text and "e" not in text and "E" not in text:
        text += ".0"
    return text


def format_cell(cell: Cell) -> str:
    """Canonical serialisation: empty string for empty cells, minimal numerics."""
    if cell is None:
        return ""
    if isinstance(cell, bool):  # bools are ints to Python; never store them
        raise DataError("boolean cells are not supported")
    if isinstance(cell, int):
        return str(cell)
    if isinstance(cell, float):
        return format_real(cell)
    return cell


def is_numeric_cell(cell: Cell) -> bool:
    return isinstance(cell, (int, float)) and not isinstance(cell, bool)


def normalise_field(text: str) -> Cell:
    """Blank-after-strip fields become empty cells; others keep their exact text."""
    return None if text.strip() == "" else text


@dataclass
class Column:
    name: str
    cells: list[Cell] = field(default_factory=list)


@dataclass
class Table:
    columns: list[Column] = field(default_factory=list)

    def __post_init__(self) -> None:
        names = [c.name for c in self.columns]
        if len(set(names)) != len(names):
            raise DataError("column names must be pairwise distinct")
        if self.columns:
            counts = {len(c.cells) for c in self.columns}
            if len(counts) != 1:
                raise DataError("columns differ in length")

    @property
    def row_count(self) -> int:
        return len(self.columns[0].cells) if self.columns else 0

    @property
    def column_names(self) -> list[str]:
        return [c.name for c in self.columns]

    def column(self, name: str) -> Column:
        for col in self.columns:
            if col.name == name:
                return col
        raise DataError(f"unknown column '{name}'")

    def has_column(self, name: str) -> bool:
        return any(col.name == name for col in self.columns)

    def rows(self) -> Iterator[list[Cell]]:
        for i in range(self.row_count):
            yield [col.cells[i] for col in self.columns]

    def slice_rows(self, start: int, stop: int) -> "Table":
        return Table([Column(c.name, c.cells[start:stop]) for c in self.columns])

    def take_rows(self, indices: Iterable[int]) -> "Table":
        idx = list(indices)
        return Table([Column(c.name, [c.cells[i] for i in idx]) for c in self.columns])


@dataclass(frozen=True)
class RawRow:
    fields: list[str]
    line_number: int  # 1-based position in the file; the header is line 1


def read_raw(path: str | Path) -> tuple[list[str], list[RawRow]]:
    """Read header and raw data rows without filtering or padding."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{path}: missing header row") from None
        header = [name.strip() for name in header]
        if any(not name for name in header):
            raise DataError(f"{path}: header contains an empty column name")
        if len(set(header)) != len(header):
            raise DataError(f"{path}: duplicate header names")
        rows = [RawRow(row, reader.line_num) for row in reader]
    return header, rows


def row_passes(row: RawRow, width: int, filters: Iterable[RowFilter]) -> bool:
    for rf in filters:
        if rf is RowFilter.SKIP_EMPTY and all(f.strip() == "" for f in row.fields):
            return False
        if rf is RowFilter.SKIP_MALFORMED and len(row.fields) != width:
            return False
    return True


def build_table(header: list[str], rows: Iterable[RawRow]) -> Table:
    """Assemble a string-celled table, padding or truncating rows to the header width."""
    width = len(header)
    columns = [Column(name, []) for name in header]
    for row in rows:
        fields = row.fields[:width] + [""] * (width - len(row.fields))
        for col, text in zip(columns, fields):
            col.cells.append(normalise_field(text))
    return Table(columns)


def read_csv(path: str | Path, row_filters: Iterable[RowFilter] = ()) -> Table:
    """Load a CSV as untyped cells, dropping rows rejected by ``row_filters``."""
    header, rows = read_raw(path)
    filters = list(row_filters)
    return build_table(header, [r for r in rows if row_passes(r, len(header), filters)])


def csv_lines(table: Table) -> list[str]:
    """Serialise to CSV lines (no trailing newlines), header first."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(table.column_names)
    for row in table.rows():
        writer.writerow([format_cell(cell) for cell in row])
    text = buffer.getvalue()
    return text.split("\n")[:-1]


def write_csv(table: Table, path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        for line in csv_lines(table):
            fh.write(line + "\n")


def remove_everywhere(text: str, needle: str) -> str:
    # Repeated passes so no occurrence survives, e.g. 'aabb' - 'ab' -> ''.
    while needle and needle in text:
        text = text.replace(needle, "")
    return text


def apply_substring_filter(table: Table, sf: SubstringFilter) -> Table:
    """Strip every occurrence of the needle from in-scope string cells."""
    if sf.column is not None and not table.has_column(sf.column):
        raise DataError(f"substring filter targets unknown column '{sf.column}'")
    columns = []
    for col in table.columns:
        if sf.column is not None and col.name != sf.column:
            columns.append(Column(col.name, list(col.cells)))
            continue
        cells: list[Cell] = []
        for cell in col.cells:
            if isinstance(cell, str):
                cleaned = remove_everywhere(cell, sf.needle)
                cells.append(normalise_field(cleaned))
            else:
                cells.append(cell)
        columns.append(Column(col.name, cells))
    return Table(columns)


def apply_substring_filters(table: Table, filters: Iterable[SubstringFilter]) -> Table:
    for sf in filters:
        table = apply_substring_filter(table, sf)
    return table
