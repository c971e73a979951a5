"""Baseline-program generation from a raw CSV.

Scans every row of each column and infers the narrowest type that parses
all known cells (int, widening to real, falling back to str).  The emitted
program maps each column to itself with its inferred type and nothing else:
ranges and imputation encode domain knowledge an expert must add by hand.
"""

from __future__ import annotations

from pathlib import Path

from .ast import ColumnPlan, DataType, ExportCmd, ImportCmd, Spec
from .parser import pretty_print
from .table import Column, Table, parse_int_cell, parse_real_cell, read_csv

BASELINE_TARGET_SUFFIX = "_sanitised.csv"


def infer_column_type(column: Column) -> DataType:
    saw_value = False
    all_int = True
    for cell in column.cells:
        if cell is None:
            continue
        saw_value = True
        text = cell if isinstance(cell, str) else str(cell)
        if all_int and parse_int_cell(text) is None:
            all_int = False
        if parse_real_cell(text) is None:
            return DataType.STR
    if not saw_value:
        return DataType.STR
    return DataType.INT if all_int else DataType.REAL


def infer_types(table: Table) -> dict[str, DataType]:
    """Infer one type per column, scanning all rows."""
    return {col.name: infer_column_type(col) for col in table.columns}


def baseline_spec(input_name: str, table: Table) -> Spec:
    """Identity program over ``table``: import, then export all columns typed."""
    types = infer_types(table)
    plans = tuple(
        ColumnPlan(name, name, declared_type=types[name])
        for name in table.column_names
    )
    target = Path(input_name).stem + BASELINE_TARGET_SUFFIX
    return Spec((
        ImportCmd(input_name),
        ExportCmd(plans, target),
    ))


def generate_baseline_spec(path: str | Path) -> str:
    """Read a CSV and emit baseline program text that parses and validates.

    The import clause references the file by name only, so the program runs
    against any configured input directory containing that file.
    """
    table = read_csv(path)
    return pretty_print(baseline_spec(Path(path).name, table))
