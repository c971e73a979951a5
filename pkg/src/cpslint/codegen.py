"""Compiler back-end: turns a validated program into a standalone Python script.

The emitted script leans on pandas/numpy for the column work but reads its
input through the csv module so that row-filter semantics (ragged rows,
blank-cell normalisation) match the interpreter exactly.  Every directive
contributes at least one fragment preceded by a one-line comment; generation
is deterministic, so equal programs and configurations yield byte-identical
scripts.  Input and output paths are baked in at generation time.
"""

from __future__ import annotations

from pathlib import Path

from .ast import (
    ColumnPlan,
    DataType,
    ExportCmd,
    ImportCmd,
    ImputeKind,
    InspectCmd,
    RowFilter,
    Spec,
    SubstringFilter,
    validate_spec,
)
from .config import RunConfig
from .errors import CpslintError
from .inspector import BASELINE_TARGET_SUFFIX
from .parser import format_number


def _range_text(plan: ColumnPlan) -> str:
    lo, hi = plan.valid_range  # type: ignore[misc]
    return f"[{format_number(lo)}, {format_number(hi)}]"


def _impute_text(plan: ColumnPlan) -> str:
    strategy = plan.impute
    assert strategy is not None
    if strategy.kind is ImputeKind.MEAN:
        return f"Fill empty cells of '{plan.output_name}' with the column mean."
    if strategy.kind is ImputeKind.MEDIAN:
        return f"Fill empty cells of '{plan.output_name}' with the column median."
    if strategy.kind is ImputeKind.FORWARD_FILL:
        return f"Fill empty cells of '{plan.output_name}' from the nearest earlier value."
    if strategy.kind is ImputeKind.BACK_FILL:
        return f"Fill empty cells of '{plan.output_name}' from the nearest later value."
    if strategy.kind is ImputeKind.LINEAR:
        return (f"Fill interior gaps of '{plan.output_name}' by linear interpolation "
                "over the row position.")
    return (f"Fill empty cells of '{plan.output_name}' with a least-squares polynomial "
            f"of order {strategy.order}.")


def row_filter_comment(rf: RowFilter) -> str:
    if rf is RowFilter.SKIP_EMPTY:
        return "Drop rows with no values at all (skip empty)."
    return "Drop rows whose field count differs from the header (skip malformed)."


def substring_comment(sf: SubstringFilter) -> str:
    scope = "every column" if sf.column is None else f"column '{sf.column}'"
    return f"Remove substring '{sf.needle}' from {scope}."


def directive_comments(spec: Spec) -> list[str]:
    """The one-line comment each directive contributes to the generated script."""
    comments: list[str] = []
    for cmd in spec.commands:
        if isinstance(cmd, InspectCmd):
            comments.append(f"Inspect '{cmd.source}' and write the baseline program.")
        elif isinstance(cmd, ImportCmd):
            comments.append(f"Read '{cmd.source}'; blank cells become missing values.")
            for rf in cmd.row_filters:
                comments.append(row_filter_comment(rf))
            for sf in cmd.substring_filters:
                comments.append(substring_comment(sf))
        elif isinstance(cmd, ExportCmd):
            for plan in cmd.columns:
                comments.append(
                    f"Output column '{plan.output_name}' from input column "
                    f"'{plan.source_name}'.")
                if plan.declared_type is DataType.STR:
                    comments.append(f"Keep '{plan.output_name}' as text.")
                elif plan.declared_type is not None:
                    comments.append(
                        f"Enforce {plan.declared_type.value} type on "
                        f"'{plan.output_name}': unparsable cells become empty.")
                if plan.valid_range is not None:
                    comments.append(
                        f"Keep '{plan.output_name}' within {_range_text(plan)}: "
                        "cells outside the range become empty.")
                if plan.impute is not None:
                    comments.append(_impute_text(plan))
            if cmd.sort_by is not None:
                comments.append(f"Sort rows by '{cmd.sort_by}' ascending; empty keys go last.")
            if cmd.cut is not None:
                comments.append(
                    f"Split the output wherever '{cmd.cut.column}' equals "
                    f"'{cmd.cut.marker}'.")
                comments.append(f"Write one file per segment to '{cmd.target}'.")
            else:
                comments.append(f"Write the sanitised table to '{cmd.target}'.")
    return comments


class _Emitter:
    def __init__(self) -> None:
        self.lines: list[str] = []

    def blank(self) -> None:
        if self.lines and self.lines[-1] != "":
            self.lines.append("")

    def emit(self, *lines: str) -> None:
        self.lines.extend(lines)

    def fragment(self, comment: str, *lines: str) -> None:
        self.emit(f"# {comment}", *lines)

    def text(self) -> str:
        return "\n".join(self.lines) + "\n"


_REMOVE_ALL_HELPER = (
    "def remove_all(series, needle):",
    '    """Delete every occurrence of needle, then blank out emptied cells."""',
    "    while True:",
    "        replaced = series.str.replace(needle, '', regex=False)",
    "        if replaced.equals(series):",
    "            return series.mask(series.str.strip().eq('').fillna(False))",
    "        series = replaced",
)


def _emit_import(out: _Emitter, cmd: ImportCmd, config: RunConfig) -> None:
    input_path = str(config.resolve_input(cmd.source))
    out.blank()
    out.fragment(
        f"Read '{cmd.source}'; blank cells become missing values.",
        f"with open({input_path!r}, newline='', encoding='utf-8') as fh:",
        "    rows = list(csv.reader(fh))",
        "if not rows:",
        f"    raise SystemExit('missing header row: ' + {input_path!r})",
        "header = [name.strip() for name in rows[0]]",
        "data = rows[1:]",
    )
    if RowFilter.SKIP_MALFORMED in cmd.row_filters:
        out.fragment(
            row_filter_comment(RowFilter.SKIP_MALFORMED),
            "data = [row for row in data if len(row) == len(header)]",
        )
    out.emit(
        "# Pad or truncate ragged rows to the header width.",
        "data = [row[:len(header)] + [''] * (len(header) - len(row)) for row in data]",
        "df = pd.DataFrame(data, columns=header, dtype=str)",
        "df = df.mask(df.apply(lambda s: s.str.strip()).eq(''))",
    )
    if RowFilter.SKIP_EMPTY in cmd.row_filters:
        out.fragment(
            row_filter_comment(RowFilter.SKIP_EMPTY),
            "df = df.dropna(how='all')",
        )
    for sf in cmd.substring_filters:
        if sf.column is None:
            out.fragment(
                substring_comment(sf),
                "for name in df.columns:",
                f"    df[name] = remove_all(df[name], {sf.needle!r})",
            )
        else:
            out.fragment(
                substring_comment(sf),
                f"df[{sf.column!r}] = remove_all(df[{sf.column!r}], {sf.needle!r})",
            )


def _emit_plan(out: _Emitter, plan: ColumnPlan) -> None:
    name = plan.output_name
    out.fragment(
        f"Output column '{name}' from input column '{plan.source_name}'.",
        f"out[{name!r}] = df[{plan.source_name!r}]",
    )
    if plan.declared_type is DataType.INT:
        out.fragment(
            f"Enforce int type on '{name}': unparsable cells become empty.",
            f"txt = out[{name!r}].astype('string').str.strip()",
            "matched = txt.where(txt.str.fullmatch(r'[+-]?\\d+').fillna(False))",
            f"out[{name!r}] = matched.astype('Int64')",
        )
    elif plan.declared_type is DataType.REAL:
        # Regex screen, then float() via astype: exact round-trip parsing,
        # with non-finite results (huge exponents and the like) emptied.
        out.fragment(
            f"Enforce real type on '{name}': unparsable cells become empty.",
            f"txt = out[{name!r}].astype('string').str.strip()",
            "ok = txt.str.fullmatch(r'[+-]?(?:\\d+\\.?\\d*|\\.\\d+)(?:[eE][+-]?\\d+)?')",
            "vals = txt.where(ok.fillna(False)).astype('float64')",
            f"out[{name!r}] = vals.where(np.isfinite(vals))",
        )
    elif plan.declared_type is DataType.STR:
        out.fragment(
            f"Keep '{name}' as text.",
            f"out[{name!r}] = out[{name!r}].where(out[{name!r}].notna())",
        )
    if plan.valid_range is not None:
        lo, hi = plan.valid_range
        out.fragment(
            f"Keep '{name}' within {_range_text(plan)}: cells outside the range "
            "become empty.",
            f"inside = out[{name!r}].between({format_number(lo)}, {format_number(hi)})",
            f"out[{name!r}] = out[{name!r}].where(inside.fillna(False))",
        )
    if plan.impute is None:
        return
    # Computed fills go only into empty positions; known cells keep their type.
    kind = plan.impute.kind
    if kind is ImputeKind.MEAN:
        out.fragment(
            _impute_text(plan),
            f"vals = out[{name!r}].astype('float64')",
            f"out[{name!r}] = out[{name!r}].astype(object).where(vals.notna(), vals.mean())",
        )
    elif kind is ImputeKind.MEDIAN:
        out.fragment(
            _impute_text(plan),
            f"vals = out[{name!r}].astype('float64')",
            f"out[{name!r}] = out[{name!r}].astype(object).where(vals.notna(), vals.median())",
        )
    elif kind is ImputeKind.FORWARD_FILL:
        out.fragment(_impute_text(plan), f"out[{name!r}] = out[{name!r}].ffill()")
    elif kind is ImputeKind.BACK_FILL:
        out.fragment(_impute_text(plan), f"out[{name!r}] = out[{name!r}].bfill()")
    elif kind is ImputeKind.LINEAR:
        out.fragment(
            _impute_text(plan),
            f"vals = out[{name!r}].astype('float64')",
            "filled = vals.interpolate(method='linear', limit_area='inside')",
            f"out[{name!r}] = out[{name!r}].astype(object).where(vals.notna(), filled)",
        )
    else:
        out.fragment(
            _impute_text(plan),
            f"vals = out[{name!r}].astype('float64').to_numpy()",
            "pos = np.arange(len(vals), dtype=float)",
            "known = ~np.isnan(vals)",
            f"coeffs = np.polyfit(pos[known], vals[known], {plan.impute.order})",
            f"out[{name!r}] = out[{name!r}].astype(object).where(known, np.polyval(coeffs, pos))",
        )


def _emit_export(out: _Emitter, cmd: ExportCmd, config: RunConfig) -> None:
    out.blank()
    out.emit(
        f"# Build the output table for '{cmd.target}'.",
        "out = pd.DataFrame(index=df.index)",
    )
    for plan in cmd.columns:
        _emit_plan(out, plan)
    if cmd.sort_by is not None:
        out.fragment(
            f"Sort rows by '{cmd.sort_by}' ascending; empty keys go last.",
            f"out = out.sort_values({cmd.sort_by!r}, kind='stable', na_position='last')",
        )
    target_path = str(config.resolve_output(cmd.target))
    if cmd.cut is None:
        out.fragment(
            f"Write the sanitised table to '{cmd.target}'.",
            f"out.to_csv({target_path!r}, index=False, lineterminator='\\n', float_format=str)",
        )
        return
    out.fragment(
        f"Split the output wherever '{cmd.cut.column}' equals '{cmd.cut.marker}'.",
        f"marks = out[{cmd.cut.column!r}].astype('string').eq({cmd.cut.marker!r})",
        "starts = [int(i) for i in np.flatnonzero(marks.fillna(False).to_numpy(dtype=bool))]",
        "if not starts or starts[0] != 0:",
        "    starts = [0] + starts",
        "bounds = starts + [len(out)]",
    )
    out.fragment(
        f"Write one file per segment to '{cmd.target}'.",
        "for i in range(len(bounds) - 1):",
        "    segment = out.iloc[bounds[i]:bounds[i + 1]]",
        f"    segment.to_csv({target_path!r}.replace('#', str(i)), index=False,",
        "                   lineterminator='\\n', float_format=str)",
    )


def _emit_inspect(out: _Emitter, cmd: InspectCmd, config: RunConfig) -> None:
    input_path = config.resolve_input(cmd.source)
    spec_path = input_path.with_suffix(".cps")
    target = Path(cmd.source).stem + BASELINE_TARGET_SUFFIX
    out.blank()
    out.fragment(
        f"Inspect '{cmd.source}' and write the baseline program.",
        f"with open({str(input_path)!r}, newline='', encoding='utf-8') as fh:",
        "    rows = list(csv.reader(fh))",
        "if not rows:",
        f"    raise SystemExit('missing header row: ' + {str(input_path)!r})",
        "header = [name.strip() for name in rows[0]]",
        "data = [row[:len(header)] + [''] * (len(header) - len(row)) for row in rows[1:]]",
    )
    out.emit(
        "",
        "INT_RE = re.compile(r'[+-]?\\d+')",
        "REAL_RE = re.compile(r'[+-]?(?:\\d+\\.?\\d*|\\.\\d+)(?:[eE][+-]?\\d+)?')",
        "",
        "",
        "def infer(cells):",
        "    # Narrowest type parsing every known cell: int, widening to real, else str.",
        "    known = [cell.strip() for cell in cells if cell.strip()]",
        "    if not known:",
        "        return 'str'",
        "    if all(INT_RE.fullmatch(cell) for cell in known):",
        "        return 'int'",
        "    if all(REAL_RE.fullmatch(cell) and math.isfinite(float(cell)) for cell in known):",
        "        return 'real'",
        "    return 'str'",
        "",
        "",
        "def quote(text):",
        "    escaped = (text.replace('\\\\', '\\\\\\\\').replace(\"'\", \"\\\\'\")",
        "               .replace('\\n', '\\\\n').replace('\\t', '\\\\t').replace('\\r', '\\\\r'))",
        '    return "\'" + escaped + "\'"',
        "",
        "",
        "types = [infer([row[i] for row in data]) for i in range(len(header))]",
        "# Emit the baseline program mapping every column to itself.",
        f"lines = ['import csv from ' + quote({Path(cmd.source).name!r}) + ';', 'export csv']",
        "for i, name in enumerate(header):",
        "    comma = ',' if i + 1 < len(header) else ''",
        "    lines.append('  ' + quote(name) + ' is ' + quote(name) + ' as ' + types[i] + comma)",
        f"lines.append('  to ' + quote({target!r}) + ';')",
        f"with open({str(spec_path)!r}, 'w', encoding='utf-8') as fh:",
        "    fh.write('\\n'.join(lines) + '\\n')",
    )


def generate_script(spec: Spec, config: RunConfig, spec_name: str = "program") -> str:
    """Emit the Python script implementing ``spec`` with paths from ``config``."""
    diagnostics = validate_spec(spec)
    if diagnostics:
        raise CpslintError(
            "cannot generate from an invalid program: "
            + "; ".join(str(d) for d in diagnostics))

    has_inspect = any(isinstance(c, InspectCmd) for c in spec.commands)
    has_substrings = any(
        isinstance(c, ImportCmd) and c.substring_filters for c in spec.commands)
    needs_numpy = not has_inspect and any(
        isinstance(c, ExportCmd) and (
            c.cut is not None
            or any(p.declared_type is DataType.REAL
                   or (p.impute is not None and p.impute.kind is ImputeKind.POLYNOMIAL)
                   for p in c.columns))
        for c in spec.commands)

    out = _Emitter()
    out.emit(
        "#!/usr/bin/env python3",
        f"# Data sanitisation pipeline generated from '{spec_name}'.",
        "# Each fragment is annotated with the directive it implements.",
        "",
        "import csv",
    )
    if has_inspect:
        out.emit("import math", "import re")
    else:
        out.emit("")
        if needs_numpy:
            out.emit("import numpy as np")
        out.emit("import pandas as pd")
    if has_substrings:
        out.emit("", "")
        out.emit(*_REMOVE_ALL_HELPER)

    for cmd in spec.commands:
        if isinstance(cmd, InspectCmd):
            _emit_inspect(out, cmd, config)
        elif isinstance(cmd, ImportCmd):
            _emit_import(out, cmd, config)
        else:
            _emit_export(out, cmd, config)
    return out.text()


def write_script(text: str, path: str | Path) -> None:
    Path(path).write_text(text, encoding="utf-8")


def script_name(spec_path: str | Path) -> str:
    return Path(spec_path).stem + ".py"
