"""Direct execution of a validated program, with full observability.

Every atomic operation (each row filter, each substring filter, each
per-column type/range/impute application, the sort, each segment write)
snapshots the working table to an intermediate CSV inside a per-run folder
and appends a timestamped log line.  The final outputs are cell-for-cell
identical to what the transforms module computes directly; this back-end
only adds visibility, never semantics.

Run folder layout, under the configured output directory:

    run-<start timestamp>/
        run.log                   one header line, one line per step, one footer line
        001_<step-slug>.csv       snapshot after step 1
        ...
"""

from __future__ import annotations

import re
import shutil
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path

from .ast import (
    ExportCmd,
    ImportCmd,
    ImputeKind,
    InspectCmd,
    RowFilter,
    Spec,
    validate_spec,
)
from .config import RunConfig
from .errors import CpslintError, RunError
from .inspector import generate_baseline_spec
from .parser import format_number
from .table import (
    Column,
    Table,
    apply_substring_filter,
    build_table,
    read_raw,
    row_passes,
    write_csv,
)
from .transforms import (
    apply_range,
    compute_segments,
    enforce_type,
    expand_target,
    impute,
    sort_rows,
)


@dataclass
class StepRecord:
    index: int
    description: str
    timestamp: datetime
    intermediate_path: Path


@dataclass
class RunReport:
    spec_name: str
    run_dir: Path
    log_path: Path
    steps: list[StepRecord] = field(default_factory=list)
    outputs: list[Path] = field(default_factory=list)


def _slug(text: str) -> str:
    cleaned = re.sub(r"[^A-Za-z0-9]+", "-", text).strip("-").lower()
    return cleaned[:60] or "step"


def _make_run_dir(output_dir: Path) -> Path:
    stamp = datetime.now().strftime("%Y%m%d-%H%M%S-%f")
    run_dir = output_dir / f"run-{stamp}"
    suffix = 1
    while run_dir.exists():
        suffix += 1
        run_dir = output_dir / f"run-{stamp}-{suffix}"
    run_dir.mkdir(parents=True)
    return run_dir


class _Run:
    def __init__(self, spec_name: str, config: RunConfig):
        self.config = config
        config.output_dir.mkdir(parents=True, exist_ok=True)
        run_dir = _make_run_dir(config.output_dir)
        self.report = RunReport(spec_name, run_dir, run_dir / "run.log")
        self.log = open(self.report.log_path, "w", encoding="utf-8")

    def log_line(self, text: str) -> None:
        self.log.write(f"{datetime.now().isoformat()} | {text}\n")
        self.log.flush()

    def step(self, description: str, table: Table | None = None,
             file_content: str | None = None, suffix: str = ".csv") -> Path:
        index = len(self.report.steps) + 1
        path = self.report.run_dir / f"{index:03d}_{_slug(description)}{suffix}"
        if table is not None:
            write_csv(table, path)
        elif file_content is not None:
            path.write_text(file_content, encoding="utf-8")
        self.report.steps.append(StepRecord(index, description, datetime.now(), path))
        self.log_line(f"step {index:03d} | {description}")
        return path

    def close(self, outputs: list[Path]) -> None:
        self.report.outputs = outputs
        joined = ", ".join(str(p) for p in outputs) if outputs else "none"
        self.log_line(f"done | {len(self.report.steps)} steps | outputs: {joined}")
        self.log.close()


def _describe_impute(strategy) -> str:
    if strategy.kind is ImputeKind.POLYNOMIAL:
        return f"{strategy.kind.value} of order {strategy.order}"
    return strategy.kind.value


def _run_import(run: _Run, cmd: ImportCmd) -> Table:
    source = run.config.resolve_input(cmd.source)
    header, rows = read_raw(source)
    for rf in cmd.row_filters:
        rows = [r for r in rows if row_passes(r, len(header), [rf])]
        label = "empty" if rf is RowFilter.SKIP_EMPTY else "malformed"
        run.step(f"skip {label} rows", table=build_table(header, rows))
    table = build_table(header, rows)
    for sf in cmd.substring_filters:
        table = apply_substring_filter(table, sf)
        scope = f"column '{sf.column}'" if sf.column is not None else "all columns"
        run.step(f"remove substring '{sf.needle}' from {scope}", table=table)
    return table


def _run_export(run: _Run, table: Table, cmd: ExportCmd) -> list[Path]:
    # Mirrors transforms.run_export, snapshotting after each atomic operation.
    built: list[Column] = []
    for plan in cmd.columns:
        source = table.column(plan.source_name)
        column = Column(plan.output_name, list(source.cells))
        if plan.declared_type is not None:
            column = enforce_type(column, plan.declared_type)
            run.step(
                f"enforce {plan.declared_type.value} type on column '{plan.output_name}'",
                table=Table(built + [column]))
        if plan.valid_range is not None:
            column = apply_range(column, *plan.valid_range)
            lo, hi = plan.valid_range
            run.step(
                f"keep column '{plan.output_name}' within "
                f"[{format_number(lo)}, {format_number(hi)}]",
                table=Table(built + [column]))
        if plan.impute is not None:
            column = impute(column, plan.impute)
            run.step(
                f"impute column '{plan.output_name}' by {_describe_impute(plan.impute)}",
                table=Table(built + [column]))
        built.append(column)

    out = Table(built)
    if cmd.sort_by is not None:
        out = sort_rows(out, cmd.sort_by)
        run.step(f"sort rows by column '{cmd.sort_by}'", table=out)

    outputs: list[Path] = []
    if cmd.cut is None:
        target = run.config.resolve_output(cmd.target)
        target.parent.mkdir(parents=True, exist_ok=True)
        write_csv(out, target)
        run.step(f"write output '{cmd.target}'", table=out)
        outputs.append(target)
        return outputs

    segments = compute_segments(out, cmd.cut.column, cmd.cut.marker)
    for seg in segments:
        name = expand_target(cmd.target, seg.index)
        target = run.config.resolve_output(name)
        target.parent.mkdir(parents=True, exist_ok=True)
        piece = out.slice_rows(seg.start_row, seg.end_row_exclusive)
        write_csv(piece, target)
        run.step(f"write segment {seg.index} to '{name}'", table=piece)
        outputs.append(target)
    return outputs


def _run_inspect(run: _Run, cmd: InspectCmd) -> Path:
    source = run.config.resolve_input(cmd.source)
    text = generate_baseline_spec(source)
    out_path = source.with_suffix(".cps")
    intermediate = run.step(
        f"inspect '{cmd.source}' and write baseline program",
        file_content=text, suffix=".cps")
    shutil.copyfile(intermediate, out_path)
    return out_path


def interpret(spec: Spec, config: RunConfig, spec_name: str = "<program>") -> RunReport:
    """Execute ``spec`` step by step, returning the full run report.

    Raises :class:`RunError` carrying the failing step index when any
    operation fails; intermediates written so far stay on disk.
    """
    diagnostics = validate_spec(spec)
    if diagnostics:
        raise RunError("; ".join(str(d) for d in diagnostics))

    sources = [c.source for c in spec.commands if isinstance(c, (ImportCmd, InspectCmd))]
    run = _Run(spec_name, config)
    run.log_line(f"run of {spec_name} | input {', '.join(sources) or 'none'} "
                 f"in {config.input_dir}")
    outputs: list[Path] = []
    table: Table | None = None
    try:
        for cmd in spec.commands:
            if isinstance(cmd, InspectCmd):
                outputs.append(_run_inspect(run, cmd))
            elif isinstance(cmd, ImportCmd):
                table = _run_import(run, cmd)
            else:
                assert table is not None  # validated: import precedes export
                outputs.extend(_run_export(run, table, cmd))
    except CpslintError as exc:
        failed_at = len(run.report.steps) + 1
        run.log_line(f"failed at step {failed_at:03d} | {exc}")
        run.log.close()
        raise RunError(f"step {failed_at} failed: {exc}", step_index=failed_at) from exc
    run.close(outputs)
    return run.report
