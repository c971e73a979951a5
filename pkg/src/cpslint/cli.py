"""Command-line entry point.

Exit codes are stable: 0 on success, 1 for runtime failures, 2 for program
parse or validation errors.
"""

from __future__ import annotations

import shlex
import subprocess
import sys
from pathlib import Path

import click

from .ast import ExportCmd, InspectCmd, validate_spec
from .codegen import generate_script, script_name, write_script
from .config import CONFIG_FILE_NAME, Pipeline, RunConfig, load_config
from .corruptor import CorruptionJob, CorruptionKind, corrupt_file
from .errors import CpslintError
from .fixtures import generate_reference
from .inspector import generate_baseline_spec
from .interpreter import interpret
from .parser import ParseError, parse
from .table import write_csv
from .transforms import expand_target

SPEC_ERROR_EXIT = 2
RUNTIME_ERROR_EXIT = 1


def _fail(message: str, code: int) -> None:
    click.echo(f"cpslint: {message}", err=True)
    sys.exit(code)


def _load_spec(spec_path: Path):
    try:
        text = spec_path.read_text(encoding="utf-8")
    except OSError as exc:
        _fail(str(exc), RUNTIME_ERROR_EXIT)
    try:
        spec = parse(text)
    except ParseError as exc:
        _fail(f"{spec_path}:{exc}", SPEC_ERROR_EXIT)
    diagnostics = validate_spec(spec)
    if diagnostics:
        for diagnostic in diagnostics:
            click.echo(f"cpslint: {spec_path}:{diagnostic}", err=True)
        sys.exit(SPEC_ERROR_EXIT)
    return spec


def _load_run_config(spec_path: Path, config_path: Path | None) -> RunConfig:
    path = config_path if config_path is not None else spec_path.parent / CONFIG_FILE_NAME
    try:
        return load_config(path)
    except CpslintError as exc:
        _fail(str(exc), RUNTIME_ERROR_EXIT)
        raise AssertionError  # unreachable


@click.group()
def main() -> None:
    """Inspect, sanitise and compartmentalise time-series CSV traces."""


@main.command(name="run")
@click.argument("spec_path", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False,
              path_type=Path), default=None,
              help=f"Run configuration ({CONFIG_FILE_NAME} next to the program by default).")
def run_cmd(spec_path: Path, config_path: Path | None) -> None:
    """Execute a program through the configured pipeline."""
    spec = _load_spec(spec_path)
    config = _load_run_config(spec_path, config_path)
    try:
        if config.pipeline is Pipeline.INTERPRETER:
            report = interpret(spec, config, spec_name=spec_path.name)
            click.echo(f"run folder: {report.run_dir}")
            click.echo(f"steps: {len(report.steps)}")
            outputs = report.outputs
        else:
            outputs = _run_compiled(spec, config, spec_path)
    except (CpslintError, OSError) as exc:
        _fail(str(exc), RUNTIME_ERROR_EXIT)
    for path in outputs:
        click.echo(f"output: {path}")


def _run_compiled(spec, config: RunConfig, spec_path: Path) -> list[Path]:
    text = generate_script(spec, config, spec_name=spec_path.name)
    config.output_dir.mkdir(parents=True, exist_ok=True)
    script_path = config.output_dir / script_name(spec_path)
    write_script(text, script_path)  # persisted before running, for inspection
    click.echo(f"script: {script_path}")
    assert config.python_cmd is not None
    command = shlex.split(config.python_cmd) + [str(script_path)]
    result = subprocess.run(command, capture_output=True, text=True)
    if result.returncode != 0:
        raise CpslintError(
            f"generated script failed with exit code {result.returncode}:\n{result.stderr}")
    return _expected_outputs(spec, config)


def _expected_outputs(spec, config: RunConfig) -> list[Path]:
    outputs: list[Path] = []
    for cmd in spec.commands:
        if isinstance(cmd, InspectCmd):
            outputs.append(config.resolve_input(cmd.source).with_suffix(".cps"))
        elif isinstance(cmd, ExportCmd):
            if cmd.cut is None:
                outputs.append(config.resolve_output(cmd.target))
            else:
                # Segment count is data-dependent; segment 0 always exists.
                outputs.append(config.resolve_output(expand_target(cmd.target, 0)))
    missing = [p for p in outputs if not p.exists()]
    if missing:
        raise CpslintError(
            "script finished but expected outputs are missing: "
            + ", ".join(str(p) for p in missing))
    return outputs


@main.command(name="inspect")
@click.argument("input_csv", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--out", "out_path", type=click.Path(dir_okay=False, path_type=Path),
              default=None, help="Where to write the baseline program "
                                 "(<input-stem>.cps next to the input by default).")
def inspect_cmd(input_csv: Path, out_path: Path | None) -> None:
    """Generate a baseline program describing a CSV."""
    try:
        text = generate_baseline_spec(input_csv)
    except (CpslintError, OSError) as exc:
        _fail(str(exc), RUNTIME_ERROR_EXIT)
    target = out_path if out_path is not None else input_csv.with_suffix(".cps")
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(text, encoding="utf-8")
    click.echo(f"baseline program: {target}")


@main.command(name="gen")
@click.argument("spec_path", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False,
              path_type=Path), default=None)
@click.option("--out", "out_path", type=click.Path(dir_okay=False, path_type=Path),
              default=None, help="Script location (<program-stem>.py next to the "
                                 "program by default).")
def gen_cmd(spec_path: Path, config_path: Path | None, out_path: Path | None) -> None:
    """Generate the Python script for a program without executing it."""
    spec = _load_spec(spec_path)
    config = _load_run_config(spec_path, config_path)
    text = generate_script(spec, config, spec_name=spec_path.name)
    target = out_path if out_path is not None else spec_path.parent / script_name(spec_path)
    target.parent.mkdir(parents=True, exist_ok=True)
    write_script(text, target)
    click.echo(f"script: {target}")


@main.command(name="corrupt")
@click.argument("reference_csv", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--kind", required=True,
              type=click.Choice([k.value for k in CorruptionKind]))
@click.option("--rate", type=float, default=0.005, show_default=True)
@click.option("--block", type=int, default=10, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--uart-target", type=str, default=None)
@click.option("--column", "columns", type=str, multiple=True,
              help="Restrict damage to these columns (repeatable).")
@click.option("--out", "out_path", type=click.Path(dir_okay=False, path_type=Path),
              default=None, help="Output path (<stem>.<kind>.csv by default).")
def corrupt_cmd(reference_csv: Path, kind: str, rate: float, block: int, seed: int,
                uart_target: str | None, columns: tuple[str, ...],
                out_path: Path | None) -> None:
    """Write a corrupted copy of a reference CSV."""
    job = None
    try:
        job = CorruptionJob(
            kind=CorruptionKind(kind),
            block_size=block,
            rate=rate,
            seed=seed,
            uart_target=uart_target,
            columns=columns or None,
        )
        target = out_path if out_path is not None else \
            reference_csv.with_suffix(f".{kind}.csv")
        target.parent.mkdir(parents=True, exist_ok=True)
        corrupt_file(reference_csv, target, [job])
    except (CpslintError, OSError) as exc:
        _fail(str(exc), RUNTIME_ERROR_EXIT)
    click.echo(f"corrupted: {target}")


@main.command(name="fixture")
@click.option("--rows", type=int, default=10_000, show_default=True)
@click.option("--seed", type=int, default=42, show_default=True)
@click.option("--out", "out_path", required=True,
              type=click.Path(dir_okay=False, path_type=Path))
def fixture_cmd(rows: int, seed: int, out_path: Path) -> None:
    """Write the deterministic reference dataset used for testing."""
    try:
        table = generate_reference(rows, seed)
    except (CpslintError, OSError) as exc:
        _fail(str(exc), RUNTIME_ERROR_EXIT)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    write_csv(table, out_path)
    click.echo(f"fixture: {out_path}")


if __name__ == "__main__":
    main()
