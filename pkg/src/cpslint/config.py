"""Run configuration: YAML file naming locations, pipeline and interpreter command."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from pathlib import Path

import yaml

from .errors import ConfigError

CONFIG_FILE_NAME = "config.yaml"


class Pipeline(enum.Enum):
    COMPILER = "compiler"
    INTERPRETER = "interpreter"


@dataclass(frozen=True)
class RunConfig:
    input_dir: Path
    output_dir: Path
    pipeline: Pipeline
    python_cmd: str | None = None  # required by the compiler pipeline only

    def resolve_input(self, source: str) -> Path:
        path = Path(source)
        return path if path.is_absolute() else self.input_dir / path

    def resolve_output(self, target: str) -> Path:
        path = Path(target)
        return path if path.is_absolute() else self.output_dir / path


def load_config(path: str | Path) -> RunConfig:
    """Parse ``config.yaml``; relative directories resolve against its folder.

    ``python_cmd`` may be omitted when the interpreter pipeline is selected,
    since that back-end never shells out.
    """
    path = Path(path)
    try:
        raw = yaml.safe_load(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError(f"{path}: invalid YAML: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: expected a mapping of configuration keys")

    for key in ("input_dir", "output_dir", "pipeline"):
        if key not in raw:
            raise ConfigError(f"{path}: missing required key '{key}'")

    pipeline_value = str(raw["pipeline"])
    try:
        pipeline = Pipeline(pipeline_value)
    except ValueError:
        allowed = ", ".join(p.value for p in Pipeline)
        raise ConfigError(
            f"{path}: unknown pipeline '{pipeline_value}' (allowed: {allowed})") from None

    python_cmd = raw.get("python_cmd")
    if python_cmd is not None:
        python_cmd = str(python_cmd)
    if pipeline is Pipeline.COMPILER and not python_cmd:
        raise ConfigError(f"{path}: the compiler pipeline requires 'python_cmd'")

    base = path.resolve().parent

    def resolve_dir(key: str) -> Path:
        value = Path(str(raw[key]))
        return value if value.is_absolute() else base / value

    return RunConfig(
        input_dir=resolve_dir("input_dir"),
        output_dir=resolve_dir("output_dir"),
        pipeline=pipeline,
        python_cmd=python_cmd,
    )
