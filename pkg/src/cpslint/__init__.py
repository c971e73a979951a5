"""Declarative sanitisation and compartmentalisation of time-series CSV traces."""

from .ast import (
    ColumnPlan,
    CutRule,
    DataType,
    Diagnostic,
    ExportCmd,
    ImportCmd,
    ImputeKind,
    ImputeStrategy,
    InspectCmd,
    RowFilter,
    Spec,
    SubstringFilter,
    validate_spec,
)
from .codegen import generate_script, write_script
from .config import Pipeline, RunConfig, load_config
from .corruptor import CorruptionJob, CorruptionKind, compose, corrupt, corrupt_file
from .errors import ConfigError, CpslintError, DataError, RunError
from .fixtures import generate_reference
from .inspector import generate_baseline_spec, infer_types
from .interpreter import RunReport, StepRecord, interpret
from .parser import ParseError, parse, pretty_print
from .table import Column, Table, read_csv, write_csv
from .transforms import run_export

__version__ = "0.1.0"

__all__ = [
    "Column",
    "ColumnPlan",
    "ConfigError",
    "CorruptionJob",
    "CorruptionKind",
    "CpslintError",
    "CutRule",
    "DataError",
    "DataType",
    "Diagnostic",
    "ExportCmd",
    "ImportCmd",
    "ImputeKind",
    "ImputeStrategy",
    "InspectCmd",
    "ParseError",
    "Pipeline",
    "RowFilter",
    "RunConfig",
    "RunError",
    "RunReport",
    "Spec",
    "StepRecord",
    "SubstringFilter",
    "Table",
    "compose",
    "corrupt",
    "corrupt_file",
    "generate_baseline_spec",
    "generate_reference",
    "generate_script",
    "infer_types",
    "interpret",
    "load_config",
    "parse",
    "pretty_print",
    "read_csv",
    "run_export",
    "validate_spec",
    "write_csv",
    "write_script",
]
