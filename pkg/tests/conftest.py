from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))  # helpers/strategies importable

from cpslint.config import Pipeline, RunConfig
from cpslint.fixtures import generate_reference
from cpslint.table import Table, write_csv

CORPUS_DIR = Path(__file__).resolve().parent.parent / "corpus"


@pytest.fixture(scope="session")
def reference_table() -> Table:
    return generate_reference(10_000, 42)


@pytest.fixture(scope="session")
def reference_csv(reference_table, tmp_path_factory) -> Path:
    path = tmp_path_factory.mktemp("reference") / "ref.csv"
    write_csv(reference_table, path)
    return path


@pytest.fixture()
def interp_config(tmp_path, reference_csv) -> RunConfig:
    out = tmp_path / "out"
    out.mkdir(exist_ok=True)
    return RunConfig(
        input_dir=reference_csv.parent,
        output_dir=out,
        pipeline=Pipeline.INTERPRETER,
    )


def make_config(input_dir: Path, output_dir: Path,
                pipeline: Pipeline = Pipeline.INTERPRETER) -> RunConfig:
    output_dir.mkdir(parents=True, exist_ok=True)
    return RunConfig(
        input_dir=input_dir,
        output_dir=output_dir,
        pipeline=pipeline,
        python_cmd=sys.executable,
    )
