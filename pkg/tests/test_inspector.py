from cpslint.ast import DataType, ExportCmd, ImportCmd, validate_spec
from cpslint.config import Pipeline, RunConfig
from cpslint.inspector import generate_baseline_spec, infer_types
from cpslint.interpreter import interpret
from cpslint.parser import parse
from cpslint.table import parse_int_cell, parse_real_cell, read_csv

from helpers import csv_value_diff, table


def brute_force_type(cells):
    # Oracle: per-cell parsing with the table engine's own parsers.
    known = [c for c in cells if c is not None]
    if not known:
        return DataType.STR
    if all(parse_int_cell(c) is not None for c in known):
        return DataType.INT
    if all(parse_real_cell(c) is not None for c in known):
        return DataType.REAL
    return DataType.STR


def test_all_int_column():
    assert infer_types(table(A=["1", "2", "3"])) == {"A": DataType.INT}


def test_int_promotes_to_real():
    assert infer_types(table(A=["1", "2.5"])) == {"A": DataType.REAL}


def test_mixed_column_is_str():
    cells = ["1.5", "abc"]
    assert brute_force_type(cells) == DataType.STR
    assert infer_types(table(A=cells)) == {"A": DataType.STR}


def test_all_empty_column_is_str():
    assert infer_types(table(A=[None, None])) == {"A": DataType.STR}


def test_inference_matches_brute_force_on_fixture(reference_table):
    inferred = infer_types(reference_table)
    for column in reference_table.columns:
        text_cells = [None if c is None else str(c) for c in column.cells]
        assert inferred[column.name] == brute_force_type(text_cells)


def test_baseline_spec_structure(tmp_path):
    path = tmp_path / "two.csv"
    path.write_text("A,B\n1,x\n2,y\n", encoding="utf-8")
    text = generate_baseline_spec(path)
    assert "'A' is 'A' as int" in text
    assert "'B' is 'B' as str" in text
    spec = parse(text)
    assert validate_spec(spec) == []
    assert isinstance(spec.commands[0], ImportCmd)
    assert spec.commands[0].source == "two.csv"
    export = spec.commands[1]
    assert isinstance(export, ExportCmd)
    assert export.target == "two_sanitised.csv"


def test_zero_row_file_infers_str_everywhere(tmp_path):
    path = tmp_path / "empty.csv"
    path.write_text("A,B\n", encoding="utf-8")
    text = generate_baseline_spec(path)
    assert "'A' is 'A' as str" in text and "'B' is 'B' as str" in text
    assert validate_spec(parse(text)) == []


def test_baseline_run_is_identity(reference_csv, tmp_path):
    # Executing the inferred program reproduces the input values.
    spec = parse(generate_baseline_spec(reference_csv))
    out_dir = tmp_path / "out"
    out_dir.mkdir()
    config = RunConfig(input_dir=reference_csv.parent, output_dir=out_dir,
                       pipeline=Pipeline.INTERPRETER)
    report = interpret(spec, config)
    produced = [p for p in report.outputs if p.suffix == ".csv"]
    assert len(produced) == 1
    assert csv_value_diff(reference_csv, produced[0], tol=1e-9) == []


def test_identity_even_on_untyped_text_columns(tmp_path):
    path = tmp_path / "odd.csv"
    path.write_text('K,S\n1,"a,b"\n2, spaced \n', encoding="utf-8")
    spec = parse(generate_baseline_spec(path))
    out_dir = tmp_path / "out"
    out_dir.mkdir()
    config = RunConfig(input_dir=tmp_path, output_dir=out_dir,
                       pipeline=Pipeline.INTERPRETER)
    interpret(spec, config)
    reloaded = read_csv(out_dir / "odd_sanitised.csv")
    assert reloaded.column("S").cells == ["a,b", " spaced "]
