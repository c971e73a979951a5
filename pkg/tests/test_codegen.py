import subprocess
import sys
from pathlib import Path

from cpslint.codegen import directive_comments, generate_script, script_name, write_script
from cpslint.config import Pipeline, RunConfig
from cpslint.interpreter import interpret
from cpslint.parser import parse
from cpslint.table import write_csv

from conftest import CORPUS_DIR
from helpers import csv_value_diff, table

PROGRAM_1 = """
import csv from 'in.csv' skip empty;
export csv
  'V' is 'Voltage' as real in [0.0, 15.0],
  'A' is 'Current' as real in [0.0, 5.0]
  to 'clean.csv';
"""

PROGRAM_2 = """
import csv from 'in.csv' skip empty skip '#';
export csv
  'V' is 'Voltage' as real impute linear interpolation,
  'A' is 'Current' as real impute linear interpolation
  to 'clean.csv';
"""


def make_config(tmp_path, pipeline=Pipeline.COMPILER) -> RunConfig:
    out = tmp_path / "out"
    out.mkdir(exist_ok=True)
    return RunConfig(input_dir=tmp_path, output_dir=out, pipeline=pipeline,
                     python_cmd=sys.executable)


def run_script(text: str, tmp_path) -> None:
    script = tmp_path / "generated.py"
    write_script(text, script)
    result = subprocess.run([sys.executable, str(script)],
                            capture_output=True, text=True, cwd=tmp_path)
    assert result.returncode == 0, result.stderr


def test_program_1_script_sections(tmp_path):
    config = make_config(tmp_path)
    text = generate_script(parse(PROGRAM_1), config)
    for marker in ("csv.reader", "Drop rows with no values at all",
                   "Enforce real type on 'Voltage'", "between(0.0, 15.0)",
                   "to_csv"):
        assert marker in text
    compile(text, "<generated>", "exec")  # syntactically valid


def test_program_2_script_has_substring_and_interpolation(tmp_path):
    config = make_config(tmp_path)
    text = generate_script(parse(PROGRAM_2), config)
    assert "remove_all" in text
    assert "interpolate(method='linear', limit_area='inside')" in text
    compile(text, "<generated>", "exec")


def test_generation_is_deterministic(tmp_path):
    config = make_config(tmp_path)
    spec = parse(PROGRAM_2)
    assert generate_script(spec, config) == generate_script(spec, config)


def test_script_file_name_follows_spec_stem():
    assert script_name("dir/out_of_bounds.cps") == "out_of_bounds.py"


def test_every_directive_contributes_a_comment():
    config = RunConfig(Path("/in"), Path("/out"), Pipeline.COMPILER, "python3")
    for spec_path in sorted(CORPUS_DIR.glob("*.cps")):
        spec = parse(spec_path.read_text(encoding="utf-8"))
        text = generate_script(spec, config, spec_name=spec_path.name)
        for comment in directive_comments(spec):
            assert f"# {comment}" in text, (spec_path.name, comment)


def test_generated_script_output_matches_interpreter(tmp_path):
    write_csv(table(V=["1.0", "99999.999", "2.0", "#5.0"],
                    A=["0.5", "1.5", "2.5", "3.5"]), tmp_path / "in.csv")
    spec = parse(PROGRAM_2)

    interp_dir = tmp_path / "interp"
    interp_dir.mkdir()
    interpret(spec, RunConfig(tmp_path, interp_dir, Pipeline.INTERPRETER))

    config = make_config(tmp_path)
    run_script(generate_script(spec, config), tmp_path)

    assert csv_value_diff(interp_dir / "clean.csv", tmp_path / "out" / "clean.csv") == []


def test_cut_script_writes_one_file_per_segment(tmp_path):
    # Oracle fixture: two markers, one mid-table, so preamble + 2 segments.
    write_csv(table(T=["1", "2", "3", "4"], U=[None, "go", None, "go"]),
              tmp_path / "in.csv")
    spec = parse("import csv from 'in.csv';\n"
                 "export csv 'T' is 'T' as int, 'U' is 'U' to 'seg#.csv' "
                 "cut when 'U' is 'go';")
    interp_dir = tmp_path / "interp"
    interp_dir.mkdir()
    interpret(spec, RunConfig(tmp_path, interp_dir, Pipeline.INTERPRETER))

    config = make_config(tmp_path)
    run_script(generate_script(spec, config), tmp_path)

    generated = sorted(p.name for p in (tmp_path / "out").glob("seg*.csv"))
    expected = sorted(p.name for p in interp_dir.glob("seg*.csv"))
    assert generated == expected == ["seg0.csv", "seg1.csv", "seg2.csv"]
    for name in generated:
        assert csv_value_diff(interp_dir / name, tmp_path / "out" / name) == []


def test_inspect_script_writes_same_baseline_as_interpreter(tmp_path):
    write_csv(table(K=["1", "2"], S=["a", "b"]), tmp_path / "in.csv")
    spec = parse("inspect csv from 'in.csv';")

    interp_input = tmp_path / "interp"
    interp_input.mkdir()
    write_csv(table(K=["1", "2"], S=["a", "b"]), interp_input / "in.csv")
    interpret(spec, RunConfig(interp_input, tmp_path / "iout", Pipeline.INTERPRETER))

    config = make_config(tmp_path)
    text = generate_script(spec, config)
    assert "pandas" not in text  # pure-stdlib inference script
    run_script(text, tmp_path)

    assert (tmp_path / "in.cps").read_text() == (interp_input / "in.cps").read_text()


def test_spec_stem_maps_to_script_stem(tmp_path):
    config = make_config(tmp_path)
    text = generate_script(parse(PROGRAM_1), config, spec_name="out_of_bounds.cps")
    assert "out_of_bounds.cps" in text.splitlines()[1]
