from cpslint.ast import (
    ColumnPlan,
    CutRule,
    DataType,
    ExportCmd,
    ImportCmd,
    ImputeKind,
    ImputeStrategy,
    InspectCmd,
    RowFilter,
    Spec,
    validate_spec,
)
from cpslint.parser import parse

PROGRAM_1 = """
import csv from 'ref.csv' skip empty;
export csv
  'Voltage' is 'Voltage' as real in [0.0, 15.0],
  'Current' is 'Current' as real in [0.0, 5.0]
  to 'clean.csv';
"""


def plan(**kwargs) -> ColumnPlan:
    defaults = dict(source_name="a", output_name="a")
    defaults.update(kwargs)
    return ColumnPlan(**defaults)


def export(*plans, target="out.csv", **kwargs) -> ExportCmd:
    return ExportCmd(tuple(plans), target, **kwargs)


def test_export_without_import_is_diagnosed():
    spec = Spec((export(plan()),))
    messages = [d.message for d in validate_spec(spec)]
    assert messages == ["export without prior import"]


def test_range_on_str_column_is_diagnosed():
    spec = Spec((ImportCmd("in.csv"),
                 export(plan(declared_type=DataType.STR, valid_range=(0.0, 1.0)))))
    assert any("requires an int or real type" in d.message for d in validate_spec(spec))


def test_range_on_untyped_column_is_diagnosed():
    spec = Spec((ImportCmd("in.csv"), export(plan(valid_range=(0.0, 1.0)))))
    assert validate_spec(spec)


def test_example_program_shape_is_clean():
    assert validate_spec(parse(PROGRAM_1)) == []


def test_validate_is_pure():
    spec = parse(PROGRAM_1)
    assert validate_spec(spec) == validate_spec(spec)


def test_inspect_must_be_alone():
    spec = Spec((InspectCmd("x.csv"), ImportCmd("y.csv")))
    assert any("only command" in d.message for d in validate_spec(spec))
    assert validate_spec(Spec((InspectCmd("x.csv"),))) == []


def test_second_import_is_diagnosed():
    spec = Spec((ImportCmd("a.csv"), ImportCmd("b.csv")))
    assert any("one import" in d.message for d in validate_spec(spec))


def test_multiple_exports_after_one_import_are_legal():
    spec = Spec((ImportCmd("a.csv"), export(plan()), export(plan(), target="two.csv")))
    assert validate_spec(spec) == []


def test_duplicate_row_filters_are_diagnosed():
    spec = Spec((ImportCmd("a.csv", (RowFilter.SKIP_EMPTY, RowFilter.SKIP_EMPTY)),))
    assert any("duplicate row filter" in d.message for d in validate_spec(spec))


def test_duplicate_output_columns_are_diagnosed():
    spec = Spec((ImportCmd("a.csv"),
                 export(plan(output_name="x"), plan(source_name="b", output_name="x"))))
    assert any("duplicate output column" in d.message for d in validate_spec(spec))


def test_same_source_to_two_outputs_is_legal():
    spec = Spec((ImportCmd("a.csv"),
                 export(plan(output_name="x"), plan(output_name="y"))))
    assert validate_spec(spec) == []


def test_cut_requires_hash_in_target():
    cut = CutRule("UART", "image loader")
    bad = Spec((ImportCmd("a.csv"), export(plan(), target="out.csv", cut=cut)))
    assert any("'#' placeholder" in d.message for d in validate_spec(bad))
    good = Spec((ImportCmd("a.csv"), export(plan(), target="out#.csv", cut=cut)))
    assert validate_spec(good) == []


def test_lower_bound_above_upper_is_diagnosed():
    spec = Spec((ImportCmd("a.csv"),
                 export(plan(declared_type=DataType.REAL, valid_range=(2.0, 1.0)))))
    assert any("lower bound above upper" in d.message for d in validate_spec(spec))


def test_polynomial_order_bounds():
    for order, ok in [(0, False), (1, True), (5, True), (6, False)]:
        strategy = ImputeStrategy(ImputeKind.POLYNOMIAL, order)
        spec = Spec((ImportCmd("a.csv"),
                     export(plan(declared_type=DataType.REAL, impute=strategy))))
        assert (validate_spec(spec) == []) is ok


def test_numeric_impute_on_untyped_column_is_diagnosed():
    spec = Spec((ImportCmd("a.csv"),
                 export(plan(impute=ImputeStrategy(ImputeKind.MEAN)))))
    assert any("requires an int or real type" in d.message for d in validate_spec(spec))


def test_fill_impute_on_untyped_column_is_legal():
    spec = Spec((ImportCmd("a.csv"),
                 export(plan(impute=ImputeStrategy(ImputeKind.FORWARD_FILL)))))
    assert validate_spec(spec) == []


def test_diagnostic_locations_lie_within_source():
    source = "export csv 'a' is 'a' to 'out.csv';"
    diagnostics = validate_spec(parse(source))
    assert diagnostics
    for d in diagnostics:
        assert 0 <= d.loc.offset <= len(source)


def test_empty_spec_is_diagnosed():
    assert validate_spec(Spec(())) != []
