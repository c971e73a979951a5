"""Abstract syntax of sanitisation programs, plus structural validation.

A program is a sequence of commands over three actions: ``inspect`` a CSV
to derive a baseline program, ``import`` one for processing, and ``export``
the processed table.  All types here are immutable values; source locations
are carried for diagnostics but excluded from structural equality so that a
parsed program compares equal to its pretty-printed-and-reparsed twin.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

POLYNOMIAL_MAX_ORDER = 5  # higher-order global fits are numerically meaningless on short gaps


@dataclass(frozen=True)
class SourceLocation:
    line: int = 1
    column: int = 1
    offset: int = 0

    def __str__(self) -> str:
        return f"{self.line}:{self.column}"


_NO_LOC = SourceLocation()


class DataType(enum.Enum):
    INT = "int"
    REAL = "real"
    STR = "str"


class RowFilter(enum.Enum):
    SKIP_EMPTY = "empty"
    SKIP_MALFORMED = "malformed"


class ImputeKind(enum.Enum):
    MEAN = "mean"
    MEDIAN = "median"
    FORWARD_FILL = "forward fill"
    BACK_FILL = "back fill"
    LINEAR = "linear interpolation"
    POLYNOMIAL = "polynomial interpolation"


#: Strategies that copy neighbouring values verbatim and therefore work on
#: any cell type; every other strategy computes a number.
FILL_STRATEGIES = frozenset({ImputeKind.FORWARD_FILL, ImputeKind.BACK_FILL})


@dataclass(frozen=True)
class ImputeStrategy:
    kind: ImputeKind
    order: int | None = None  # polynomial degree, POLYNOMIAL only


@dataclass(frozen=True)
class SubstringFilter:
    needle: str
    column: str | None = None  # None: applies to every column
    loc: SourceLocation = field(default=_NO_LOC, compare=False, repr=False)


@dataclass(frozen=True)
class CutRule:
    column: str
    marker: str


@dataclass(frozen=True)
class ColumnPlan:
    source_name: str
    output_name: str
    declared_type: DataType | None = None
    valid_range: tuple[float, float] | None = None
    impute: ImputeStrategy | None = None
    loc: SourceLocation = field(default=_NO_LOC, compare=False, repr=False)


@dataclass(frozen=True)
class InspectCmd:
    source: str
    loc: SourceLocation = field(default=_NO_LOC, compare=False, repr=False)


@dataclass(frozen=True)
class ImportCmd:
    source: str
    row_filters: tuple[RowFilter, ...] = ()
    substring_filters: tuple[SubstringFilter, ...] = ()
    loc: SourceLocation = field(default=_NO_LOC, compare=False, repr=False)


@dataclass(frozen=True)
class ExportCmd:
    columns: tuple[ColumnPlan, ...]
    target: str
    cut: CutRule | None = None
    sort_by: str | None = None
    loc: SourceLocation = field(default=_NO_LOC, compare=False, repr=False)


Command = InspectCmd | ImportCmd | ExportCmd


@dataclass(frozen=True)
class Spec:
    commands: tuple[Command, ...]


@dataclass(frozen=True)
class Diagnostic:
    message: str
    loc: SourceLocation = _NO_LOC

    def __str__(self) -> str:
        return f"{self.loc}: {self.message}"


def _check_plan(plan: ColumnPlan, out: list[Diagnostic]) -> None:
    numeric = plan.declared_type in (DataType.INT, DataType.REAL)
    if not plan.source_name:
        out.append(Diagnostic("column source name is empty", plan.loc))
    if not plan.output_name:
        out.append(Diagnostic("column output name is empty", plan.loc))
    if plan.valid_range is not None:
        lo, hi = plan.valid_range
        if not numeric:
            out.append(Diagnostic(
                f"valid range on column '{plan.output_name}' requires an int or real type",
                plan.loc))
        if not (math.isfinite(lo) and math.isfinite(hi)):
            out.append(Diagnostic(
                f"range bounds of column '{plan.output_name}' must be finite", plan.loc))
        elif lo > hi:
            out.append(Diagnostic(
                f"range of column '{plan.output_name}' has lower bound above upper bound",
                plan.loc))
    if plan.impute is not None:
        strategy = plan.impute
        if strategy.kind not in FILL_STRATEGIES and not numeric:
            out.append(Diagnostic(
                f"impute strategy '{strategy.kind.value}' on column "
                f"'{plan.output_name}' requires an int or real type", plan.loc))
        if strategy.kind is ImputeKind.POLYNOMIAL:
            order = strategy.order
            if order is None or order < 1 or order > POLYNOMIAL_MAX_ORDER:
                out.append(Diagnostic(
                    f"polynomial order must be between 1 and {POLYNOMIAL_MAX_ORDER}",
                    plan.loc))


def _check_export(cmd: ExportCmd, out: list[Diagnostic]) -> None:
    if not cmd.columns:
        out.append(Diagnostic("export lists no columns", cmd.loc))
    if not cmd.target:
        out.append(Diagnostic("export target path is empty", cmd.loc))
    seen: set[str] = set()
    for plan in cmd.columns:
        if plan.output_name in seen:
            out.append(Diagnostic(
                f"duplicate output column '{plan.output_name}'", plan.loc))
        seen.add(plan.output_name)
        _check_plan(plan, out)
    if cmd.cut is not None:
        if "#" not in cmd.target:
            out.append(Diagnostic(
                "cut rule requires a '#' placeholder in the target path", cmd.loc))
        if not cmd.cut.column or not cmd.cut.marker:
            out.append(Diagnostic("cut rule column and marker must be nonempty", cmd.loc))
    if cmd.sort_by is not None and not cmd.sort_by:
        out.append(Diagnostic("sort column name is empty", cmd.loc))


def validate_spec(spec: Spec) -> list[Diagnostic]:
    """Check every structural invariant; an empty list means the spec is sound.

    Pure: equal specs always produce equal diagnostics.  Data-dependent
    problems (unknown columns and the like) surface at run time instead.
    """
    out: list[Diagnostic] = []
    if not spec.commands:
        out.append(Diagnostic("program contains no commands"))
        return out

    inspects = [c for c in spec.commands if isinstance(c, InspectCmd)]
    if inspects and len(spec.commands) > 1:
        out.append(Diagnostic(
            "inspect must be the only command in a program", inspects[0].loc))

    import_seen = False
    for cmd in spec.commands:
        if isinstance(cmd, InspectCmd):
            if not cmd.source:
                out.append(Diagnostic("inspect source path is empty", cmd.loc))
        elif isinstance(cmd, ImportCmd):
            if import_seen:
                out.append(Diagnostic("only one import is allowed per program", cmd.loc))
            import_seen = True
            if not cmd.source:
                out.append(Diagnostic("import source path is empty", cmd.loc))
            seen_filters: set[RowFilter] = set()
            for rf in cmd.row_filters:
                if rf in seen_filters:
                    out.append(Diagnostic(
                        f"duplicate row filter 'skip {rf.value}'", cmd.loc))
                seen_filters.add(rf)
            for sf in cmd.substring_filters:
                if not sf.needle:
                    out.append(Diagnostic("substring filter needle is empty", sf.loc))
                if sf.column is not None and not sf.column:
                    out.append(Diagnostic("substring filter column name is empty", sf.loc))
        elif isinstance(cmd, ExportCmd):
            if not import_seen:
                out.append(Diagnostic("export without prior import", cmd.loc))
            _check_export(cmd, out)
    return out
