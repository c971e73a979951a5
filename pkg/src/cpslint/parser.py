"""Concrete syntax: lexer, recursive-descent parser and pretty-printer.

The grammar, normative for this artifact:

    program    := command+
    command    := inspect | import | export
    inspect    := "inspect" "csv" "from" STRING ";"
    import     := "import" "csv" "from" STRING filter* ";"
    filter     := "skip" "empty"
                | "skip" "malformed"
                | "skip" STRING ("in" STRING)?
    export     := "export" "csv" colspec ("," colspec)*
                  "to" STRING ("sort" "by" STRING)?
                  ("cut" "when" STRING "is" STRING)? ";"
    colspec    := STRING "is" STRING
                  ("as" ("int" | "real" | "str"))?
                  ("in" "[" NUMBER "," NUMBER "]")?
                  ("impute" strategy)?
    strategy   := "mean" | "median" | "forward" "fill" | "back" "fill"
                | "linear" "interpolation"
                | "polynomial" "interpolation" INTEGER

Keywords are case-sensitive lowercase; column names and paths are always
single-quoted strings with backslash escapes; ``//`` starts a comment that
runs to end of line.  ``parse`` never raises anything but :class:`ParseError`
on malformed input, whatever the byte sequence.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .ast import (
    ColumnPlan,
    Command,
    CutRule,
    DataType,
    ExportCmd,
    ImportCmd,
    ImputeKind,
    ImputeStrategy,
    InspectCmd,
    RowFilter,
    SourceLocation,
    Spec,
    SubstringFilter,
)
from .errors import CpslintError

_NUMBER_RE = re.compile(r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")
_WORD_RE = re.compile(r"[A-Za-z_]+")
_INTEGER_RE = re.compile(r"\d+")

_ESCAPES = {"n": "\n", "t": "\t", "r": "\r", "\\": "\\", "'": "'"}
_PUNCT = ",;[]"


class ParseError(CpslintError):
    """Syntax error at a single offending token."""

    def __init__(self, location: SourceLocation, expected: str, found: str):
        self.location = location
        self.expected = expected
        self.found = found
        super().__init__(f"{location}: expected {expected}, found {found}")


@dataclass(frozen=True)
class _Token:
    kind: str  # word | string | number | punct | eof
    lexeme: str
    value: object
    loc: SourceLocation

    def describe(self) -> str:
        if self.kind == "eof":
            return "end of input"
        return f"'{self.lexeme}'"


def _lex(source: str) -> list[_Token]:
    tokens: list[_Token] = []
    pos, line, col = 0, 1, 1
    n = len(source)

    def here() -> SourceLocation:
        return SourceLocation(line, col, pos)

    def advance(text: str) -> None:
        nonlocal pos, line, col
        for ch in text:
            pos += 1
            if ch == "\n":
                line += 1
                col = 1
            else:
                col += 1

    while pos < n:
        ch = source[pos]
        if ch in " \t\r\n":
            advance(ch)
            continue
        if source.startswith("//", pos):
            end = source.find("\n", pos)
            advance(source[pos:] if end < 0 else source[pos:end])
            continue
        loc = here()
        if ch in _PUNCT:
            tokens.append(_Token("punct", ch, ch, loc))
            advance(ch)
            continue
        if ch == "'":
            value, lexeme = _lex_string(source, pos, loc)
            tokens.append(_Token("string", lexeme, value, loc))
            advance(lexeme)
            continue
        m = _WORD_RE.match(source, pos)
        if m:
            tokens.append(_Token("word", m.group(), m.group(), loc))
            advance(m.group())
            continue
        m = _NUMBER_RE.match(source, pos)
        if m and any(c.isdigit() for c in m.group()):
            tokens.append(_Token("number", m.group(), float(m.group()), loc))
            advance(m.group())
            continue
        raise ParseError(loc, "a token", f"'{ch}'")
    tokens.append(_Token("eof", "", None, here()))
    return tokens


def _lex_string(source: str, start: int, loc: SourceLocation) -> tuple[str, str]:
    out: list[str] = []
    i = start + 1
    while i < len(source):
        ch = source[i]
        if ch == "'":
            return "".join(out), source[start:i + 1]
        if ch == "\\":
            if i + 1 >= len(source):
                break
            out.append(_ESCAPES.get(source[i + 1], source[i + 1]))
            i += 2
            continue
        out.append(ch)
        i += 1
    raise ParseError(loc, "a closing quote", "end of input")


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.i = 0

    @property
    def cur(self) -> _Token:
        return self.tokens[self.i]

    def fail(self, expected: str) -> ParseError:
        return ParseError(self.cur.loc, expected, self.cur.describe())

    def at_word(self, *words: str) -> bool:
        return self.cur.kind == "word" and self.cur.lexeme in words

    def at_punct(self, ch: str) -> bool:
        return self.cur.kind == "punct" and self.cur.lexeme == ch

    def take(self) -> _Token:
        tok = self.cur
        self.i += 1
        return tok

    def expect_word(self, word: str) -> _Token:
        if not self.at_word(word):
            raise self.fail(f"'{word}'")
        return self.take()

    def expect_punct(self, ch: str) -> _Token:
        if not self.at_punct(ch):
            raise self.fail(f"'{ch}'")
        return self.take()

    def expect_string(self, what: str) -> str:
        if self.cur.kind != "string":
            raise self.fail(what)
        return str(self.take().value)

    def expect_number(self) -> float:
        if self.cur.kind != "number":
            raise self.fail("a number")
        return float(self.take().value)  # type: ignore[arg-type]

    def expect_integer(self) -> int:
        if self.cur.kind != "number" or not _INTEGER_RE.fullmatch(self.cur.lexeme):
            raise self.fail("an integer")
        return int(self.take().lexeme)

    # -- productions ------------------------------------------------------

    def command(self) -> Command:
        if self.at_word("inspect"):
            return self.inspect_cmd()
        if self.at_word("import"):
            return self.import_cmd()
        if self.at_word("export"):
            return self.export_cmd()
        raise self.fail("'inspect', 'import' or 'export'")

    def inspect_cmd(self) -> InspectCmd:
        loc = self.expect_word("inspect").loc
        self.expect_word("csv")
        self.expect_word("from")
        source = self.expect_string("a quoted file path")
        self.expect_punct(";")
        return InspectCmd(source, loc=loc)

    def import_cmd(self) -> ImportCmd:
        loc = self.expect_word("import").loc
        self.expect_word("csv")
        self.expect_word("from")
        source = self.expect_string("a quoted file path")
        row_filters: list[RowFilter] = []
        substring_filters: list[SubstringFilter] = []
        while self.at_word("skip"):
            skip_loc = self.take().loc
            if self.at_word("empty"):
                self.take()
                row_filters.append(RowFilter.SKIP_EMPTY)
            elif self.at_word("malformed"):
                self.take()
                row_filters.append(RowFilter.SKIP_MALFORMED)
            elif self.cur.kind == "string":
                needle = str(self.take().value)
                column = None
                if self.at_word("in"):
                    self.take()
                    column = self.expect_string("a quoted column name")
                substring_filters.append(SubstringFilter(needle, column, loc=skip_loc))
            else:
                raise self.fail("'empty', 'malformed' or a quoted substring")
        self.expect_punct(";")
        return ImportCmd(source, tuple(row_filters), tuple(substring_filters), loc=loc)

    def export_cmd(self) -> ExportCmd:
        loc = self.expect_word("export").loc
        self.expect_word("csv")
        columns = [self.colspec()]
        while self.at_punct(","):
            self.take()
            columns.append(self.colspec())
        self.expect_word("to")
        target = self.expect_string("a quoted output path")
        sort_by = None
        if self.at_word("sort"):
            self.take()
            self.expect_word("by")
            sort_by = self.expect_string("a quoted column name")
        cut = None
        if self.at_word("cut"):
            self.take()
            self.expect_word("when")
            column = self.expect_string("a quoted column name")
            self.expect_word("is")
            marker = self.expect_string("a quoted marker value")
            cut = CutRule(column, marker)
        self.expect_punct(";")
        return ExportCmd(tuple(columns), target, cut, sort_by, loc=loc)

    def colspec(self) -> ColumnPlan:
        if self.cur.kind != "string":
            raise self.fail("a quoted column name")
        loc = self.cur.loc
        source = str(self.take().value)
        self.expect_word("is")
        output = self.expect_string("a quoted column name")
        declared = None
        if self.at_word("as"):
            self.take()
            if not self.at_word("int", "real", "str"):
                raise self.fail("'int', 'real' or 'str'")
            declared = DataType(self.take().lexeme)
        valid_range = None
        if self.at_word("in"):
            self.take()
            self.expect_punct("[")
            lo = self.expect_number()
            self.expect_punct(",")
            hi = self.expect_number()
            self.expect_punct("]")
            valid_range = (lo, hi)
        impute = None
        if self.at_word("impute"):
            self.take()
            impute = self.strategy()
        return ColumnPlan(source, output, declared, valid_range, impute, loc=loc)

    def strategy(self) -> ImputeStrategy:
        if self.at_word("mean"):
            self.take()
            return ImputeStrategy(ImputeKind.MEAN)
        if self.at_word("median"):
            self.take()
            return ImputeStrategy(ImputeKind.MEDIAN)
        if self.at_word("forward"):
            self.take()
            self.expect_word("fill")
            return ImputeStrategy(ImputeKind.FORWARD_FILL)
        if self.at_word("back"):
            self.take()
            self.expect_word("fill")
            return ImputeStrategy(ImputeKind.BACK_FILL)
        if self.at_word("linear"):
            self.take()
            self.expect_word("interpolation")
            return ImputeStrategy(ImputeKind.LINEAR)
        if self.at_word("polynomial"):
            self.take()
            self.expect_word("interpolation")
            return ImputeStrategy(ImputeKind.POLYNOMIAL, self.expect_integer())
        raise self.fail("an imputation strategy")


def parse(source_text: str) -> Spec:
    """Parse program text into a :class:`Spec`; raise :class:`ParseError` otherwise."""
    parser = _Parser(_lex(source_text))
    commands: list[Command] = []
    while parser.cur.kind != "eof":
        commands.append(parser.command())
    if not commands:
        raise parser.fail("at least one command")
    return Spec(tuple(commands))


# -- pretty-printing -------------------------------------------------------


def quote(text: str) -> str:
    """Single-quote ``text``, escaping the characters the lexer treats specially."""
    escaped = (
        text.replace("\\", "\\\\")
        .replace("'", "\\'")
        .replace("\n", "\\n")
        .replace("\t", "\\t")
        .replace("\r", "\\r")
    )
    return f"'{escaped}'"


def format_number(value: float) -> str:
    text = repr(float(value))
    if "." not in text and "e" not in text and "E" not in text:
        text += ".0"
    return text


def _print_colspec(plan: ColumnPlan) -> str:
    parts = [f"{quote(plan.source_name)} is {quote(plan.output_name)}"]
    if plan.declared_type is not None:
        parts.append(f"as {plan.declared_type.value}")
    if plan.valid_range is not None:
        lo, hi = plan.valid_range
        parts.append(f"in [{format_number(lo)}, {format_number(hi)}]")
    if plan.impute is not None:
        strategy = plan.impute
        if strategy.kind is ImputeKind.POLYNOMIAL:
            parts.append(f"impute {strategy.kind.value} {strategy.order}")
        else:
            parts.append(f"impute {strategy.kind.value}")
    return " ".join(parts)


def _print_command(cmd: Command) -> str:
    if isinstance(cmd, InspectCmd):
        return f"inspect csv from {quote(cmd.source)};\n"
    if isinstance(cmd, ImportCmd):
        parts = [f"import csv from {quote(cmd.source)}"]
        for rf in cmd.row_filters:
            parts.append(f"skip {rf.value}")
        for sf in cmd.substring_filters:
            clause = f"skip {quote(sf.needle)}"
            if sf.column is not None:
                clause += f" in {quote(sf.column)}"
            parts.append(clause)
        return " ".join(parts) + ";\n"
    lines = ["export csv"]
    for index, plan in enumerate(cmd.columns):
        comma = "," if index + 1 < len(cmd.columns) else ""
        lines.append(f"  {_print_colspec(plan)}{comma}")
    tail = [f"to {quote(cmd.target)}"]
    if cmd.sort_by is not None:
        tail.append(f"sort by {quote(cmd.sort_by)}")
    if cmd.cut is not None:
        tail.append(f"cut when {quote(cmd.cut.column)} is {quote(cmd.cut.marker)}")
    for index, clause in enumerate(tail):
        end = ";" if index + 1 == len(tail) else ""
        lines.append(f"  {clause}{end}")
    return "\n".join(lines) + "\n"


def pretty_print(spec: Spec) -> str:
    """Render a spec in canonical form; reparsing yields a structurally equal spec."""
    return "".join(_print_command(cmd) for cmd in spec.commands)
