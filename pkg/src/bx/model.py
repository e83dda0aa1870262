"""Core tabular data model: typed values, schemas, immutable tables, pages.

A cell holds one of: None (NULL), int (64-bit range), float (finite),
str (TEXT), datetime.date, or datetime.time (seconds resolution).
"""

from __future__ import annotations

import itertools
import math
import re
import threading
from dataclasses import dataclass
from datetime import date, time
from enum import Enum
from typing import Iterator, Optional, Sequence, Union

from .errors import InvalidArgumentError, TypeMismatchError, UnknownColumnError


class ValueKind(str, Enum):
    INT = "INT"
    FLOAT = "FLOAT"
    TEXT = "TEXT"
    DATE = "DATE"
    TIME = "TIME"


Value = Union[None, int, float, str, date, time]

INT64_MIN = -(2**63)
INT64_MAX = 2**63 - 1

# Identifiers name tables and columns.  Hyphens are legal interior
# characters (column names like `n-gram` occur in real corpora), but a
# name must start with a letter or underscore so the query lexer can
# tell identifiers from date literals.
_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_\-]*\Z")
_DATE_RE = re.compile(r"\d{4}-\d{2}-\d{2}\Z")
_TIME_RE = re.compile(r"\d{2}:\d{2}:\d{2}\Z")


def is_identifier(name: str) -> bool:
    return bool(_IDENT_RE.match(name))


def parse_date_text(text: str) -> date:
    """Strict `YYYY-MM-DD` parse; raises ValueError on anything else."""
    if not _DATE_RE.match(text):
        raise ValueError(f"not a YYYY-MM-DD date: {text!r}")
    return date.fromisoformat(text)


def parse_time_text(text: str) -> time:
    """Strict `HH:MM:SS` parse (no fractional seconds, no timezone)."""
    if not _TIME_RE.match(text):
        raise ValueError(f"not an HH:MM:SS time: {text!r}")
    hh, mm, ss = (int(part) for part in text.split(":"))
    if hh > 23 or mm > 59 or ss > 59:
        raise ValueError(f"time of day out of range: {text!r}")
    return time(hh, mm, ss)


def looks_like_date(text: str) -> bool:
    """True when the text is a valid calendar date in YYYY-MM-DD form."""
    try:
        parse_date_text(text)
    except ValueError:
        return False
    return True


def parse_cell(text: str, kind: ValueKind) -> Value:
    """Parse one CSV field into a typed cell; empty text means NULL.

    Raises ValueError with a human-readable reason on bad input; the NaN
    and infinity spellings are rejected so stored floats are always
    finite.
    """
    if text == "":
        return None
    if kind is ValueKind.TEXT:
        return text
    if kind is ValueKind.INT:
        value = int(text)
        if not INT64_MIN <= value <= INT64_MAX:
            raise ValueError(f"integer out of 64-bit range: {text}")
        return value
    if kind is ValueKind.FLOAT:
        value = float(text)
        if not math.isfinite(value):
            raise ValueError(f"non-finite float rejected: {text!r}")
        return value
    if kind is ValueKind.DATE:
        return parse_date_text(text)
    if kind is ValueKind.TIME:
        return parse_time_text(text)
    raise ValueError(f"unknown value kind: {kind}")


def format_cell(value: Value) -> str:
    """Inverse of parse_cell: NULL becomes the empty field."""
    if value is None:
        return ""
    if isinstance(value, bool):
        raise InvalidArgumentError("boolean cells are not supported")
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (date, time)):
        return value.isoformat()
    return str(value)


def json_value(value: Value):
    """A cell as a JSON-representable value: dates and times become
    ISO strings, everything else passes through."""
    if isinstance(value, (date, time)):
        return value.isoformat()
    return value


def kind_of(value: Value) -> Optional[ValueKind]:
    """The kind of a non-NULL cell value, or None for NULL."""
    if value is None:
        return None
    if isinstance(value, bool):
        return None
    if isinstance(value, int):
        return ValueKind.INT
    if isinstance(value, float):
        return ValueKind.FLOAT
    if isinstance(value, str):
        return ValueKind.TEXT
    if isinstance(value, date):
        return ValueKind.DATE
    if isinstance(value, time):
        return ValueKind.TIME
    return None


def matches_kind(value: Value, kind: ValueKind) -> bool:
    """NULL matches every column; otherwise kinds must agree exactly."""
    if value is None:
        return True
    return kind_of(value) is kind


@dataclass(frozen=True)
class Column:
    name: str
    kind: ValueKind


@dataclass(frozen=True)
class Schema:
    """Ordered column list; names are unique, valid identifiers."""

    columns: tuple[Column, ...]

    def __post_init__(self):
        if not self.columns:
            raise InvalidArgumentError("schema needs at least one column")
        seen = set()
        for col in self.columns:
            if not is_identifier(col.name):
                raise InvalidArgumentError(f"bad column name: {col.name!r}")
            if col.name in seen:
                raise InvalidArgumentError(f"duplicate column name: {col.name!r}")
            seen.add(col.name)

    @classmethod
    def of(cls, *pairs: tuple[str, ValueKind]) -> "Schema":
        return cls(tuple(Column(name, kind) for name, kind in pairs))

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(col.name for col in self.columns)

    def __len__(self) -> int:
        return len(self.columns)

    def __iter__(self):
        return iter(self.columns)

    def index_of(self, name: str) -> int:
        for i, col in enumerate(self.columns):
            if col.name == name:
                return i
        raise UnknownColumnError(f"unknown column: {name!r}")

    def kind_of(self, name: str) -> ValueKind:
        return self.columns[self.index_of(name)].kind


_table_versions = itertools.count(1)
_version_lock = threading.Lock()


def _next_version(name: str) -> str:
    with _version_lock:
        return f"{name}#{next(_table_versions)}"


class Table:
    """Immutable column-major table; every cell matches its declared kind."""

    __slots__ = ("name", "schema", "columns", "row_count", "version")

    def __init__(self, name: str, schema: Schema, columns: Sequence[Sequence[Value]]):
        if not is_identifier(name):
            raise InvalidArgumentError(f"bad table name: {name!r}")
        if len(columns) != len(schema):
            raise InvalidArgumentError(
                f"table {name!r}: {len(columns)} column arrays for "
                f"{len(schema)} schema columns"
            )
        lengths = {len(col) for col in columns}
        if len(lengths) > 1:
            raise InvalidArgumentError(f"table {name!r}: ragged column arrays")
        for col_values, col in zip(columns, schema):
            for value in col_values:
                if not matches_kind(value, col.kind):
                    raise TypeMismatchError(
                        f"table {name!r}, column {col.name!r}: value {value!r} "
                        f"is not {col.kind.value}"
                    )
        self.name = name
        self.schema = schema
        self.columns = tuple(tuple(col) for col in columns)
        self.row_count = len(self.columns[0]) if self.columns else 0
        self.version = _next_version(name)

    def row(self, index: int) -> tuple[Value, ...]:
        return tuple(col[index] for col in self.columns)

    def rows(self) -> Iterator[tuple[Value, ...]]:
        for i in range(self.row_count):
            yield self.row(i)

    @classmethod
    def from_rows(cls, name: str, schema: Schema, rows: Sequence[Sequence[Value]]) -> "Table":
        columns: list[list[Value]] = [[] for _ in schema]
        for row in rows:
            if len(row) != len(schema):
                raise InvalidArgumentError(
                    f"table {name!r}: row of width {len(row)}, expected {len(schema)}"
                )
            for store, value in zip(columns, row):
                store.append(value)
        return cls(name, schema, columns)


@dataclass
class Page:
    """One chunk of a paginated result; no cursor means no further rows."""

    rows: list[tuple[Value, ...]]
    next_cursor: Optional[str]
    schema: Schema
