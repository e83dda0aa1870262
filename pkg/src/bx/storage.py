"""Embedded table store: text-to-CSV conversion, CSV loading, catalog,
and cursor-paginated scans.

Tables are immutable once loaded, so concurrent readers need no locks;
catalog mutations (load, drop) are serialized and a load only becomes
visible when it is complete.  With a data directory configured, every
loaded table is snapshotted as `<dir>/<table>/data.csv` plus a
`schema.tsv` sidecar and restored on startup.
"""

from __future__ import annotations

import base64
import binascii
import contextlib
import csv
import hashlib
import json
import os
import shutil
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable, Optional, Sequence
import threading

from .errors import (
    CsvFormatError,
    DuplicateTableError,
    InvalidArgumentError,
    StaleCursorError,
    TableInUseError,
    TypeMismatchError,
    UnknownTableError,
)
from .model import Page, Schema, Column, Table, ValueKind, Value, format_cell, parse_cell

MATCH_ALL_FINGERPRINT = "*"


@dataclass(frozen=True)
class CompiledPredicate:
    """A row filter plus a stable fingerprint for cursor validation.

    The query layer compiles its predicate ASTs into this form; storage
    itself only needs a callable and something to fingerprint cursors
    against.
    """

    fingerprint: str
    matches: Callable[[tuple[Value, ...]], bool]


def fingerprint_text(text: str) -> str:
    return hashlib.sha1(text.encode("utf-8")).hexdigest()[:12]


def encode_cursor(version: str, fingerprint: str, index: int) -> str:
    payload = json.dumps({"v": version, "p": fingerprint, "i": index}, separators=(",", ":"))
    return base64.urlsafe_b64encode(payload.encode("utf-8")).decode("ascii").rstrip("=")


def decode_cursor(token: str, version: str, fingerprint: str) -> int:
    """Validate a cursor against the scan it claims to continue."""
    try:
        padded = token + "=" * (-len(token) % 4)
        payload = json.loads(base64.urlsafe_b64decode(padded.encode("ascii")))
        cursor_version = payload["v"]
        cursor_fp = payload["p"]
        index = payload["i"]
    except (ValueError, KeyError, TypeError, binascii.Error) as exc:
        raise StaleCursorError(f"malformed cursor: {exc}") from None
    if cursor_version != version:
        raise StaleCursorError("cursor refers to a different table version or result")
    if cursor_fp != fingerprint:
        raise StaleCursorError("cursor was issued for a different predicate")
    if not isinstance(index, int) or index < 0:
        raise StaleCursorError("cursor index out of range")
    return index


def paginate_rows(
    rows: Sequence[tuple[Value, ...]],
    schema: Schema,
    version: str,
    cursor: Optional[str],
    page_size: int,
) -> Page:
    """Slice a materialized row sequence into a stable page."""
    if page_size <= 0:
        raise InvalidArgumentError("page size must be at least 1")
    start = 0
    if cursor is not None:
        start = decode_cursor(cursor, version, MATCH_ALL_FINGERPRINT)
        if start > len(rows):
            raise StaleCursorError("cursor index out of range")
    end = min(start + page_size, len(rows))
    next_cursor = None
    if end < len(rows):
        next_cursor = encode_cursor(version, MATCH_ALL_FINGERPRINT, end)
    return Page(rows=list(rows[start:end]), next_cursor=next_cursor, schema=schema)


def convert_text_to_csv(
    input_path: str | os.PathLike,
    delimiter: str,
    output_path: str | os.PathLike | None = None,
) -> Path:
    """Rewrite a delimiter-separated text file as RFC-4180 CSV.

    Every line must have the same field count; a mismatch is reported
    with its 1-based line number.  The default output path swaps the
    extension for `.csv`.
    """
    if len(delimiter) != 1 or delimiter in {'"', "\n", "\r"}:
        raise InvalidArgumentError("delimiter must be a single character, not a quote or newline")
    src = Path(input_path)
    out = Path(output_path) if output_path is not None else src.with_suffix(".csv")
    expected_fields: Optional[int] = None
    with src.open("r", encoding="utf-8", newline="") as fin, out.open(
        "w", encoding="utf-8", newline=""
    ) as fout:
        writer = csv.writer(fout, lineterminator="\n")
        for line_no, line in enumerate(fin.read().splitlines(), start=1):
            fields = line.split(delimiter)
            if expected_fields is None:
                expected_fields = len(fields)
            elif len(fields) != expected_fields:
                raise CsvFormatError(
                    f"{src}: line {line_no} has {len(fields)} fields, expected {expected_fields}"
                )
            writer.writerow(fields)
    return out


SCHEMA_SIDECAR = "schema.tsv"
DATA_FILE = "data.csv"


def read_schema_file(path: str | os.PathLike) -> Schema:
    """Read a `name<TAB>TYPE` sidecar into a Schema."""
    columns = []
    with Path(path).open("r", encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh.read().splitlines(), start=1):
            if not raw.strip():
                continue
            parts = raw.split("\t")
            if len(parts) != 2:
                raise CsvFormatError(f"{path}: line {line_no}: expected name<TAB>TYPE")
            name, type_name = parts
            try:
                kind = ValueKind(type_name.strip())
            except ValueError:
                raise CsvFormatError(
                    f"{path}: line {line_no}: unknown type {type_name.strip()!r}"
                ) from None
            columns.append(Column(name.strip(), kind))
    return Schema(tuple(columns))


def write_schema_file(path: str | os.PathLike, schema: Schema) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        for col in schema:
            fh.write(f"{col.name}\t{col.kind.value}\n")


def _parse_csv_rows(
    path: Path, table_name: str, schema: Schema, has_header: bool
) -> list[list[Value]]:
    columns: list[list[Value]] = [[] for _ in schema]
    with path.open("r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        if has_header:
            try:
                header = next(reader)
            except StopIteration:
                raise CsvFormatError(f"{path}: expected a header row, file is empty") from None
            if [name.strip() for name in header] != list(schema.names):
                raise CsvFormatError(
                    f"{path}: header {header!r} does not match declared schema "
                    f"{list(schema.names)!r}"
                )
        for record in reader:
            if not record:
                continue
            line_no = reader.line_num
            if len(record) != len(schema):
                raise CsvFormatError(
                    f"{path}: line {line_no} has {len(record)} fields, "
                    f"expected {len(schema)}"
                )
            for store, field, col in zip(columns, record, schema):
                try:
                    store.append(parse_cell(field, col.kind))
                except ValueError as exc:
                    raise TypeMismatchError(
                        f"table {table_name!r}: line {line_no}, column {col.name!r}: {exc}"
                    ) from None
    return columns


class Catalog:
    """Name -> table registry with optional on-disk snapshots.

    Reads are lock-free (tables are immutable); loads and drops take the
    catalog lock.  `read_lease` pins a table for the duration of a query
    so a concurrent drop fails instead of pulling data out from under a
    running job.
    """

    def __init__(self, data_dir: str | os.PathLike | None = None):
        self._tables: dict[str, Table] = {}
        self._leases: dict[str, int] = {}
        self._lock = threading.Lock()
        self.data_dir = Path(data_dir) if data_dir is not None else None
        if self.data_dir is not None:
            self.data_dir.mkdir(parents=True, exist_ok=True)
            self._restore_snapshots()

    def _restore_snapshots(self) -> None:
        assert self.data_dir is not None
        for entry in sorted(self.data_dir.iterdir()):
            sidecar = entry / SCHEMA_SIDECAR
            data = entry / DATA_FILE
            if not (entry.is_dir() and sidecar.exists() and data.exists()):
                continue
            schema = read_schema_file(sidecar)
            columns = _parse_csv_rows(data, entry.name, schema, has_header=False)
            table = Table(entry.name, schema, columns)
            self._tables[table.name] = table

    def _snapshot(self, table: Table) -> None:
        assert self.data_dir is not None
        target = self.data_dir / table.name
        target.mkdir(parents=True, exist_ok=True)
        write_schema_file(target / SCHEMA_SIDECAR, table.schema)
        with (target / DATA_FILE).open("w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            for row in table.rows():
                writer.writerow([format_cell(v) for v in row])

    def has(self, name: str) -> bool:
        with self._lock:
            return name in self._tables

    def table(self, name: str) -> Table:
        with self._lock:
            try:
                return self._tables[name]
            except KeyError:
                raise UnknownTableError(f"unknown table: {name!r}") from None

    def register(self, table: Table) -> Table:
        """Make a fully built table visible; snapshots it if persistent."""
        with self._lock:
            if table.name in self._tables:
                raise DuplicateTableError(f"table already exists: {table.name!r}")
            if self.data_dir is not None:
                self._snapshot(table)
            self._tables[table.name] = table
        return table

    def create_table(
        self, name: str, schema: Schema, rows: Sequence[Sequence[Value]]
    ) -> Table:
        return self.register(Table.from_rows(name, schema, rows))

    def load_csv(
        self,
        path: str | os.PathLike,
        table_name: str,
        schema: Schema,
        has_header: bool = False,
    ) -> Table:
        """Parse a CSV file into a typed table and register it."""
        if self.has(table_name):
            raise DuplicateTableError(f"table already exists: {table_name!r}")
        columns = _parse_csv_rows(Path(path), table_name, schema, has_header)
        return self.register(Table(table_name, schema, columns))

    def list_tables(self) -> list[tuple[str, int, Schema]]:
        with self._lock:
            tables = sorted(self._tables.values(), key=lambda t: t.name)
        return [(t.name, t.row_count, t.schema) for t in tables]

    def drop_table(self, name: str) -> None:
        with self._lock:
            if name not in self._tables:
                raise UnknownTableError(f"unknown table: {name!r}")
            if self._leases.get(name, 0) > 0:
                raise TableInUseError(f"table {name!r} is in use by a running query")
            del self._tables[name]
            if self.data_dir is not None:
                shutil.rmtree(self.data_dir / name, ignore_errors=True)

    @contextlib.contextmanager
    def read_lease(self, name: str):
        """Pin a table while a query reads it; drop_table refuses pinned tables."""
        with self._lock:
            if name not in self._tables:
                raise UnknownTableError(f"unknown table: {name!r}")
            self._leases[name] = self._leases.get(name, 0) + 1
            table = self._tables[name]
        try:
            yield table
        finally:
            with self._lock:
                self._leases[name] -= 1
                if self._leases[name] <= 0:
                    self._leases.pop(name, None)

    def scan_page(
        self,
        name: str,
        predicate: Optional[CompiledPredicate] = None,
        cursor: Optional[str] = None,
        page_size: int = 100,
    ) -> Page:
        """One page of the (optionally filtered) table scan, in table order.

        Successive pages partition the filtered row set: the cursor
        records the next base-table row index to resume from, and the
        scan looks ahead so the cursor is absent exactly when no further
        rows match.
        """
        if page_size <= 0:
            raise InvalidArgumentError("page size must be at least 1")
        with self.read_lease(name) as table:
            fingerprint = predicate.fingerprint if predicate else MATCH_ALL_FINGERPRINT
            start = 0
            if cursor is not None:
                start = decode_cursor(cursor, table.version, fingerprint)
                if start > table.row_count:
                    raise StaleCursorError("cursor index out of range")
            matches = predicate.matches if predicate else (lambda row: True)
            rows: list[tuple[Value, ...]] = []
            next_cursor = None
            index = start
            while index < table.row_count:
                row = table.row(index)
                index += 1
                if not matches(row):
                    continue
                if len(rows) < page_size:
                    rows.append(row)
                else:
                    # Lookahead found one more match: resume at its index.
                    next_cursor = encode_cursor(table.version, fingerprint, index - 1)
                    break
            return Page(rows=rows, next_cursor=next_cursor, schema=table.schema)
