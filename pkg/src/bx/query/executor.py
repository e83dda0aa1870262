"""Validation and execution of query ASTs against a catalog and module registry.

Execution streams the filtered table scan through the projection —
rows failing the predicate never reach a transform module — and fully
materializes the output as an immutable ResultSet so it can be paged
repeatedly with stable cursors.
"""

from __future__ import annotations

import uuid
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable, Iterator, Optional, Union

from ..errors import (
    EngineError,
    InvalidArgumentError,
    ModuleError,
    TypeMismatchError,
    UnknownColumnError,
)
from ..model import (
    Page,
    Schema,
    Value,
    ValueKind,
    kind_of,
    parse_date_text,
    parse_time_text,
)
from ..storage import (
    MATCH_ALL_FINGERPRINT,
    Catalog,
    CompiledPredicate,
    fingerprint_text,
    paginate_rows,
)
from .ast import Columns, Compare, In, Literal, Predicate, QueryAst, Transform, predicate_terms
from .render import render, render_predicate

if TYPE_CHECKING:
    from ..repository import ModuleDescriptor, ModuleRepository

_NUMERIC = (ValueKind.INT, ValueKind.FLOAT)


@dataclass(frozen=True)
class ResultSet:
    """Materialized query output: immutable rows plus a paging identity."""

    result_id: str
    schema: Schema
    rows: tuple[tuple[Value, ...], ...]
    query_text: str

    @property
    def row_count(self) -> int:
        return len(self.rows)

    def page(self, cursor: Optional[str] = None, limit: int = 100) -> Page:
        return paginate_rows(self.rows, self.schema, self.result_id, cursor, limit)


def _coerce_literal(column: str, col_kind: ValueKind, literal: Literal) -> Value:
    """Comparison value for a literal against a column, or TypeMismatchError.

    Numeric kinds are mutually comparable; a TEXT literal against a DATE
    or TIME column is parsed (quoted dates/times in query text arrive as
    TEXT); everything else must match the column kind exactly.
    """
    if literal.kind is col_kind:
        return literal.value
    if literal.kind in _NUMERIC and col_kind in _NUMERIC:
        return literal.value
    if literal.kind is ValueKind.TEXT and col_kind in (ValueKind.DATE, ValueKind.TIME):
        parser = parse_date_text if col_kind is ValueKind.DATE else parse_time_text
        try:
            return parser(literal.value)
        except ValueError as exc:
            raise TypeMismatchError(f"column {column!r}: {exc}") from None
    raise TypeMismatchError(
        f"column {column!r} has type {col_kind.value}, "
        f"cannot compare with {literal.kind.value} literal"
    )


def compile_predicate(predicate: Optional[Predicate], schema: Schema) -> CompiledPredicate:
    """Compile a predicate tree to a row test with a stable fingerprint.

    NULL cells fail every comparison.  The fingerprint is derived from
    the canonical predicate text, so equal predicates share cursors.
    """
    if predicate is None:
        return CompiledPredicate(MATCH_ALL_FINGERPRINT, lambda row: True)

    tests = []
    for term in predicate_terms(predicate):
        index = schema.index_of(term.column)
        col_kind = schema.kind_of(term.column)
        if isinstance(term, Compare):
            target = _coerce_literal(term.column, col_kind, term.literal)
            if term.op == "=":
                tests.append(lambda row, i=index, t=target: row[i] is not None and row[i] == t)
            elif term.op == ">=":
                tests.append(lambda row, i=index, t=target: row[i] is not None and row[i] >= t)
            else:
                tests.append(lambda row, i=index, t=target: row[i] is not None and row[i] <= t)
        elif isinstance(term, In):
            targets = tuple(
                _coerce_literal(term.column, col_kind, lit) for lit in term.literals
            )
            tests.append(
                lambda row, i=index, ts=targets: row[i] is not None and row[i] in ts
            )
        else:  # pragma: no cover - predicate_terms only yields Compare | In
            raise TypeError(f"unexpected predicate term: {term!r}")

    def matches(row: tuple[Value, ...]) -> bool:
        return all(test(row) for test in tests)

    return CompiledPredicate(fingerprint_text(render_predicate(predicate)), matches)


def _projection_indices(schema: Schema, names: Iterable[str]) -> tuple[int, ...]:
    return tuple(schema.index_of(name) for name in names)


def _sub_schema(schema: Schema, names: Iterable[str]) -> Schema:
    return Schema.of(*((name, schema.kind_of(name)) for name in names))


def _rename(schema: Schema, names: tuple[str, ...]) -> Schema:
    if len(names) != len(schema):
        raise InvalidArgumentError(
            f"AS clause names {len(names)} columns but the module emits {len(schema)}"
        )
    return Schema.of(*(
        (name, column.kind) for name, column in zip(names, schema)
    ))


def _plan_transform(
    projection: Transform, table_schema: Schema, repository: "ModuleRepository"
) -> tuple["ModuleDescriptor", Schema, Optional[Schema]]:
    """Resolve (descriptor, input schema, output schema or None if dynamic)."""
    descriptor = repository.lookup(projection.module_name)
    input_schema = _sub_schema(table_schema, projection.input_columns)
    if descriptor.input_arity != "any" and descriptor.input_arity != len(input_schema):
        raise InvalidArgumentError(
            f"module {descriptor.name!r} expects {descriptor.input_arity} input "
            f"column(s), got {len(input_schema)}"
        )
    known_keys = {spec.key for spec in descriptor.param_spec}
    for key, _ in projection.module_params:
        if key not in known_keys:
            raise InvalidArgumentError(
                f"module {descriptor.name!r} has no parameter {key!r}"
            )
    output_schema: Optional[Schema]
    if descriptor.output_schema == "dynamic":
        if projection.output_names is None:
            raise InvalidArgumentError(
                f"module {descriptor.name!r} has a dynamic output schema; "
                "name its outputs with an AS clause"
            )
        output_schema = None
    else:
        output_schema = descriptor.output_schema
        if projection.output_names is not None:
            output_schema = _rename(output_schema, projection.output_names)
    return descriptor, input_schema, output_schema


def validate(
    ast: QueryAst, catalog: Catalog, repository: "ModuleRepository"
) -> Optional[Schema]:
    """Check an AST against live metadata; returns the output schema when
    it is statically known (None for dynamic transform output)."""
    table = catalog.table(ast.source)
    compile_predicate(ast.predicate, table.schema)
    projection = ast.projection
    if isinstance(projection, Columns):
        if projection.star:
            return table.schema
        return _sub_schema(table.schema, projection.names)
    _, _, output_schema = _plan_transform(projection, table.schema, repository)
    return output_schema


def _infer_dynamic_schema(
    names: tuple[str, ...], rows: list[tuple[Value, ...]], module_name: str
) -> Schema:
    """Column kinds for a dynamic-output module, inferred from emitted rows.

    The first non-NULL value in each column fixes its kind; columns that
    never carry a value default to TEXT.
    """
    kinds: list[Optional[ValueKind]] = [None] * len(names)
    for row in rows:
        if len(row) != len(names):
            raise ModuleError(
                module_name,
                f"emitted a row of {len(row)} cells; AS clause names {len(names)}",
            )
        for i, value in enumerate(row):
            if kinds[i] is None and value is not None:
                kinds[i] = kind_of(value)
    return Schema.of(*(
        (name, kind if kind is not None else ValueKind.TEXT)
        for name, kind in zip(names, kinds)
    ))


def _check_output_rows(
    rows: list[tuple[Value, ...]], schema: Schema, module_name: str
) -> None:
    for row in rows:
        if len(row) != len(schema):
            raise ModuleError(
                module_name,
                f"emitted a row of {len(row)} cells; output schema has {len(schema)}",
            )


def execute(
    ast: QueryAst, catalog: Catalog, repository: "ModuleRepository"
) -> ResultSet:
    """Run a validated query to completion and materialize its result."""
    from ..repository import run_pipeline

    result_id = f"r-{uuid.uuid4().hex[:12]}"
    text = render(ast)
    with catalog.read_lease(ast.source) as table:
        compiled = compile_predicate(ast.predicate, table.schema)
        filtered: Iterator[tuple[Value, ...]] = (
            row for row in table.rows() if compiled.matches(row)
        )
        projection = ast.projection
        if isinstance(projection, Columns):
            if projection.star:
                schema = table.schema
                rows = list(filtered)
            else:
                indices = _projection_indices(table.schema, projection.names)
                schema = _sub_schema(table.schema, projection.names)
                rows = [tuple(row[i] for i in indices) for row in filtered]
            return ResultSet(result_id, schema, tuple(rows), text)

        descriptor, input_schema, output_schema = _plan_transform(
            projection, table.schema, repository
        )
        indices = _projection_indices(table.schema, projection.input_columns)
        module = repository.create(descriptor.name)
        try:
            module.open(projection.params_dict(), input_schema)
        except EngineError:
            raise  # already a typed diagnostic
        except Exception as exc:
            raise ModuleError(descriptor.name, str(exc)) from exc
        out_rows = run_pipeline(
            module,
            (tuple(row[i] for i in indices) for row in filtered),
            module_name=descriptor.name,
        )
        if output_schema is None:
            assert projection.output_names is not None
            schema = _infer_dynamic_schema(
                projection.output_names, out_rows, descriptor.name
            )
        else:
            schema = output_schema
            _check_output_rows(out_rows, schema, descriptor.name)
        return ResultSet(result_id, schema, tuple(out_rows), text)
