"""Syntax tree for the TRANSFORM query subset, plus the structured
request form submitted by clients that build queries from forms."""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import date
from typing import Optional, Union

from ..errors import InvalidArgumentError
from ..model import ValueKind, is_identifier, looks_like_date, parse_date_text

COMPARE_OPS = ("=", ">=", "<=")

# Characters that cannot appear in module parameter values because they
# would collide with the textual `name(key=value, ...)` encoding.
_PARAM_VALUE_FORBIDDEN = set("'(),\n\r")


@dataclass(frozen=True)
class Literal:
    """A typed literal: TEXT, INT, FLOAT, or DATE."""

    kind: ValueKind
    value: object

    @classmethod
    def of(cls, value) -> "Literal":
        """Build a literal from a plain Python value.

        Strings holding a valid YYYY-MM-DD date normalize to DATE, the
        same normalization the parser applies to quoted date literals.
        """
        if isinstance(value, bool):
            raise InvalidArgumentError("boolean literals are not supported")
        if isinstance(value, int):
            return cls(ValueKind.INT, value)
        if isinstance(value, float):
            return cls(ValueKind.FLOAT, value)
        if isinstance(value, date):
            return cls(ValueKind.DATE, value)
        if isinstance(value, str):
            if looks_like_date(value):
                return cls(ValueKind.DATE, parse_date_text(value))
            return cls(ValueKind.TEXT, value)
        raise InvalidArgumentError(f"unsupported literal value: {value!r}")


@dataclass(frozen=True)
class Compare:
    column: str
    op: str  # one of COMPARE_OPS
    literal: Literal


@dataclass(frozen=True)
class In:
    column: str
    literals: tuple[Literal, ...]


@dataclass(frozen=True)
class And:
    children: tuple[Union[Compare, In], ...]


Predicate = Union[Compare, In, And]


@dataclass(frozen=True)
class Columns:
    """Plain projection: named columns, or `*` for all."""

    names: tuple[str, ...] = ()
    star: bool = False


@dataclass(frozen=True)
class Transform:
    """TRANSFORM(...) USING 'module(params)' [AS names] projection."""

    input_columns: tuple[str, ...]
    module_name: str
    module_params: tuple[tuple[str, str], ...] = ()
    output_names: Optional[tuple[str, ...]] = None

    def params_dict(self) -> dict[str, str]:
        return dict(self.module_params)


Projection = Union[Columns, Transform]


@dataclass(frozen=True)
class QueryAst:
    projection: Projection
    source: str
    predicate: Optional[Predicate] = None


def _check_identifier(name: str, what: str) -> None:
    if not is_identifier(name):
        raise InvalidArgumentError(f"bad {what}: {name!r}")


def _check_predicate(pred: Predicate, allow_and: bool = True) -> None:
    if isinstance(pred, Compare):
        _check_identifier(pred.column, "column name")
        if pred.op not in COMPARE_OPS:
            raise InvalidArgumentError(f"bad comparison operator: {pred.op!r}")
    elif isinstance(pred, In):
        _check_identifier(pred.column, "column name")
        if not pred.literals:
            raise InvalidArgumentError("IN list must not be empty")
    elif isinstance(pred, And):
        if not allow_and:
            raise InvalidArgumentError("AND cannot nest")
        if len(pred.children) < 2:
            raise InvalidArgumentError("AND needs at least two terms")
        for child in pred.children:
            _check_predicate(child, allow_and=False)
    else:
        raise InvalidArgumentError(f"bad predicate node: {pred!r}")


def check_ast(ast: QueryAst) -> QueryAst:
    """Validate structural invariants; returns the AST for chaining."""
    _check_identifier(ast.source, "table name")
    proj = ast.projection
    if isinstance(proj, Columns):
        if proj.star and proj.names:
            raise InvalidArgumentError("star projection cannot also name columns")
        if not proj.star and not proj.names:
            raise InvalidArgumentError("projection must name at least one column")
        for name in proj.names:
            _check_identifier(name, "column name")
    elif isinstance(proj, Transform):
        if not proj.input_columns:
            raise InvalidArgumentError("TRANSFORM needs at least one input column")
        for name in proj.input_columns:
            _check_identifier(name, "column name")
        _check_identifier(proj.module_name, "module name")
        for key, value in proj.module_params:
            _check_identifier(key, "module parameter key")
            if any(ch in _PARAM_VALUE_FORBIDDEN for ch in value):
                raise InvalidArgumentError(
                    f"module parameter {key!r} has characters the textual "
                    f"encoding cannot carry: {value!r}"
                )
        if proj.output_names is not None:
            if not proj.output_names:
                raise InvalidArgumentError("AS list must not be empty")
            if len(set(proj.output_names)) != len(proj.output_names):
                raise InvalidArgumentError("AS names must be unique")
            for name in proj.output_names:
                _check_identifier(name, "output column name")
    else:
        raise InvalidArgumentError(f"bad projection node: {proj!r}")
    if ast.predicate is not None:
        _check_predicate(ast.predicate)
    return ast


def predicate_terms(pred: Optional[Predicate]) -> tuple[Union[Compare, In], ...]:
    """Flatten an optional predicate into its conjunction terms."""
    if pred is None:
        return ()
    if isinstance(pred, And):
        return pred.children
    return (pred,)


FILTER_OPS = ("=", ">=", "<=", "in")


@dataclass(frozen=True)
class Filter:
    """One structured-request filter; `value` is a list for the `in` op."""

    column: str
    op: str
    value: object


@dataclass
class StructuredRequest:
    """Form-shaped query submission: table, columns, optional module, filters."""

    table: str
    columns: list[str] = field(default_factory=list)
    module: Optional[str] = None
    module_params: dict[str, str] = field(default_factory=dict)
    filters: list[Filter] = field(default_factory=list)

    @classmethod
    def from_json(cls, payload: dict) -> "StructuredRequest":
        if not isinstance(payload, dict):
            raise InvalidArgumentError("request must be a JSON object")
        table = payload.get("table")
        if not isinstance(table, str) or not table:
            raise InvalidArgumentError("request needs a table name")
        columns = payload.get("columns")
        if not isinstance(columns, list) or not all(isinstance(c, str) for c in columns):
            raise InvalidArgumentError("request needs a list of column names")
        module = payload.get("module")
        if module is not None and not isinstance(module, str):
            raise InvalidArgumentError("module must be a string")
        params = payload.get("params") or payload.get("module_params") or {}
        if not isinstance(params, dict):
            raise InvalidArgumentError("params must be an object")
        filters = []
        for raw in payload.get("filters") or []:
            if not isinstance(raw, dict):
                raise InvalidArgumentError("each filter must be an object")
            column = raw.get("column")
            op = raw.get("op")
            value = raw.get("values") if "values" in raw else raw.get("value")
            if not isinstance(column, str) or op not in FILTER_OPS:
                raise InvalidArgumentError(f"bad filter: {raw!r}")
            filters.append(Filter(column, op, value))
        return cls(
            table=table,
            columns=list(columns),
            module=module,
            module_params={str(k): str(v) for k, v in params.items()},
            filters=filters,
        )
