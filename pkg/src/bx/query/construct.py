"""Build query ASTs from form-shaped structured requests.

The structured request mirrors what an interactive client collects —
table name, column names, an optional transform module with parameters,
and simple column filters — and is assembled into the same AST the
parser produces, so both entry points share validation and execution.
"""

from __future__ import annotations

from ..errors import InvalidArgumentError
from .ast import (
    And,
    Columns,
    Compare,
    Filter,
    In,
    Literal,
    Predicate,
    QueryAst,
    StructuredRequest,
    Transform,
    check_ast,
)


def _filter_term(filt: Filter):
    if filt.op == "in":
        values = filt.value
        if not isinstance(values, (list, tuple)) or not values:
            raise InvalidArgumentError(
                f"filter on {filt.column!r}: 'in' needs a nonempty list of values"
            )
        return In(column=filt.column, literals=tuple(Literal.of(v) for v in values))
    if filt.op in ("=", ">=", "<="):
        if isinstance(filt.value, (list, tuple)):
            raise InvalidArgumentError(
                f"filter on {filt.column!r}: {filt.op!r} takes a single value"
            )
        return Compare(column=filt.column, op=filt.op, literal=Literal.of(filt.value))
    raise InvalidArgumentError(
        f"filter on {filt.column!r}: unknown operator {filt.op!r}"
    )


def construct(request: StructuredRequest) -> QueryAst:
    """Assemble a validated AST from a structured request."""
    if not request.columns:
        raise InvalidArgumentError("request needs at least one column")
    if request.module is not None:
        projection = Transform(
            input_columns=tuple(request.columns),
            module_name=request.module,
            module_params=tuple(request.module_params.items()),
        )
    elif request.columns == ["*"]:
        projection = Columns(star=True)
    else:
        projection = Columns(names=tuple(request.columns))

    terms = [_filter_term(f) for f in request.filters]
    predicate: Predicate | None
    if not terms:
        predicate = None
    elif len(terms) == 1:
        predicate = terms[0]
    else:
        predicate = And(children=tuple(terms))

    return check_ast(QueryAst(projection=projection, source=request.table, predicate=predicate))
