"""Render query ASTs back to canonical text.

Canonical form: uppercase keywords, single spaces between tokens,
`, `-separated lists, date literals quoted, no trailing semicolon.
Rendering then re-parsing yields an equal AST.
"""

from __future__ import annotations

from typing import Optional

from ..model import ValueKind
from .ast import (
    And,
    Columns,
    Compare,
    In,
    Literal,
    Predicate,
    QueryAst,
    Transform,
)


def _escape_text(value: str) -> str:
    return value.replace("'", "''")


def render_literal(literal: Literal) -> str:
    if literal.kind is ValueKind.TEXT:
        return f"'{_escape_text(literal.value)}'"
    if literal.kind is ValueKind.DATE:
        return f"'{literal.value.isoformat()}'"
    if literal.kind is ValueKind.INT:
        return str(literal.value)
    if literal.kind is ValueKind.FLOAT:
        return repr(literal.value)
    raise ValueError(f"cannot render literal of kind {literal.kind}")


def _render_term(term) -> str:
    if isinstance(term, Compare):
        return f"{term.column} {term.op} {render_literal(term.literal)}"
    if isinstance(term, In):
        inner = ", ".join(render_literal(lit) for lit in term.literals)
        return f"{term.column} IN ({inner})"
    raise TypeError(f"not a predicate term: {term!r}")


def render_predicate(pred: Optional[Predicate]) -> str:
    """Render a predicate subtree (no leading WHERE)."""
    if pred is None:
        return ""
    if isinstance(pred, And):
        return " AND ".join(_render_term(term) for term in pred.children)
    return _render_term(pred)


def _render_modref(transform: Transform) -> str:
    if not transform.module_params:
        return transform.module_name
    inner = ", ".join(f"{key}={value}" for key, value in transform.module_params)
    return f"{transform.module_name}({inner})"


def _render_projection(projection) -> str:
    if isinstance(projection, Transform):
        inputs = ", ".join(projection.input_columns)
        text = f"TRANSFORM ({inputs}) USING '{_render_modref(projection)}'"
        if projection.output_names is not None:
            text += " AS " + ", ".join(projection.output_names)
        return text
    if isinstance(projection, Columns):
        if projection.star:
            return "*"
        return ", ".join(projection.names)
    raise TypeError(f"not a projection: {projection!r}")


def render(ast: QueryAst) -> str:
    """Render an AST to canonical query text."""
    parts = [f"SELECT {_render_projection(ast.projection)} FROM {ast.source}"]
    if ast.predicate is not None:
        parts.append(f"WHERE {render_predicate(ast.predicate)}")
    return " ".join(parts)
