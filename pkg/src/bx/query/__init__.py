"""Query subset: parsing, construction, canonical rendering, execution."""

from .ast import (
    And,
    Columns,
    Compare,
    Filter,
    In,
    Literal,
    Predicate,
    Projection,
    QueryAst,
    StructuredRequest,
    Transform,
)
from .construct import construct
from .executor import ResultSet, compile_predicate, execute, validate
from .parser import parse
from .render import render, render_predicate

__all__ = [
    "And",
    "Columns",
    "Compare",
    "Filter",
    "In",
    "Literal",
    "Predicate",
    "Projection",
    "QueryAst",
    "StructuredRequest",
    "Transform",
    "construct",
    "parse",
    "render",
    "render_predicate",
    "ResultSet",
    "compile_predicate",
    "execute",
    "validate",
]
