"""bx: a lightweight engine for exploring tabular data with transform queries.

The package provides an embedded typed table store, a small
`SELECT TRANSFORM ... USING` query language with pluggable transform
modules, time-series aggregation and prediction analytics, an n-gram
event scanner, an HTTP + JSON service with asynchronous query jobs, and
the `bx` command-line interface.
"""

from __future__ import annotations

from .engine import Engine, JobManager, QueryJob
from .model import Column, Page, Schema, Table, ValueKind
from .repository import ModuleDescriptor, ModuleRepository, ParamSpec, TransformModule
from .storage import Catalog

__version__ = "0.1.0"

__all__ = [
    "Catalog",
    "Column",
    "Engine",
    "JobManager",
    "ModuleDescriptor",
    "ModuleRepository",
    "Page",
    "ParamSpec",
    "QueryJob",
    "Schema",
    "Table",
    "TransformModule",
    "ValueKind",
    "__version__",
]
