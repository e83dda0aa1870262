"""Registry of named transform modules and the streaming row pipeline.

A transform module is the unit of pluggable analytics: queries embed one
by name (`USING 'module'`), execution instantiates it, streams the
projected input rows through it, and collects whatever rows it emits.

The lifecycle contract:

    module.open(params, input_schema)   # once, before any rows
    module.push(row) -> rows            # once per input row, in order
    module.close() -> rows              # once, after the last row

Modules must be deterministic given (params, input sequence) and are
single-use: the repository hands out a fresh instance per execution.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Callable, Iterable, Union

from .errors import DuplicateModuleError, EngineError, ModuleError, UnknownModuleError
from .model import Schema, Value, is_identifier

Row = tuple[Value, ...]


@dataclass(frozen=True)
class ParamSpec:
    """One declared module parameter."""

    key: str
    required: bool = False
    description: str = ""


@dataclass(frozen=True)
class ModuleDescriptor:
    """What the registry knows about a module without instantiating it.

    `input_arity` is a fixed column count or the string "any";
    `output_schema` is a concrete Schema, or the string "dynamic" when
    the output shape is only fixed at execution (by the AS clause).
    """

    name: str
    input_arity: Union[int, str]
    param_spec: tuple[ParamSpec, ...] = ()
    output_schema: Union[Schema, str] = "dynamic"
    description: str = ""

    def __post_init__(self):
        if not is_identifier(self.name):
            raise ValueError(f"module name must be an identifier: {self.name!r}")
        if isinstance(self.input_arity, str) and self.input_arity != "any":
            raise ValueError(f"input_arity must be a count or 'any': {self.input_arity!r}")
        if isinstance(self.output_schema, str) and self.output_schema != "dynamic":
            raise ValueError("output_schema must be a Schema or 'dynamic'")
        seen_optional = False
        for spec in self.param_spec:
            if spec.required and seen_optional:
                raise ValueError("required parameters must precede optional ones")
            if not spec.required:
                seen_optional = True

    @property
    def param_keys(self) -> tuple[str, ...]:
        return tuple(spec.key for spec in self.param_spec)


class TransformModule:
    """Base class for transform modules; subclasses override the hooks."""

    def open(self, params: dict[str, str], input_schema: Schema) -> None:
        del params, input_schema

    def push(self, row: Row) -> list[Row]:
        del row
        return []

    def close(self) -> list[Row]:
        return []


ModuleFactory = Callable[[], TransformModule]


@dataclass
class _Registration:
    descriptor: ModuleDescriptor
    factory: ModuleFactory


class ModuleRepository:
    """Thread-safe, case-sensitive registry of transform modules."""

    def __init__(self):
        self._lock = threading.Lock()
        self._modules: dict[str, _Registration] = {}

    def register(self, descriptor: ModuleDescriptor, factory: ModuleFactory) -> None:
        with self._lock:
            if descriptor.name in self._modules:
                raise DuplicateModuleError(
                    f"module already registered: {descriptor.name!r}"
                )
            self._modules[descriptor.name] = _Registration(descriptor, factory)

    def register_alias(self, alias: str, target: str) -> None:
        """Expose an existing module under a second name."""
        registration = self._registration(target)
        descriptor = ModuleDescriptor(
            name=alias,
            input_arity=registration.descriptor.input_arity,
            param_spec=registration.descriptor.param_spec,
            output_schema=registration.descriptor.output_schema,
            description=registration.descriptor.description,
        )
        self.register(descriptor, registration.factory)

    def _registration(self, name: str) -> _Registration:
        with self._lock:
            try:
                return self._modules[name]
            except KeyError:
                raise UnknownModuleError(f"unknown module: {name!r}") from None

    def lookup(self, name: str) -> ModuleDescriptor:
        return self._registration(name).descriptor

    def create(self, name: str) -> TransformModule:
        return self._registration(name).factory()

    def descriptors(self) -> list[ModuleDescriptor]:
        with self._lock:
            registrations = sorted(self._modules.items())
        return [reg.descriptor for _, reg in registrations]

    def list_modules(self) -> str:
        """One line per module: name, input arity, parameter keys (tab-separated)."""
        lines = []
        for descriptor in self.descriptors():
            keys = ",".join(descriptor.param_keys)
            lines.append(f"{descriptor.name}\t{descriptor.input_arity}\t{keys}")
        return "\n".join(lines)


def run_pipeline(
    module: TransformModule,
    rows: Iterable[Row],
    module_name: str = "module",
) -> list[Row]:
    """Stream rows through an opened module; returns all emitted rows.

    A module-raised exception aborts the pipeline and is surfaced with
    the module name and the offending input row index.
    """
    out: list[Row] = []
    index = -1
    try:
        for index, row in enumerate(rows):
            out.extend(tuple(r) for r in module.push(row))
    except EngineError:
        raise  # already a typed diagnostic (e.g. missing history)
    except Exception as exc:
        raise ModuleError(module_name, str(exc), row_index=index) from exc
    try:
        out.extend(tuple(r) for r in module.close())
    except EngineError:
        raise
    except Exception as exc:
        raise ModuleError(module_name, str(exc)) from exc
    return out
