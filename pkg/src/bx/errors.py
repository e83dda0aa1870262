"""Exception hierarchy with stable, machine-readable error codes.

Every failure surfaced over the HTTP API or the CLI carries a `code`
attribute; the code is part of the wire contract and must not change
between releases.
"""

from __future__ import annotations


class EngineError(Exception):
    """Base class for all engine failures."""

    code = "engine_error"

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


class ParseError(EngineError):
    """Query text rejected by the grammar.

    `offset` is the byte offset of the offending input; `expected` is the
    set of token descriptions that would have been accepted there.
    """

    code = "parse_error"

    def __init__(self, message: str, offset: int, expected: tuple[str, ...] = ()):
        super().__init__(message)
        self.offset = offset
        self.expected = frozenset(expected)


class UnknownTableError(EngineError):
    code = "unknown_table"


class DuplicateTableError(EngineError):
    code = "duplicate_table"


class TableInUseError(EngineError):
    code = "table_in_use"


class UnknownColumnError(EngineError):
    code = "unknown_column"


class UnknownModuleError(EngineError):
    code = "unknown_module"


class DuplicateModuleError(EngineError):
    code = "duplicate_module"


class TypeMismatchError(EngineError):
    code = "type_mismatch"


class CsvFormatError(EngineError):
    """Structural CSV/text problems: field counts, bad headers."""

    code = "csv_format"


class InvalidArgumentError(EngineError):
    code = "invalid_argument"


class StaleCursorError(EngineError):
    code = "stale_cursor"


class JobNotFoundError(EngineError):
    code = "job_not_found"


class JobNotReadyError(EngineError):
    code = "job_not_ready"


class QueueFullError(EngineError):
    code = "queue_full"


class MissingHistoryError(EngineError):
    """A prediction needs history dates that the input does not cover."""

    code = "missing_history"

    def __init__(self, missing):
        dates = ", ".join(d.isoformat() for d in missing)
        super().__init__(f"history is missing required dates: {dates}")
        self.missing = tuple(missing)


class ModuleError(EngineError):
    """Failure raised by (or on behalf of) a transform module during a run."""

    code = "module_error"

    def __init__(self, module_name: str, message: str, row_index: int | None = None):
        where = f" (row {row_index})" if row_index is not None else ""
        super().__init__(f"module '{module_name}'{where}: {message}")
        self.module_name = module_name
        self.row_index = row_index
