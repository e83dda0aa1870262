"""The assembled engine: catalog + module registry + async job manager.

`Engine` is the single entry point both the HTTP service and the CLI
build on, so every access path exercises the same parsing, validation,
and execution code.
"""

from __future__ import annotations

import csv
import os
import queue
import tempfile
import threading
import time
import uuid
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional, Union

from .builtin_modules import build_default_repository
from .errors import (
    CsvFormatError,
    EngineError,
    InvalidArgumentError,
    JobNotFoundError,
    JobNotReadyError,
    QueueFullError,
)
from .model import Page, Schema, ValueKind, is_identifier
from .query import QueryAst, ResultSet, StructuredRequest, construct, execute, parse, render, validate
from .storage import Catalog, convert_text_to_csv

QUEUED = "queued"
RUNNING = "running"
SUCCEEDED = "succeeded"
FAILED = "failed"

QueryPayload = Union[str, dict, QueryAst]


@dataclass
class QueryJob:
    """One submitted query and its lifecycle state.

    Status only ever moves queued → running → succeeded | failed; the
    result is present exactly when the status is `succeeded`.
    """

    id: str
    query_text: str
    status: str = QUEUED
    error: Optional[str] = None
    error_code: Optional[str] = None
    result: Optional[ResultSet] = None
    finished_at: Optional[float] = None


class JobManager:
    """Bounded worker pool running query jobs asynchronously.

    Submissions beyond the queue bound are rejected rather than blocked;
    finished jobs (and their result sets) expire after `result_ttl`
    seconds, enforced lazily on access.
    """

    def __init__(
        self,
        workers: Optional[int] = None,
        queue_size: int = 64,
        result_ttl: float = 3600.0,
    ):
        if workers is None:
            workers = os.cpu_count() or 4
        if workers < 1:
            raise InvalidArgumentError("worker count must be at least 1")
        self.result_ttl = result_ttl
        self._queue: queue.Queue = queue.Queue(maxsize=queue_size)
        self._lock = threading.Lock()
        self._jobs: dict[str, QueryJob] = {}
        self._workers = [
            threading.Thread(target=self._worker, daemon=True, name=f"bx-worker-{i}")
            for i in range(workers)
        ]
        for worker in self._workers:
            worker.start()

    def _worker(self) -> None:
        while True:
            item = self._queue.get()
            if item is None:
                return
            job, runner = item
            with self._lock:
                job.status = RUNNING
            try:
                result = runner()
            except EngineError as exc:
                with self._lock:
                    job.error = exc.message
                    job.error_code = exc.code
                    job.status = FAILED
                    job.finished_at = time.monotonic()
            except Exception as exc:  # noqa: BLE001 - anything a module might raise
                with self._lock:
                    job.error = str(exc) or type(exc).__name__
                    job.error_code = "engine_error"
                    job.status = FAILED
                    job.finished_at = time.monotonic()
            else:
                with self._lock:
                    job.result = result
                    job.status = SUCCEEDED
                    job.finished_at = time.monotonic()

    def _purge(self) -> None:
        now = time.monotonic()
        with self._lock:
            expired = [
                job_id
                for job_id, job in self._jobs.items()
                if job.finished_at is not None and now - job.finished_at > self.result_ttl
            ]
            for job_id in expired:
                del self._jobs[job_id]

    def submit(self, runner: Callable[[], ResultSet], query_text: str) -> QueryJob:
        self._purge()
        job = QueryJob(id=f"j-{uuid.uuid4().hex[:12]}", query_text=query_text)
        with self._lock:
            self._jobs[job.id] = job
        try:
            self._queue.put_nowait((job, runner))
        except queue.Full:
            with self._lock:
                del self._jobs[job.id]
            raise QueueFullError("job queue is full; retry later") from None
        return job

    def get(self, job_id: str) -> QueryJob:
        self._purge()
        with self._lock:
            try:
                return self._jobs[job_id]
            except KeyError:
                raise JobNotFoundError(f"unknown job: {job_id!r}") from None

    def view(self, job_id: str) -> dict:
        """A consistent snapshot of one job's externally visible state."""
        job = self.get(job_id)
        with self._lock:
            state = {
                "job_id": job.id,
                "query": job.query_text,
                "status": job.status,
            }
            if job.error is not None:
                state["error"] = job.error
                state["error_code"] = job.error_code
            if job.result is not None:
                state["row_count"] = job.result.row_count
        return state

    def result(self, job_id: str) -> ResultSet:
        job = self.get(job_id)
        with self._lock:
            status, error, result = job.status, job.error, job.result
        if status == FAILED:
            raise JobNotReadyError(f"job {job_id} failed: {error}")
        if result is None:
            raise JobNotReadyError(f"job {job_id} is still {status}")
        return result

    def shutdown(self) -> None:
        for _ in self._workers:
            self._queue.put(None)
        for worker in self._workers:
            worker.join(timeout=5.0)


def _infer_schema(path: Path, has_header: bool) -> Schema:
    """All-TEXT schema from a CSV's first row; header names when present,
    positional c1..cN otherwise."""
    with path.open("r", encoding="utf-8", newline="") as fh:
        try:
            first = next(csv.reader(fh))
        except StopIteration:
            raise CsvFormatError(f"{path}: file is empty, cannot infer a schema") from None
    if has_header:
        names = [name.strip() for name in first]
        for name in names:
            if not is_identifier(name):
                raise CsvFormatError(
                    f"{path}: header field {name!r} is not usable as a column name; "
                    "supply an explicit schema"
                )
    else:
        names = [f"c{i}" for i in range(1, len(first) + 1)]
    return Schema.of(*((name, ValueKind.TEXT) for name in names))


class Engine:
    """Catalog, module registry, and job manager behind one facade."""

    def __init__(
        self,
        data_dir: Optional[str | os.PathLike] = None,
        workers: Optional[int] = None,
        queue_size: int = 64,
        result_ttl: float = 3600.0,
    ):
        self.catalog = Catalog(data_dir)
        self.repository = build_default_repository()
        self.jobs = JobManager(workers=workers, queue_size=queue_size, result_ttl=result_ttl)

    # -- query entry points -------------------------------------------------

    def prepare(self, payload: QueryPayload) -> QueryAst:
        """Text is parsed; a structured-request mapping is constructed."""
        if isinstance(payload, QueryAst):
            return payload
        if isinstance(payload, str):
            return parse(payload)
        if isinstance(payload, dict):
            return construct(StructuredRequest.from_json(payload))
        raise InvalidArgumentError(
            f"query payload must be text or a request object, got {type(payload).__name__}"
        )

    def canonical_text(self, payload: QueryPayload) -> str:
        return render(self.prepare(payload))

    def submit(self, payload: QueryPayload) -> QueryJob:
        """Validate synchronously, then queue the execution."""
        ast = self.prepare(payload)
        validate(ast, self.catalog, self.repository)
        runner = lambda: execute(ast, self.catalog, self.repository)  # noqa: E731
        return self.jobs.submit(runner, render(ast))

    def run(self, payload: QueryPayload) -> ResultSet:
        """Validate and execute synchronously (the batch/CLI path)."""
        ast = self.prepare(payload)
        validate(ast, self.catalog, self.repository)
        return execute(ast, self.catalog, self.repository)

    def page(self, job_id: str, cursor: Optional[str] = None, limit: int = 100) -> Page:
        return self.jobs.result(job_id).page(cursor, limit)

    # -- table management ---------------------------------------------------

    def ingest_table(
        self,
        name: str,
        *,
        path: Optional[str | os.PathLike] = None,
        csv_text: Optional[str] = None,
        schema: Optional[Schema] = None,
        has_header: bool = False,
        delimiter: str = ",",
    ) -> int:
        """Load delimited text into a new table; returns rows loaded."""
        if (path is None) == (csv_text is None):
            raise InvalidArgumentError("provide exactly one of a file path or inline data")
        tmp_paths: list[Path] = []
        try:
            if csv_text is not None:
                handle = tempfile.NamedTemporaryFile(
                    "w", suffix=".txt", encoding="utf-8", newline="", delete=False
                )
                with handle:
                    handle.write(csv_text)
                source = Path(handle.name)
                tmp_paths.append(source)
            else:
                source = Path(path)
            if delimiter in ("tab", "\\t"):
                delimiter = "\t"
            if delimiter != ",":
                converted = Path(tempfile.mkstemp(suffix=".csv")[1])
                tmp_paths.append(converted)
                source = convert_text_to_csv(source, delimiter, converted)
            if schema is None:
                schema = _infer_schema(source, has_header)
            table = self.catalog.load_csv(source, name, schema, has_header)
            return table.row_count
        finally:
            for tmp in tmp_paths:
                tmp.unlink(missing_ok=True)

    def shutdown(self) -> None:
        self.jobs.shutdown()
