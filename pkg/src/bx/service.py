"""HTTP + JSON facade over the engine.

Endpoints (all JSON, UTF-8):

    POST   /api/tables                      load a table (inline CSV or server path)
    GET    /api/tables                      catalog summary
    GET    /api/tables/{name}/schema        column names and types
    DELETE /api/tables/{name}               drop a table
    GET    /api/modules                     transform-module descriptors
    POST   /api/queries                     submit {text} or {request}; 202 {job_id, query}
    GET    /api/queries/{id}                job status
    GET    /api/queries/{id}/rows           one result page (?cursor=&limit=)
    GET    /api/queries/{id}/chart          chart-shaped result (?kind=&x=&series=)

Every failure body is {"error": {"code", "message", ...}} with a stable
machine-readable code.  This REST surface is a reconstruction: the
original system never documented its browser-to-server API.
"""

from __future__ import annotations

import os
from pathlib import Path
from typing import Optional

from fastapi import Body, FastAPI, Request
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from .engine import Engine
from .errors import (
    EngineError,
    InvalidArgumentError,
    TypeMismatchError,
)
from .model import Page, Schema, Value, ValueKind, json_value
from .query import ResultSet

CHART_KINDS = ("line", "bar", "grouped_bar")

_STATUS_BY_CODE = {
    "parse_error": 400,
    "unknown_column": 400,
    "unknown_module": 400,
    "type_mismatch": 400,
    "invalid_argument": 400,
    "csv_format": 400,
    "missing_history": 400,
    "module_error": 400,
    "stale_cursor": 400,
    "unknown_table": 404,
    "job_not_found": 404,
    "duplicate_table": 409,
    "duplicate_module": 409,
    "table_in_use": 409,
    "job_not_ready": 409,
    "queue_full": 429,
}


def value_to_json(value: Value):
    return json_value(value)


def schema_to_json(schema: Schema) -> list[dict]:
    return [{"name": column.name, "type": column.kind.value} for column in schema]


def schema_from_json(items) -> Schema:
    if not isinstance(items, list) or not items:
        raise InvalidArgumentError("schema must be a nonempty list of {name, type}")
    pairs = []
    for item in items:
        if not isinstance(item, dict) or "name" not in item or "type" not in item:
            raise InvalidArgumentError("each schema entry needs 'name' and 'type'")
        type_name = str(item["type"]).strip().upper()
        try:
            kind = ValueKind(type_name)
        except ValueError:
            valid = ", ".join(k.value for k in ValueKind)
            raise InvalidArgumentError(
                f"unknown column type {item['type']!r} (expected one of: {valid})"
            ) from None
        pairs.append((str(item["name"]), kind))
    return Schema.of(*pairs)


def page_to_json(page: Page) -> dict:
    body = {
        "schema": schema_to_json(page.schema),
        "rows": [[value_to_json(cell) for cell in row] for row in page.rows],
    }
    if page.next_cursor is not None:
        body["next_cursor"] = page.next_cursor
    return body


def chart_data(
    result: ResultSet, kind: str, x_column: str, series_columns: list[str]
) -> dict:
    """Shape a result for plotting: one x list plus aligned numeric series.

    NULL cells in a series stay as explicit nulls (chart gaps).
    """
    if kind not in CHART_KINDS:
        raise InvalidArgumentError(
            f"unknown chart kind {kind!r} (expected one of: {', '.join(CHART_KINDS)})"
        )
    if not series_columns:
        raise InvalidArgumentError("at least one series column is required")
    x_index = result.schema.index_of(x_column)
    series_indices = []
    for name in series_columns:
        index = result.schema.index_of(name)
        column_kind = result.schema.kind_of(name)
        if column_kind not in (ValueKind.INT, ValueKind.FLOAT):
            raise TypeMismatchError(
                f"series column {name!r} has type {column_kind.value}; "
                "chart series must be numeric"
            )
        series_indices.append((name, index))
    return {
        "kind": kind,
        "x": [value_to_json(row[x_index]) for row in result.rows],
        "series": [
            {"name": name, "values": [row[index] for row in result.rows]}
            for name, index in series_indices
        ],
    }


def _error_response(exc: EngineError, status: Optional[int] = None) -> JSONResponse:
    payload: dict = {"code": exc.code, "message": exc.message}
    offset = getattr(exc, "offset", None)
    if offset is not None:
        payload["offset"] = offset
        payload["expected"] = sorted(getattr(exc, "expected", ()))
    return JSONResponse(
        status_code=status or _STATUS_BY_CODE.get(exc.code, 500),
        content={"error": payload},
    )


def create_app(engine: Engine, static_dir: Optional[str | os.PathLike] = None) -> FastAPI:
    app = FastAPI(title="bx", docs_url=None, redoc_url=None)
    app.state.engine = engine

    @app.exception_handler(EngineError)
    async def _engine_error(_request: Request, exc: EngineError):
        return _error_response(exc)

    # -- tables --------------------------------------------------------------

    @app.post("/api/tables", status_code=201)
    def create_table(payload: dict = Body(...)):
        name = payload.get("name")
        if not isinstance(name, str) or not name:
            raise InvalidArgumentError("table name is required")
        csv_text = payload.get("csv")
        path = payload.get("path")
        schema = None
        if payload.get("schema") is not None:
            schema = schema_from_json(payload["schema"])
        rows_loaded = engine.ingest_table(
            name,
            path=path,
            csv_text=csv_text,
            schema=schema,
            has_header=bool(payload.get("has_header", False)),
            delimiter=payload.get("delimiter", ","),
        )
        return {"table": name, "rows_loaded": rows_loaded}

    @app.get("/api/tables")
    def list_tables():
        return [
            {"name": name, "rows": rows, "columns": len(schema)}
            for name, rows, schema in engine.catalog.list_tables()
        ]

    @app.get("/api/tables/{name}/schema")
    def table_schema(name: str):
        table = engine.catalog.table(name)
        return {"table": name, "columns": schema_to_json(table.schema)}

    @app.delete("/api/tables/{name}", status_code=204)
    def drop_table(name: str):
        engine.catalog.drop_table(name)

    # -- modules ---------------------------------------------------------------

    @app.get("/api/modules")
    def list_modules():
        out = []
        for descriptor in engine.repository.descriptors():
            output = (
                "dynamic"
                if descriptor.output_schema == "dynamic"
                else schema_to_json(descriptor.output_schema)
            )
            out.append(
                {
                    "name": descriptor.name,
                    "input_arity": descriptor.input_arity,
                    "params": [
                        {
                            "key": spec.key,
                            "required": spec.required,
                            "description": spec.description,
                        }
                        for spec in descriptor.param_spec
                    ],
                    "output": output,
                    "description": descriptor.description,
                }
            )
        return out

    # -- queries ---------------------------------------------------------------

    @app.post("/api/queries", status_code=202)
    def submit_query(payload: dict = Body(...)):
        if "text" in payload:
            submitted = payload["text"]
            if not isinstance(submitted, str):
                raise InvalidArgumentError("'text' must be a query string")
        elif "request" in payload:
            submitted = payload["request"]
            if not isinstance(submitted, dict):
                raise InvalidArgumentError("'request' must be an object")
        else:
            raise InvalidArgumentError("provide 'text' or 'request'")
        try:
            job = engine.submit(submitted)
        except EngineError as exc:
            # Submission problems are client errors regardless of which
            # subsystem reported them; only back-pressure keeps its code.
            return _error_response(exc, status=429 if exc.code == "queue_full" else 400)
        return {"job_id": job.id, "query": job.query_text}

    @app.get("/api/queries/{job_id}")
    def job_status(job_id: str):
        return engine.jobs.view(job_id)

    @app.get("/api/queries/{job_id}/rows")
    def job_rows(job_id: str, cursor: Optional[str] = None, limit: int = 100):
        return page_to_json(engine.page(job_id, cursor, limit))

    @app.get("/api/queries/{job_id}/chart")
    def job_chart(job_id: str, kind: str, x: str, series: str = ""):
        names = [name for name in series.split(",") if name]
        result = engine.jobs.result(job_id)
        return chart_data(result, kind, x, names)

    if static_dir is not None and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")
    else:

        @app.get("/")
        def index():
            return {
                "service": "bx",
                "api": [
                    "POST /api/tables",
                    "GET /api/tables",
                    "GET /api/tables/{name}/schema",
                    "DELETE /api/tables/{name}",
                    "GET /api/modules",
                    "POST /api/queries",
                    "GET /api/queries/{id}",
                    "GET /api/queries/{id}/rows",
                    "GET /api/queries/{id}/chart",
                ],
            }

    return app
