"""The `bx` command-line interface.

Batch access to the same engine the HTTP service runs: table ingestion,
query execution, prediction and n-gram shortcuts, synthetic data
generation, and the development server.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import json
import os
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import analytics, datagen
from .engine import Engine
from .errors import EngineError, InvalidArgumentError
from .model import Schema, ValueKind, format_cell, json_value, parse_date_text
from .query import Compare, Literal, QueryAst, Transform
from .storage import read_schema_file

FORMATS = ("table", "csv", "json")


def _env(name: str, default: Optional[str] = None) -> Optional[str]:
    return os.environ.get(name, default)


def _resolve_data_dir(args: argparse.Namespace) -> Optional[str]:
    return args.data_dir or _env("BX_DATA_DIR")


@contextlib.contextmanager
def _batch_engine(args: argparse.Namespace):
    engine = Engine(data_dir=_resolve_data_dir(args), workers=1, queue_size=4)
    try:
        yield engine
    finally:
        engine.shutdown()


def _print_rows(schema: Schema, rows, fmt: str, out=None) -> None:
    out = out or sys.stdout
    names = list(schema.names)
    if fmt == "csv":
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(names)
        for row in rows:
            writer.writerow([format_cell(cell) for cell in row])
        return
    if fmt == "json":
        body = [
            {name: json_value(cell) for name, cell in zip(names, row)} for row in rows
        ]
        json.dump(body, out, indent=2)
        out.write("\n")
        return
    cells = [[format_cell(cell) if cell is not None else "NULL" for cell in row] for row in rows]
    widths = [
        max(len(name), *(len(row[i]) for row in cells)) if cells else len(name)
        for i, name in enumerate(names)
    ]
    out.write("  ".join(name.ljust(w) for name, w in zip(names, widths)).rstrip() + "\n")
    out.write("  ".join("-" * w for w in widths) + "\n")
    for row in cells:
        out.write("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() + "\n")
    out.write(f"({len(cells)} row{'s' if len(cells) != 1 else ''})\n")


# -- subcommand implementations ----------------------------------------------


def _cmd_ingest(args: argparse.Namespace) -> int:
    schema = None
    if args.schema:
        schema = read_schema_file(args.schema)
    else:
        sidecar = Path(args.input).with_suffix(".schema.tsv")
        if sidecar.is_file():
            schema = read_schema_file(sidecar)
    with _batch_engine(args) as engine:
        rows = engine.ingest_table(
            args.table,
            path=args.input,
            schema=schema,
            has_header=args.header,
            delimiter=args.delimiter,
        )
    print(f"loaded {rows} rows into table {args.table!r}")
    return 0


def _cmd_query(args: argparse.Namespace) -> int:
    with _batch_engine(args) as engine:
        result = engine.run(args.sql)
    _print_rows(result.schema, result.rows, args.format)
    return 0


def _cmd_predict(args: argparse.Namespace) -> int:
    params = [("technique", args.technique)]
    if args.selector:
        params.append(("selector", args.selector))
    if args.target:
        try:
            parse_date_text(args.target)  # fail fast on malformed dates
        except ValueError as exc:
            raise InvalidArgumentError(str(exc)) from None
        params.append(("target", args.target))
    projection = Transform(
        input_columns=(args.date_column, args.score_column),
        module_name="daily_prediction",
        module_params=tuple(params),
    )
    predicate = None
    if args.product:
        predicate = Compare(args.product_column, "=", Literal.of(args.product))
    ast = QueryAst(projection=projection, source=args.table, predicate=predicate)
    with _batch_engine(args) as engine:
        result = engine.run(ast)
    _print_rows(result.schema, result.rows, args.format)
    return 0


def _cmd_ngram(args: argparse.Namespace) -> int:
    with _batch_engine(args) as engine, engine.catalog.read_lease(args.table) as table:
        text_index = table.schema.index_of(args.ngram_column)
        freq_index = table.schema.index_of(args.frequency_column)
        records = [
            analytics.NGramRecord(tuple(row[text_index].split()), row[freq_index])
            for row in table.rows()
            if row[text_index] is not None and row[freq_index] is not None
        ]
    report = analytics.ngram_event_scan(records, args.phrase.split(), args.case_fold)
    if args.format == "json":
        body = {
            "phrase": " ".join(report.phrase),
            "buckets": [
                {
                    "start": b.start,
                    "pattern": b.pattern,
                    "distinct_count": b.distinct_count,
                    "total_frequency": b.total_frequency,
                }
                for b in report.buckets
            ],
            "related_distinct": report.related_distinct,
            "related_total_frequency": report.related_total_frequency,
            "corpus_distinct": report.corpus_distinct,
            "share_percent": report.share_percent,
        }
        json.dump(body, sys.stdout, indent=2)
        sys.stdout.write("\n")
        return 0
    schema = Schema.of(
        ("pattern", ValueKind.TEXT),
        ("distinct_count", ValueKind.INT),
        ("total_frequency", ValueKind.INT),
    )
    rows = [(b.pattern, b.distinct_count, b.total_frequency) for b in report.buckets]
    _print_rows(schema, rows, "table")
    print(f"related_distinct   {report.related_distinct}")
    print(f"corpus_distinct    {report.corpus_distinct}")
    print(f"share_percent      {report.share_percent:.4f}")
    return 0


def _cmd_gen_buzz(args: argparse.Namespace) -> int:
    products = tuple(p for p in args.products.split(",") if p)
    rows = datagen.gen_buzz_rows(
        seed=args.seed,
        days=args.days,
        products=products or datagen.DEFAULT_PRODUCTS,
        start=parse_date_text(args.start),
    )
    csv_path, sidecar = datagen.write_csv_with_schema(args.out, rows, datagen.BUZZ_SCHEMA)
    print(f"wrote {len(rows)} rows to {csv_path} (schema: {sidecar})")
    return 0


def _cmd_gen_ngrams(args: argparse.Namespace) -> int:
    rows = datagen.gen_ngram_rows(
        seed=args.seed,
        records=args.records,
        planted_phrase=tuple(args.phrase.split()),
        planted_count=args.planted_count,
    )
    csv_path, sidecar = datagen.write_csv_with_schema(args.out, rows, datagen.NGRAM_SCHEMA)
    print(f"wrote {len(rows)} rows to {csv_path} (schema: {sidecar})")
    return 0


def _cmd_tables(args: argparse.Namespace) -> int:
    with _batch_engine(args) as engine:
        listing = engine.catalog.list_tables()
    if not listing:
        print("(no tables)")
        return 0
    schema = Schema.of(
        ("name", ValueKind.TEXT), ("rows", ValueKind.INT), ("columns", ValueKind.INT)
    )
    _print_rows(schema, [(n, r, len(s)) for n, r, s in listing], "table")
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    static_dir = args.static_dir or _env("BX_STATIC_DIR")
    if static_dir is None:
        candidate = Path("frontend") / "dist"
        if candidate.is_dir():
            static_dir = str(candidate)
    engine = Engine(
        data_dir=_resolve_data_dir(args),
        workers=args.workers,
        queue_size=args.queue_size,
        result_ttl=args.result_ttl,
    )
    app = create_app(engine, static_dir=static_dir)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


# -- argument parsing ----------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--data-dir",
        default=None,
        help="directory for persistent table snapshots (env: BX_DATA_DIR)",
    )
    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument("--format", choices=FORMATS, default="table", help="output format")

    parser = argparse.ArgumentParser(
        prog="bx", description="explore tabular data with transform queries"
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    p = sub.add_parser("ingest", parents=[common], help="load delimited text into a table")
    p.add_argument("--input", required=True, help="input file (CSV or delimited text)")
    p.add_argument("--table", required=True, help="name for the new table")
    p.add_argument(
        "--delimiter", default=",", help="field delimiter: ',' (default) or 'tab'"
    )
    p.add_argument(
        "--schema",
        default=None,
        help="schema sidecar (name<TAB>TYPE per line); default: <input>.schema.tsv "
        "if present, else all-TEXT columns",
    )
    p.add_argument("--header", action="store_true", help="first line is a header row")
    p.set_defaults(func=_cmd_ingest)

    p = sub.add_parser("query", parents=[common, fmt], help="run a query and print rows")
    p.add_argument("--sql", required=True, help="query text")
    p.set_defaults(func=_cmd_query)

    p = sub.add_parser(
        "predict", parents=[common, fmt], help="predict a day's score from history"
    )
    p.add_argument("--table", required=True)
    p.add_argument("--product", default=None, help="filter to one product")
    p.add_argument("--technique", choices=("ep", "rp"), default="ep")
    p.add_argument("--selector", default=None, help="history selector: days:N or weeks:N")
    p.add_argument("--target", default=None, help="date to predict (YYYY-MM-DD)")
    p.add_argument("--date-column", default="date")
    p.add_argument("--score-column", default="buzz_score")
    p.add_argument("--product-column", default="product")
    p.set_defaults(func=_cmd_predict)

    p = sub.add_parser(
        "ngram", parents=[common], help="scan an n-gram table for a phrase"
    )
    p.add_argument("--table", required=True)
    p.add_argument("--phrase", required=True, help="space-separated tokens")
    p.add_argument("--case-fold", action="store_true")
    p.add_argument("--ngram-column", default="n-gram")
    p.add_argument("--frequency-column", default="frequency")
    p.add_argument("--format", choices=("table", "json"), default="table")
    p.set_defaults(func=_cmd_ngram)

    p = sub.add_parser("gen", help="generate deterministic synthetic datasets")
    gen_sub = p.add_subparsers(dest="generator", required=True, metavar="generator")

    g = gen_sub.add_parser("buzz", help="hourly product buzz scores")
    g.add_argument("--seed", type=int, default=42)
    g.add_argument("--days", type=int, default=30)
    g.add_argument(
        "--products",
        default=",".join(datagen.DEFAULT_PRODUCTS),
        help="comma-separated product names",
    )
    g.add_argument("--start", default=datagen.DEFAULT_START.isoformat())
    g.add_argument("--out", default="buzz.csv")
    g.set_defaults(func=_cmd_gen_buzz)

    g = gen_sub.add_parser("ngrams", help="5-gram corpus with a planted phrase")
    g.add_argument("--seed", type=int, default=42)
    g.add_argument("--records", type=int, default=10000)
    g.add_argument("--phrase", default="bird flu", help="phrase to plant")
    g.add_argument("--planted-count", type=int, default=50)
    g.add_argument("--out", default="ngrams.csv")
    g.set_defaults(func=_cmd_gen_ngrams)

    p = sub.add_parser("serve", parents=[common], help="run the HTTP service")
    p.add_argument("--host", default=_env("BX_HOST", "127.0.0.1"))
    p.add_argument("--port", type=int, default=int(_env("BX_PORT", "8040")))
    p.add_argument(
        "--workers", type=int,
        default=int(_env("BX_WORKERS", "0")) or None,
        help="query worker threads (default: available parallelism)",
    )
    p.add_argument(
        "--queue-size", type=int, default=int(_env("BX_QUEUE_SIZE", "64")),
        help="pending-job bound before submissions are rejected",
    )
    p.add_argument(
        "--result-ttl", type=float, default=float(_env("BX_RESULT_TTL", "3600")),
        help="seconds to retain finished jobs and their results",
    )
    p.add_argument(
        "--static-dir", default=None,
        help="directory of web UI assets to serve at / (env: BX_STATIC_DIR)",
    )
    p.set_defaults(func=_cmd_serve)

    p = sub.add_parser("tables", parents=[common], help="list tables in the catalog")
    p.set_defaults(func=_cmd_tables)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except EngineError as exc:
        print(f"error: {exc.message}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
