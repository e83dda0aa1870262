"""Deterministic synthetic data generators.

The original search-buzz and n-gram corpora are license-restricted, so
tests and demos run on generated stand-ins.  Generators are

- deterministic: identical (seed, arguments) give byte-identical files;
- structured: buzz scores have smooth daily/weekly shape, a gentle
  trend, and seeded noise, so predictions are nontrivial;
- truth-planted: the n-gram generator embeds a phrase in an exact
  number of records, giving event-scan tests a known answer.
"""

from __future__ import annotations

import csv
import math
import random
from datetime import date, time, timedelta
from pathlib import Path
from typing import Iterable, Sequence

from .errors import InvalidArgumentError
from .model import Schema, Value, ValueKind, format_cell
from .storage import write_schema_file

BUZZ_SCHEMA = Schema.of(
    ("date", ValueKind.DATE),
    ("time", ValueKind.TIME),
    ("product", ValueKind.TEXT),
    ("buzz_score", ValueKind.FLOAT),
)

NGRAM_SCHEMA = Schema.of(
    ("n-gram", ValueKind.TEXT),
    ("frequency", ValueKind.INT),
)

DEFAULT_PRODUCTS = ("EBOOKS", "ONLNMUSIC", "VGAME", "SOCNETS", "PHOTO")
DEFAULT_START = date(2005, 4, 1)

# Filler vocabulary for synthetic n-grams.  Planted phrases are kept
# findable by construction: fillers that collide with the phrase's
# first token are excluded when generating, so a phrase occurs exactly
# where it was planted and nowhere else.
_VOCABULARY = (
    "the a an of to in on for with from by about over under into news "
    "report reports said says health world national market stocks price "
    "rising falling week year month day today major minor update live "
    "people government officials country city region group company tech "
    "study research data record high low early late first second third "
    "new old open close public private global local summer winter spring "
    "autumn monday friday game match team player win loss final round "
    "music video photo online social network media site web search index"
).split()


def gen_buzz_rows(
    seed: int,
    days: int,
    products: Sequence[str] = DEFAULT_PRODUCTS,
    start: date = DEFAULT_START,
) -> list[tuple[date, time, str, float]]:
    """Hourly buzz records: one row per (product, day, hour)."""
    if days < 1:
        raise InvalidArgumentError("days must be at least 1")
    if not products:
        raise InvalidArgumentError("at least one product is required")
    rng = random.Random(seed)
    rows: list[tuple[date, time, str, float]] = []
    for index, product in enumerate(products):
        base = 6.0 + 1.5 * index
        trend = 0.0015 * (index + 1)  # slow per-day drift, distinct per product
        for day_offset in range(days):
            day = start + timedelta(days=day_offset)
            weekday_factor = 1.0 + 0.08 * math.sin(2.0 * math.pi * day.weekday() / 7.0)
            for hour in range(24):
                diurnal = 1.0 + 0.25 * math.sin(2.0 * math.pi * (hour - 6) / 24.0)
                noise = rng.gauss(0.0, 0.04 * base)
                score = base * (1.0 + trend * day_offset) * weekday_factor * diurnal
                score = max(score + noise, 0.01)
                rows.append((day, time(hour, 0, 0), product, round(score, 5)))
    return rows


def gen_ngram_rows(
    seed: int,
    records: int,
    planted_phrase: Sequence[str] = ("bird", "flu"),
    planted_count: int = 0,
    n: int = 5,
) -> list[tuple[str, int]]:
    """Synthetic n-gram corpus rows (n-gram text, frequency).

    Exactly `planted_count` records contain the phrase as a contiguous
    token run (once each); no other record contains it.
    """
    phrase = tuple(planted_phrase)
    if not phrase:
        raise InvalidArgumentError("planted phrase must contain at least one token")
    if len(phrase) > n:
        raise InvalidArgumentError(
            f"planted phrase has {len(phrase)} tokens; n-grams have only {n}"
        )
    if planted_count > records:
        raise InvalidArgumentError("planted count cannot exceed the record count")
    rng = random.Random(seed)
    safe_vocab = [word for word in _VOCABULARY if word != phrase[0]]
    planted_at = set(rng.sample(range(records), planted_count))
    rows: list[tuple[str, int]] = []
    for index in range(records):
        if index in planted_at:
            start = rng.randrange(n - len(phrase) + 1)
            tokens = [rng.choice(safe_vocab) for _ in range(n)]
            tokens[start : start + len(phrase)] = phrase
        else:
            tokens = [rng.choice(safe_vocab) for _ in range(n)]
        rows.append((" ".join(tokens), rng.randint(1, 1000)))
    return rows


def write_csv_with_schema(
    path: str | Path,
    rows: Iterable[Sequence[Value]],
    schema: Schema,
) -> tuple[Path, Path]:
    """Write headerless CSV data plus a `.schema.tsv` sidecar next to it."""
    csv_path = Path(path)
    with open(csv_path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        for row in rows:
            writer.writerow([format_cell(cell) for cell in row])
    sidecar = csv_path.with_suffix(".schema.tsv")
    write_schema_file(sidecar, schema)
    return csv_path, sidecar
