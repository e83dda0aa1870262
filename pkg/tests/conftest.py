"""Shared fixtures: reference query texts, deterministic corpora, engines."""

from __future__ import annotations

import time
from datetime import date

import pytest
from fastapi.testclient import TestClient
from hypothesis import settings

from bx import Engine
from bx.datagen import (
    BUZZ_SCHEMA,
    NGRAM_SCHEMA,
    gen_buzz_rows,
    gen_ngram_rows,
    write_csv_with_schema,
)
from bx.service import create_app

settings.register_profile("suite", deadline=None, max_examples=60)
settings.load_profile("suite")

BUZZ_TABLE = "Yahoo_Buzz_Scores"
NGRAM_TABLE = "Yahoo_n-grams"

# Reference query corpus: four TRANSFORM queries exercised end to end,
# kept byte-for-byte (trailing spaces, tab continuation, optional
# semicolon, bare vs quoted dates) to pin parser tolerance.
HOURLY_QUERY = (
    "SELECT TRANSFORM(date, time, buzz_score) \n"
    "USING 'hourly_analysis' \n"
    "FROM Yahoo_Buzz_Scores \n"
    "WHERE product='EBOOKS' \n"
    "AND date >= 2005-05-23 \n"
    "AND date <=2005-05-27;"
)

DAILY_QUERY = (
    "SELECT TRANSFORM(date, buzz_score)\n"
    "USING 'daily_analysis' \n"
    "FROM Yahoo_Buzz_Scores\n"
    "WHERE product IN ('ONLNMUSIC','EBOOKS', \n"
    "\t'VGAME', 'SOCNETS', 'PHOTO')\n"
    "AND date>='2005-04-01' \n"
    "AND date <='2005-07-26'"
)

PREDICTION_QUERY = (
    "SELECT TRANSFORM(date, buzz_score)\n"
    "USING 'daily_prediction' \n"
    "FROM Yahoo_Buzz_Scores\n"
    "WHERE product IN ('EBOOKS')\n"
    "AND date>='2005-07-08' \n"
    "AND date <='2005-07-22'"
)

NGRAM_QUERY = (
    "SELECT TRANSFORM(n-gram, frequency)\n"
    "USING 'ngram_analysis' \n"
    "AS distinct_n-gram, total_frequency\n"
    "FROM Yahoo_n-grams"
)

REFERENCE_QUERIES = {
    "hourly": HOURLY_QUERY,
    "daily": DAILY_QUERY,
    "prediction": PREDICTION_QUERY,
    "ngram": NGRAM_QUERY,
}

CORPUS_SEED = 20050723
CORPUS_DAYS = 117  # 2005-04-01 .. 2005-07-26, the full charted range
NGRAM_SEED = 11
NGRAM_RECORDS = 2500
NGRAM_PLANTED = 60


@pytest.fixture(scope="session")
def corpus_rows():
    return gen_buzz_rows(seed=CORPUS_SEED, days=CORPUS_DAYS, start=date(2005, 4, 1))


@pytest.fixture(scope="session")
def ngram_rows():
    return gen_ngram_rows(seed=NGRAM_SEED, records=NGRAM_RECORDS, planted_count=NGRAM_PLANTED)


@pytest.fixture(scope="session")
def corpus_engine(tmp_path_factory, corpus_rows, ngram_rows):
    """Read-only engine preloaded with both reference tables."""
    root = tmp_path_factory.mktemp("corpus")
    buzz_csv, _ = write_csv_with_schema(root / "buzz.csv", corpus_rows, BUZZ_SCHEMA)
    ngram_csv, _ = write_csv_with_schema(root / "grams.csv", ngram_rows, NGRAM_SCHEMA)
    engine = Engine(root / "data", workers=2, queue_size=32)
    engine.ingest_table(BUZZ_TABLE, path=buzz_csv, schema=BUZZ_SCHEMA)
    engine.ingest_table(NGRAM_TABLE, path=ngram_csv, schema=NGRAM_SCHEMA)
    yield engine
    engine.shutdown()


@pytest.fixture(scope="session")
def corpus_client(corpus_engine):
    with TestClient(create_app(corpus_engine)) as client:
        yield client


@pytest.fixture
def fresh_engine(tmp_path):
    engine = Engine(tmp_path / "data", workers=2, queue_size=8)
    yield engine
    engine.shutdown()


@pytest.fixture
def client(fresh_engine):
    with TestClient(create_app(fresh_engine)) as http:
        yield http


def wait_job(client, job_id, timeout=30.0):
    """Poll a job until it reaches a terminal state; return the view."""
    deadline = time.monotonic() + timeout
    while time.monotonic() < deadline:
        response = client.get(f"/api/queries/{job_id}")
        assert response.status_code == 200, response.text
        body = response.json()
        if body["status"] in ("succeeded", "failed"):
            return body
        time.sleep(0.01)
    raise AssertionError(f"job {job_id} did not finish within {timeout}s")


def fetch_all_rows(client, job_id, limit=100):
    """Drain the paginated rows endpoint; returns (rows, page_sizes)."""
    rows, sizes, cursor = [], [], None
    while True:
        url = f"/api/queries/{job_id}/rows?limit={limit}"
        if cursor is not None:
            url += f"&cursor={cursor}"
        response = client.get(url)
        assert response.status_code == 200, response.text
        body = response.json()
        rows.extend(tuple(r) for r in body["rows"])
        sizes.append(len(body["rows"]))
        cursor = body.get("next_cursor")
        if cursor is None:
            return rows, sizes
