"""Record HTTP fixtures for the frontend test suite.

Runs the real engine behind its FastAPI app (in-process test transport),
drives the documented endpoints exactly the way the browser client does,
and snapshots the JSON bodies under tests/fixtures/.  The recording
asserts the engine-side guarantees the frontend tests rely on (canonical
query text, page partitioning, aligned workbench series), so a fixture
that records successfully is already evidence of agreement between the
two components.

Usage: python3 frontend/scripts/record_fixtures.py
"""
from __future__ import annotations

import json
import sys
import tempfile
from pathlib import Path

from fastapi.testclient import TestClient

from bx import datagen
from bx.engine import Engine
from bx.service import create_app

FIXTURES = Path(__file__).resolve().parent.parent / "tests" / "fixtures"

# The canonical text the engine renders for the documented hourly-analysis
# example (README quickstart); the hourly form must reproduce exactly this.
REFERENCE_HOURLY_TEXT = (
    "SELECT TRANSFORM (date, time, buzz_score) USING 'hourly_analysis' "
    "FROM Yahoo_Buzz_Scores WHERE product = 'EBOOKS' "
    "AND date >= '2005-05-23' AND date <= '2005-05-27'"
)

HOURLY_REQUEST = {
    "table": "Yahoo_Buzz_Scores",
    "columns": ["date", "time", "buzz_score"],
    "module": "hourly_analysis",
    "filters": [
        {"column": "product", "op": "=", "value": "EBOOKS"},
        {"column": "date", "op": ">=", "value": "2005-05-23"},
        {"column": "date", "op": "<=", "value": "2005-05-27"},
    ],
}

PREDICTION_REQUEST = {
    "table": "Yahoo_Buzz_Scores",
    "columns": ["date", "buzz_score"],
    "module": "daily_prediction",
    "module_params": {"technique": "rp", "selector": "weeks:4", "target": "2005-07-23"},
    "filters": [{"column": "product", "op": "=", "value": "EBOOKS"}],
}


def build_engine(root: Path) -> Engine:
    engine = Engine(data_dir=root / "data", workers=2, queue_size=16)
    buzz = datagen.gen_buzz_rows(seed=20050723, days=117)
    csv_path, sidecar = datagen.write_csv_with_schema(root / "buzz.csv", buzz, datagen.BUZZ_SCHEMA)
    engine.ingest_table("Yahoo_Buzz_Scores", path=csv_path, schema=datagen.BUZZ_SCHEMA)
    return engine


def run_job(client: TestClient, body: dict) -> tuple[str, dict]:
    response = client.post("/api/queries", json=body)
    assert response.status_code == 202, response.text
    submitted = response.json()
    job_id = submitted["job_id"]
    for _ in range(600):
        view = client.get(f"/api/queries/{job_id}").json()
        if view["status"] in ("succeeded", "failed"):
            break
    assert view["status"] == "succeeded", view
    return job_id, submitted


def drain_rows(client: TestClient, job_id: str, limit: int) -> tuple[list[dict], list[list]]:
    pages, rows, cursor = [], [], None
    while True:
        params = {"limit": limit}
        if cursor:
            params["cursor"] = cursor
        body = client.get(f"/api/queries/{job_id}/rows", params=params).json()
        pages.append({"cursor": cursor, "body": body})
        rows.extend(body["rows"])
        cursor = body.get("next_cursor")
        if not cursor:
            return pages, rows


def save(name: str, payload) -> None:
    path = FIXTURES / name
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    print(f"wrote {path.relative_to(FIXTURES.parent.parent)}")


def main() -> int:
    FIXTURES.mkdir(parents=True, exist_ok=True)
    with tempfile.TemporaryDirectory() as tmp:
        engine = build_engine(Path(tmp))
        try:
            with TestClient(create_app(engine)) as client:
                # A small table for grid/chart fixtures.
                response = client.post(
                    "/api/tables",
                    json={
                        "name": "browse_demo",
                        "csv": "1,0.5,alpha\n2,1.5,beta\n3,2.5,gamma\n4,3.5,delta\n5,4.5,epsilon\n",
                        "schema": [
                            {"name": "a", "type": "INT"},
                            {"name": "b", "type": "FLOAT"},
                            {"name": "label", "type": "TEXT"},
                        ],
                    },
                )
                assert response.status_code == 201, response.text

                save("tables.json", client.get("/api/tables").json())
                save("modules.json", client.get("/api/modules").json())
                save(
                    "schema_buzz.json",
                    client.get("/api/tables/Yahoo_Buzz_Scores/schema").json(),
                )

                # Hourly form fidelity: the structured request must render to
                # the documented reference text.
                job_id, submitted = run_job(client, {"request": HOURLY_REQUEST})
                assert submitted["query"] == REFERENCE_HOURLY_TEXT, submitted["query"]
                save(
                    "hourly_form.json",
                    {
                        "request": HOURLY_REQUEST,
                        "response": submitted,
                        "reference_text": REFERENCE_HOURLY_TEXT,
                    },
                )

                # One-day hourly chart (24-point line).
                day_job, _ = run_job(
                    client,
                    {
                        "text": "SELECT TRANSFORM(date, time, buzz_score) "
                        "USING 'hourly_analysis' FROM Yahoo_Buzz_Scores "
                        "WHERE product = 'EBOOKS' "
                        "AND date >= '2005-05-23' AND date <= '2005-05-23'"
                    },
                )
                chart = client.get(
                    f"/api/queries/{day_job}/chart",
                    params={"kind": "line", "x": "hour", "series": "avg_buzz_score"},
                ).json()
                assert len(chart["x"]) == 24, chart
                save("chart_line.json", chart)

                # Grouped bars over two numeric series.
                demo_job, _ = run_job(client, {"text": "SELECT * FROM browse_demo"})
                grouped = client.get(
                    f"/api/queries/{demo_job}/chart",
                    params={"kind": "grouped_bar", "x": "label", "series": "a,b"},
                ).json()
                save("chart_grouped.json", grouped)

                # A 5-row result paged 2 at a time: exactly three pages.
                grid_job, grid_submit = run_job(client, {"text": "SELECT * FROM browse_demo"})
                pages, rows = drain_rows(client, grid_job, limit=2)
                assert [len(p["body"]["rows"]) for p in pages] == [2, 2, 1], pages
                save(
                    "grid_small.json",
                    {"job": grid_submit, "pages": pages, "all_rows": rows},
                )

                empty_job, empty_submit = run_job(
                    client, {"text": "SELECT * FROM browse_demo WHERE a >= 1000"}
                )
                empty_pages, empty_rows = drain_rows(client, empty_job, limit=2)
                assert empty_rows == [] and len(empty_pages) == 1
                save(
                    "grid_empty.json",
                    {"job": empty_submit, "pages": empty_pages},
                )

                # Prediction workbench: the rp/weeks:4 request for 2005-07-23,
                # plus a seven-day overlay window (2005-07-16..22) with
                # actuals and both forecast techniques.
                _, prediction_submit = run_job(client, {"request": PREDICTION_REQUEST})
                assert "daily_prediction(technique=rp, selector=weeks:4, target=2005-07-23)" in (
                    prediction_submit["query"]
                ), prediction_submit["query"]

                def weekly(technique: str) -> dict:
                    return {
                        "table": "Yahoo_Buzz_Scores",
                        "columns": ["date", "buzz_score"],
                        "module": "weekly_prediction",
                        "module_params": {
                            "technique": technique,
                            "selector": "days:14",
                            "target": "2005-07-16",
                        },
                        "filters": [{"column": "product", "op": "=", "value": "EBOOKS"}],
                    }

                actuals_request = {
                    "table": "Yahoo_Buzz_Scores",
                    "columns": ["date", "buzz_score"],
                    "module": "daily_analysis",
                    "filters": [
                        {"column": "product", "op": "=", "value": "EBOOKS"},
                        {"column": "date", "op": ">=", "value": "2005-07-16"},
                        {"column": "date", "op": "<=", "value": "2005-07-22"},
                    ],
                }
                ep_job, ep_submit = run_job(client, {"request": weekly("ep")})
                _, ep_rows = drain_rows(client, ep_job, limit=100)
                rp_job, rp_submit = run_job(client, {"request": weekly("rp")})
                _, rp_rows = drain_rows(client, rp_job, limit=100)
                actual_job, actual_submit = run_job(client, {"request": actuals_request})
                _, actual_rows = drain_rows(client, actual_job, limit=100)

                dates = [row[0] for row in ep_rows]
                assert dates == [row[0] for row in rp_rows] == [row[0] for row in actual_rows]
                assert len(dates) == 7, dates
                save(
                    "workbench.json",
                    {
                        "prediction_request": PREDICTION_REQUEST,
                        "prediction_response": prediction_submit,
                        "ep_request": weekly("ep"),
                        "rp_request": weekly("rp"),
                        "actuals_request": actuals_request,
                        "ep_response": ep_submit,
                        "rp_response": rp_submit,
                        "actuals_response": actual_submit,
                        "ep_rows": ep_rows,
                        "rp_rows": rp_rows,
                        "actual_rows": actual_rows,
                    },
                )

                # A machine-readable error body, for the message mapping.
                bad = client.post("/api/queries", json={"text": "SELEC * FROM x"})
                assert bad.status_code == 400
                save("error_parse.json", bad.json())
        finally:
            engine.shutdown()
    return 0


if __name__ == "__main__":
    sys.exit(main())
