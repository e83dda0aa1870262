"""Built-in transform modules and the default module registry.

Each module adapts one analytics function to the streaming row
contract.  Input cells arrive already typed (tables validate cell
kinds), so modules validate their input *schema* once at open and then
trust the rows; rows with NULL in a needed cell are skipped.
"""

from __future__ import annotations

import math
import statistics
from datetime import date, time, timedelta
from typing import Optional

from . import analytics
from .model import Schema, Value, ValueKind, parse_date_text
from .repository import (
    ModuleDescriptor,
    ModuleRepository,
    ParamSpec,
    Row,
    TransformModule,
)

_NUMERIC = (ValueKind.INT, ValueKind.FLOAT)


def _require_kind(schema: Schema, index: int, wanted: tuple[ValueKind, ...], what: str) -> None:
    column = list(schema)[index]
    if column.kind not in wanted:
        names = " or ".join(k.value for k in wanted)
        raise ValueError(
            f"input column {index + 1} ({column.name!r}) must be {names}, "
            f"got {column.kind.value} — expected {what}"
        )


def _parse_technique(text: str) -> str:
    technique = text.strip().lower()
    if technique not in (analytics.EP, analytics.RP):
        raise ValueError(f"technique must be 'ep' or 'rp', got {text!r}")
    return technique


def _parse_selector(text: str) -> analytics.Selector:
    kind, sep, count_text = text.strip().partition(":")
    if sep != ":" or kind not in ("days", "weeks"):
        raise ValueError(f"selector must look like 'days:14' or 'weeks:4', got {text!r}")
    try:
        count = int(count_text)
    except ValueError:
        raise ValueError(f"selector count must be an integer, got {count_text!r}") from None
    if kind == "days":
        return analytics.PrecedingDays(count)
    return analytics.WeekdaySample(count)


def _parse_flag(text: str, key: str) -> bool:
    flag = text.strip().lower()
    if flag not in ("on", "off"):
        raise ValueError(f"parameter {key!r} must be 'on' or 'off', got {text!r}")
    return flag == "on"


class _ScalarAggregate(TransformModule):
    """Base for one-column numeric aggregates; emits one row at close,
    a single NULL when no values arrived."""

    def open(self, params: dict[str, str], input_schema: Schema) -> None:
        _require_kind(input_schema, 0, _NUMERIC, "a numeric column to aggregate")
        self.values: list[float] = []

    def push(self, row: Row) -> list[Row]:
        if row[0] is not None:
            self.values.append(row[0])
        return []

    def close(self) -> list[Row]:
        if not self.values:
            return [(None,)]
        return [(self._aggregate(self.values),)]

    def _aggregate(self, values: list[float]) -> float:
        raise NotImplementedError


class SumModule(_ScalarAggregate):
    def _aggregate(self, values: list[float]) -> float:
        return math.fsum(values)


class AverageModule(_ScalarAggregate):
    def _aggregate(self, values: list[float]) -> float:
        return statistics.fmean(values)


class StddevModule(_ScalarAggregate):
    def _aggregate(self, values: list[float]) -> float:
        return analytics.stddev(values)


class HourlyAnalysisModule(TransformModule):
    """(date, time, score) rows → (date, hour, mean score) per hour present."""

    def open(self, params: dict[str, str], input_schema: Schema) -> None:
        _require_kind(input_schema, 0, (ValueKind.DATE,), "the observation date")
        _require_kind(input_schema, 1, (ValueKind.TIME,), "the observation time")
        _require_kind(input_schema, 2, _NUMERIC, "the buzz score")
        self.records: list[analytics.BuzzRecord] = []

    def push(self, row: Row) -> list[Row]:
        day, when, score = row
        if day is not None and when is not None and score is not None:
            self.records.append(analytics.BuzzRecord(day, when, "", float(score)))
        return []

    def close(self) -> list[Row]:
        return [tuple(item) for item in analytics.hourly_aggregate(self.records)]


class DailyAnalysisModule(TransformModule):
    """(date, score) or (date, time, score) rows → (date, daily mean).

    With a time column the daily mean is the mean of hourly means; without
    one every row counts as one already-aggregated hourly value.
    """

    def open(self, params: dict[str, str], input_schema: Schema) -> None:
        if len(input_schema) not in (2, 3):
            raise ValueError(
                f"expects (date, score) or (date, time, score), got {len(input_schema)} column(s)"
            )
        _require_kind(input_schema, 0, (ValueKind.DATE,), "the observation date")
        if len(input_schema) == 3:
            _require_kind(input_schema, 1, (ValueKind.TIME,), "the observation time")
        _require_kind(input_schema, len(input_schema) - 1, _NUMERIC, "the buzz score")
        self.with_time = len(input_schema) == 3
        self.records: list[analytics.BuzzRecord] = []
        self._synthetic_hour = time(0, 0, 0)

    def push(self, row: Row) -> list[Row]:
        if self.with_time:
            day, when, score = row
        else:
            day, score = row
            when = self._synthetic_hour
        if day is not None and when is not None and score is not None:
            self.records.append(analytics.BuzzRecord(day, when, "", float(score)))
        return []

    def close(self) -> list[Row]:
        return [tuple(item) for item in analytics.daily_aggregate(self.records)]


class _PredictionBase(TransformModule):
    """Shared input handling for the prediction modules.

    Input rows are (date, score); scores sharing a date are averaged into
    one daily value before prediction.  Parameters: `technique` (ep|rp,
    default ep), `selector` (days:N | weeks:N; default: the whole input
    history), `target` (YYYY-MM-DD; default: the day after the last
    input date).
    """

    def open(self, params: dict[str, str], input_schema: Schema) -> None:
        _require_kind(input_schema, 0, (ValueKind.DATE,), "the observation date")
        _require_kind(input_schema, 1, _NUMERIC, "the buzz score")
        self.technique = _parse_technique(params.get("technique", analytics.EP))
        selector_text = params.get("selector")
        self.selector: Optional[analytics.Selector] = (
            _parse_selector(selector_text) if selector_text is not None else None
        )
        target_text = params.get("target")
        self.target: Optional[date] = (
            parse_date_text(target_text) if target_text is not None else None
        )
        self.scores: dict[date, list[float]] = {}

    def push(self, row: Row) -> list[Row]:
        day, score = row
        if day is not None and score is not None:
            self.scores.setdefault(day, []).append(float(score))
        return []

    def _history(self) -> dict[date, float]:
        return {day: statistics.fmean(scores) for day, scores in self.scores.items()}

    def _resolve_target(self, history: dict[date, float]) -> date:
        if self.target is not None:
            return self.target
        return max(history) + timedelta(days=1)

    def _predict_one(self, history: dict[date, float], target: date) -> float:
        if self.selector is not None:
            spec = analytics.PredictionSpec(self.technique, self.selector, target)
            return analytics.predict_daily(spec, history)
        dates = sorted(history)
        values = [history[d] for d in dates]
        if self.technique == analytics.EP:
            return analytics.ep_predict(values)
        points = [analytics.SeriesPoint(d.toordinal(), history[d]) for d in dates]
        return analytics.rp_predict(points, target.toordinal())


class DailyPredictionModule(_PredictionBase):
    """One output row: (target date, predicted score)."""

    def close(self) -> list[Row]:
        history = self._history()
        if not history:
            return [(None, None)]
        target = self._resolve_target(history)
        return [(target, self._predict_one(history, target))]


class WeeklyPredictionModule(_PredictionBase):
    """Seven output rows, one per day of the target week, each predicted
    independently; `target` names the first day of the week."""

    def close(self) -> list[Row]:
        history = self._history()
        if not history:
            return [(None, None)]
        start = self._resolve_target(history)
        return [
            (start + timedelta(days=offset),
             self._predict_one(history, start + timedelta(days=offset)))
            for offset in range(7)
        ]


class NgramAnalysisModule(TransformModule):
    """(n-gram text, frequency) rows → one row per phrase position:
    (pattern with `<token>` placeholders, summed frequency)."""

    def open(self, params: dict[str, str], input_schema: Schema) -> None:
        _require_kind(input_schema, 0, (ValueKind.TEXT,), "the n-gram text")
        _require_kind(input_schema, 1, (ValueKind.INT,), "the n-gram frequency")
        phrase_text = params.get("phrase")
        if phrase_text is None or not phrase_text.strip():
            raise ValueError("parameter 'phrase' is required")
        self.phrase = tuple(phrase_text.split())
        self.case_fold = _parse_flag(params.get("case_fold", "off"), "case_fold")
        self.records: list[analytics.NGramRecord] = []

    def push(self, row: Row) -> list[Row]:
        text, frequency = row
        if text is not None and frequency is not None:
            self.records.append(analytics.NGramRecord(tuple(text.split()), frequency))
        return []

    def close(self) -> list[Row]:
        report = analytics.ngram_event_scan(self.records, self.phrase, self.case_fold)
        return [
            (bucket.pattern, bucket.total_frequency) for bucket in report.buckets
        ]


_FLOAT = ValueKind.FLOAT
_PREDICTION_PARAMS = (
    ParamSpec("technique", required=False, description="ep (mean) or rp (regression); default ep"),
    ParamSpec("selector", required=False,
              description="days:N or weeks:N history selection; default: whole input"),
    ParamSpec("target", required=False,
              description="YYYY-MM-DD to predict; default: day after the last input date"),
)

_BUILTINS: list[tuple[ModuleDescriptor, type[TransformModule]]] = [
    (
        ModuleDescriptor(
            name="sum",
            input_arity=1,
            output_schema=Schema.of(("sum", _FLOAT)),
            description="Sum of a numeric column; NULL on empty input.",
        ),
        SumModule,
    ),
    (
        ModuleDescriptor(
            name="average",
            input_arity=1,
            output_schema=Schema.of(("average", _FLOAT)),
            description="Arithmetic mean of a numeric column; NULL on empty input.",
        ),
        AverageModule,
    ),
    (
        ModuleDescriptor(
            name="stddev",
            input_arity=1,
            output_schema=Schema.of(("stddev", _FLOAT)),
            description="Population standard deviation; NULL on empty input.",
        ),
        StddevModule,
    ),
    (
        ModuleDescriptor(
            name="hourly_analysis",
            input_arity=3,
            output_schema=Schema.of(
                ("date", ValueKind.DATE), ("hour", ValueKind.INT),
                ("avg_buzz_score", _FLOAT),
            ),
            description="Mean score per (date, hour) over (date, time, score) rows.",
        ),
        HourlyAnalysisModule,
    ),
    (
        ModuleDescriptor(
            name="daily_analysis",
            input_arity="any",
            output_schema=Schema.of(("date", ValueKind.DATE), ("avg_buzz_score", _FLOAT)),
            description="Mean of hourly means per date over (date[, time], score) rows.",
        ),
        DailyAnalysisModule,
    ),
    (
        ModuleDescriptor(
            name="daily_prediction",
            input_arity=2,
            param_spec=_PREDICTION_PARAMS,
            output_schema=Schema.of(("date", ValueKind.DATE), ("predicted_buzz_score", _FLOAT)),
            description="Predict one day's score from (date, score) history.",
        ),
        DailyPredictionModule,
    ),
    (
        ModuleDescriptor(
            name="weekly_prediction",
            input_arity=2,
            param_spec=_PREDICTION_PARAMS,
            output_schema=Schema.of(("date", ValueKind.DATE), ("predicted_buzz_score", _FLOAT)),
            description="Predict each day of a week from (date, score) history.",
        ),
        WeeklyPredictionModule,
    ),
    (
        ModuleDescriptor(
            name="ngram_analysis",
            input_arity=2,
            param_spec=(
                ParamSpec("phrase", required=True,
                          description="space-separated tokens to search for"),
                ParamSpec("case_fold", required=False,
                          description="on|off token case folding; default off"),
            ),
            output_schema=Schema.of(("pattern", ValueKind.TEXT), ("total_frequency", ValueKind.INT)),
            description="Per phrase position, the pattern and its summed frequency.",
        ),
        NgramAnalysisModule,
    ),
]


def register_builtins(repository: ModuleRepository) -> None:
    for descriptor, factory in _BUILTINS:
        repository.register(descriptor, factory)
    repository.register_alias("event_analysis", "ngram_analysis")


def build_default_repository() -> ModuleRepository:
    repository = ModuleRepository()
    register_builtins(repository)
    return repository
