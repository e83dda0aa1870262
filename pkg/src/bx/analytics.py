"""Aggregation, prediction, and n-gram event-scan mathematics.

Everything here is a pure function over its inputs.  The same code
backs the registered transform modules, the CLI shortcuts, and the
HTTP service, so the arithmetic is defined in exactly one place.

Conventions fixed here (and relied on by tests):

- A daily aggregate is the mean of that day's hourly means, not the
  mean of raw records; the two differ when hours carry unequal counts.
- `stddev` is the population form (divide by N).
- Percent error is signed: 100 × (predicted − actual) / actual.
- Pearson is the sample correlation coefficient.
- Regression prediction fits ordinary least squares over calendar day
  ordinals, so date spacing is honored when extrapolating.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass
from datetime import date, time, timedelta
from typing import Iterable, Mapping, NamedTuple, Optional, Sequence, Union

from .errors import InvalidArgumentError, MissingHistoryError

EP = "ep"
RP = "rp"
PLACEHOLDER = "<token>"


@dataclass(frozen=True)
class BuzzRecord:
    """One observation: a product's search-buzz score at a date and time."""

    date: date
    time: time
    product: str
    buzz_score: float


class SeriesPoint(NamedTuple):
    """A regression data point: x is a day ordinal, y the score."""

    x: int
    y: float


@dataclass(frozen=True)
class PrecedingDays:
    """History selector: the run of dates leading up to the target.

    Selecting `n` preceding days covers the inclusive span that starts
    n+1 days before the target and ends the day before it — e.g. 14
    days before 2005-07-23 covers 2005-07-08 through 2005-07-22.
    """

    n: int

    def __post_init__(self):
        if self.n < 1:
            raise InvalidArgumentError("preceding-days count must be at least 1")


@dataclass(frozen=True)
class WeekdaySample:
    """History selector: the n same-weekday dates before the target,
    at strict 7-day spacing."""

    n: int

    def __post_init__(self):
        if self.n < 1:
            raise InvalidArgumentError("weekday-sample count must be at least 1")


Selector = Union[PrecedingDays, WeekdaySample]


@dataclass(frozen=True)
class PredictionSpec:
    """Technique (ep = mean, rp = regression) + history selector + target."""

    technique: str
    selector: Selector
    target_date: date

    def __post_init__(self):
        if self.technique not in (EP, RP):
            raise InvalidArgumentError(
                f"unknown prediction technique {self.technique!r} (expected ep or rp)"
            )
        if self.technique == RP and self.selector.n < 2:
            raise InvalidArgumentError("regression needs a selector count of at least 2")


class EventBucket(NamedTuple):
    """Counts for one phrase start position within the n-grams."""

    start: int  # 1-based token position of the phrase
    pattern: str  # e.g. "<token> bird flu <token> <token>"
    distinct_count: int
    total_frequency: int


class NGramRecord(NamedTuple):
    tokens: tuple[str, ...]
    frequency: int


@dataclass(frozen=True)
class EventReport:
    """Result of scanning an n-gram corpus for a phrase."""

    phrase: tuple[str, ...]
    buckets: tuple[EventBucket, ...]
    corpus_distinct: int

    @property
    def related_distinct(self) -> int:
        return sum(bucket.distinct_count for bucket in self.buckets)

    @property
    def related_total_frequency(self) -> int:
        return sum(bucket.total_frequency for bucket in self.buckets)

    @property
    def share_percent(self) -> float:
        if self.corpus_distinct == 0:
            return 0.0
        return 100.0 * self.related_distinct / self.corpus_distinct


def hourly_aggregate(
    records: Iterable[BuzzRecord],
) -> list[tuple[date, int, float]]:
    """Mean score per (date, hour) present in the input, sorted."""
    groups: dict[tuple[date, int], list[float]] = {}
    for record in records:
        groups.setdefault((record.date, record.time.hour), []).append(record.buzz_score)
    return [
        (day, hour, statistics.fmean(scores))
        for (day, hour), scores in sorted(groups.items())
    ]


def daily_aggregate(records: Iterable[BuzzRecord]) -> list[tuple[date, float]]:
    """Per day, the unweighted mean of that day's hourly means, sorted."""
    hourly = hourly_aggregate(records)
    days: dict[date, list[float]] = {}
    for day, _hour, mean in hourly:
        days.setdefault(day, []).append(mean)
    return [(day, statistics.fmean(means)) for day, means in sorted(days.items())]


def select_history_dates(selector: Selector, target_date: date) -> list[date]:
    """The ascending dates a selector demands for a target; never includes
    the target itself."""
    if isinstance(selector, PrecedingDays):
        span = selector.n + 1
        return [target_date - timedelta(days=offset) for offset in range(span, 0, -1)]
    if isinstance(selector, WeekdaySample):
        return [
            target_date - timedelta(weeks=offset)
            for offset in range(selector.n, 0, -1)
        ]
    raise InvalidArgumentError(f"unknown history selector: {selector!r}")


def ep_predict(history: Sequence[float]) -> float:
    """Extrapolation-based prediction: the mean of the history."""
    if not history:
        raise InvalidArgumentError("extrapolation needs a nonempty history")
    return statistics.fmean(history)


def rp_predict(points: Sequence[tuple[int, float]], target_x: int) -> float:
    """Regression-based prediction: OLS line over the points, evaluated
    at the target day ordinal."""
    if len(points) < 2:
        raise InvalidArgumentError("regression needs at least two points")
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    if min(xs) == max(xs):
        raise InvalidArgumentError("regression needs at least two distinct x values")
    fit = statistics.linear_regression(xs, ys)
    return fit.intercept + fit.slope * target_x


def percent_error(actual: float, predicted: float) -> float:
    """Signed prediction error as a percentage of the actual value."""
    if actual == 0:
        raise InvalidArgumentError("percent error is undefined for actual = 0")
    return 100.0 * (predicted - actual) / actual


def pearson(a: Sequence[float], b: Sequence[float]) -> float:
    """Sample Pearson correlation coefficient of two equal-length series."""
    if len(a) != len(b):
        raise InvalidArgumentError(
            f"correlation needs equal lengths, got {len(a)} and {len(b)}"
        )
    if len(a) < 2:
        raise InvalidArgumentError("correlation needs at least two pairs")
    try:
        return statistics.correlation(a, b)
    except statistics.StatisticsError as exc:
        raise InvalidArgumentError(str(exc)) from None


def stddev(values: Sequence[float]) -> float:
    """Population standard deviation (divide by N)."""
    if not values:
        raise InvalidArgumentError("standard deviation needs at least one value")
    return statistics.pstdev(values)


def _history_values(
    history: Mapping[date, float], dates: Sequence[date]
) -> list[float]:
    missing = [d for d in dates if d not in history]
    if missing:
        raise MissingHistoryError(missing)
    return [history[d] for d in dates]


def predict_daily(spec: PredictionSpec, history: Mapping[date, float]) -> float:
    """Predict one day's score from a daily-score history."""
    dates = select_history_dates(spec.selector, spec.target_date)
    values = _history_values(history, dates)
    if spec.technique == EP:
        return ep_predict(values)
    points = [SeriesPoint(d.toordinal(), y) for d, y in zip(dates, values)]
    return rp_predict(points, spec.target_date.toordinal())


def weekly_predict(
    spec: PredictionSpec, history: Mapping[date, float]
) -> list[tuple[date, float]]:
    """Predict 7 consecutive days starting at the spec's target date,
    each independently from its own selected history."""
    out = []
    for offset in range(7):
        day = spec.target_date + timedelta(days=offset)
        day_spec = PredictionSpec(spec.technique, spec.selector, day)
        out.append((day, predict_daily(day_spec, history)))
    return out


def _bucket_pattern(phrase: Sequence[str], start: int, n: int) -> str:
    k = len(phrase)
    tokens = [PLACEHOLDER] * (start - 1) + list(phrase) + [PLACEHOLDER] * (n - k - start + 1)
    return " ".join(tokens)


def ngram_event_scan(
    corpus: Iterable[NGramRecord],
    phrase: Sequence[str],
    case_fold: bool = False,
) -> EventReport:
    """Count the n-grams containing a phrase as a contiguous token run.

    One bucket per possible start position; an n-gram containing the
    phrase at several positions counts once per position.  The corpus
    total is the number of records (each record is a distinct n-gram).
    """
    phrase_tokens = tuple(phrase)
    if not phrase_tokens:
        raise InvalidArgumentError("phrase must contain at least one token")
    needle = tuple(t.casefold() for t in phrase_tokens) if case_fold else phrase_tokens
    k = len(needle)

    n: Optional[int] = None
    distinct: list[int] = []
    totals: list[int] = []
    corpus_distinct = 0
    for record in corpus:
        tokens = tuple(record.tokens)
        if n is None:
            n = len(tokens)
            if k > n:
                raise InvalidArgumentError(
                    f"phrase has {k} tokens but the corpus n-grams have {n}"
                )
            distinct = [0] * (n - k + 1)
            totals = [0] * (n - k + 1)
        elif len(tokens) != n:
            raise InvalidArgumentError(
                f"inconsistent n-gram length: expected {n} tokens, got {len(tokens)}"
            )
        corpus_distinct += 1
        haystack = tuple(t.casefold() for t in tokens) if case_fold else tokens
        for pos in range(n - k + 1):
            if haystack[pos : pos + k] == needle:
                distinct[pos] += 1
                totals[pos] += record.frequency

    if n is None:
        return EventReport(phrase=phrase_tokens, buckets=(), corpus_distinct=0)
    buckets = tuple(
        EventBucket(
            start=pos + 1,
            pattern=_bucket_pattern(phrase_tokens, pos + 1, n),
            distinct_count=distinct[pos],
            total_frequency=totals[pos],
        )
        for pos in range(n - k + 1)
    )
    return EventReport(phrase=phrase_tokens, buckets=buckets, corpus_distinct=corpus_distinct)
