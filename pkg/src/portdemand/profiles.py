"""Hour-of-day by day-of-week arrival counts and representative-day arrival vectors."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from datetime import date, timedelta
from typing import Iterable

import numpy as np

from .ingest import PortCall

ALL_DAYS = "alldays"
WEEKDAYS = ("mon", "tue", "wed", "thu", "fri", "sat", "sun")
AGGREGATIONS = (ALL_DAYS,) + WEEKDAYS

PROFILE_HEADER = ("class", "dow", "hour", "count")


class UnknownClass(LookupError):
    def __init__(self, vessel_class: str, available: Iterable[str] = ()):
        self.vessel_class = vessel_class
        self.available = sorted(available)
        msg = f"no calls for vessel class {vessel_class!r}"
        if self.available:
            msg += "; available classes: " + ", ".join(self.available)
        super().__init__(msg)

    def __str__(self):
        return self.args[0]


def parse_aggregation(text: str) -> str:
    key = text.strip().lower()
    if key not in AGGREGATIONS:
        raise ValueError(f"unknown aggregation {text!r}; expected one of {', '.join(AGGREGATIONS)}")
    return key


def weekday_counts(window: tuple[date, date]) -> np.ndarray:
    """Number of calendar dates falling on each weekday (Mon..Sun) in an inclusive window."""
    start, end = window
    n_days = (end - start).days + 1
    if n_days <= 0:
        raise ValueError("window end precedes start")
    full_weeks, rest = divmod(n_days, 7)
    out = np.full(7, full_weeks, dtype=np.int64)
    for k in range(rest):
        out[(start + timedelta(days=k)).weekday()] += 1
    return out


@dataclass(frozen=True, eq=False)
class ArrivalProfile:
    """Arrival counts for one vessel class.

    ``counts[d, h]`` is the number of arrivals on weekday ``d`` (0 = Monday)
    during hour ``h``; ``days_observed[d]`` is how many dates of weekday ``d``
    the observation window contains.
    """

    vessel_class: str
    counts: np.ndarray
    days_observed: np.ndarray

    def __post_init__(self):
        counts = np.array(self.counts, dtype=np.int64)
        days = np.array(self.days_observed, dtype=np.int64)
        if counts.shape != (7, 24) or days.shape != (7,):
            raise ValueError("counts must be 7x24 and days_observed length 7")
        if (counts < 0).any() or (days < 0).any():
            raise ValueError("counts and days_observed must be non-negative")
        counts.flags.writeable = False
        days.flags.writeable = False
        object.__setattr__(self, "counts", counts)
        object.__setattr__(self, "days_observed", days)

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    @property
    def total_days(self) -> int:
        return int(self.days_observed.sum())

    def __eq__(self, other):
        if not isinstance(other, ArrivalProfile):
            return NotImplemented
        return (
            self.vessel_class == other.vessel_class
            and np.array_equal(self.counts, other.counts)
            and np.array_equal(self.days_observed, other.days_observed)
        )

    __hash__ = None


@dataclass(frozen=True, eq=False)
class DailyArrivalVector:
    """Expected arrivals per hour slot on a representative day."""

    vessel_class: str
    mean_arrivals: np.ndarray
    aggregation: str = ALL_DAYS

    def __post_init__(self):
        v = np.array(self.mean_arrivals, dtype=float)
        if v.shape != (24,):
            raise ValueError("mean_arrivals must have 24 entries")
        if not np.isfinite(v).all() or (v < 0).any():
            raise ValueError("mean_arrivals must be finite and non-negative")
        v.flags.writeable = False
        object.__setattr__(self, "mean_arrivals", v)
        object.__setattr__(self, "aggregation", parse_aggregation(self.aggregation))


def build_arrival_profile(
    calls: Iterable[PortCall],
    vessel_class: str,
    window: tuple[date, date],
    allow_empty: bool = False,
) -> ArrivalProfile:
    start, end = window
    counts = np.zeros((7, 24), dtype=np.int64)
    seen = set()
    for call in calls:
        seen.add(call.vessel_class)
        if call.vessel_class != vessel_class:
            continue
        ts = call.arrival_utc
        if not start <= ts.date() <= end:
            raise ValueError(f"call {call.vessel_id} at {ts.isoformat()} lies outside the window")
        counts[ts.weekday(), ts.hour] += 1
    if not counts.any() and not allow_empty:
        raise UnknownClass(vessel_class, seen)
    return ArrivalProfile(vessel_class, counts, weekday_counts(window))


def build_arrival_profiles(
    calls: list[PortCall], window: tuple[date, date], classes: Iterable[str] | None = None
) -> dict[str, ArrivalProfile]:
    if classes is None:
        classes = sorted({c.vessel_class for c in calls})
    return {k: build_arrival_profile(calls, k, window, allow_empty=True) for k in classes}


def daily_arrival_vector(profile: ArrivalProfile, aggregation: str = ALL_DAYS) -> DailyArrivalVector:
    agg = parse_aggregation(aggregation)
    if agg == ALL_DAYS:
        days = profile.total_days
        hourly = profile.counts.sum(axis=0)
    else:
        d = WEEKDAYS.index(agg)
        days = int(profile.days_observed[d])
        hourly = profile.counts[d]
    if days == 0:
        mean = np.zeros(24)
    else:
        mean = hourly / days
    return DailyArrivalVector(profile.vessel_class, mean, agg)


def profile_rows(profile: ArrivalProfile, aggregation: str = ALL_DAYS) -> list[tuple[str, int, int, int]]:
    """Nonzero cells as (class, dow, hour, count), sorted by (dow, hour)."""
    agg = parse_aggregation(aggregation)
    days = range(7) if agg == ALL_DAYS else [WEEKDAYS.index(agg)]
    return [
        (profile.vessel_class, d, h, int(profile.counts[d, h]))
        for d in days
        for h in range(24)
        if profile.counts[d, h]
    ]


def export_profile_csv(profile: ArrivalProfile, aggregation: str = ALL_DAYS) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(PROFILE_HEADER)
    writer.writerows(profile_rows(profile, aggregation))
    return buf.getvalue()
