"""Seeded synthetic port-call generator.

The default spec produces a 2019 dataset whose filtered class frequencies
are 2056 / 1655 / 1546 / 1176 / 553 and whose hourly and weekly shapes
follow the qualitative harbour patterns the model assumes (evening returns
for the fishing fleet, a working-day spread for tugs, afternoon returns and
busy weekends for leisure craft). The shapes are invented; only the class
totals are pinned.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import date, datetime, timedelta, timezone
from importlib import resources

import numpy as np

from .ingest import PortCall, serialize_port_calls

YEAR_START = date(2019, 1, 1)
YEAR_END = date(2019, 12, 31)

COMMERCIAL_WEEK = (1.0, 1.0, 1.0, 1.0, 1.0, 0.55, 0.55)
LEISURE_WEEK = (0.8, 0.8, 0.8, 0.8, 0.9, 1.6, 1.6)

FISHING_HOURS = (
    0.15, 0.12, 0.1, 0.1, 0.12, 0.2, 0.8, 1.1, 0.9, 1.0, 1.2, 0.9,
    1.0, 1.1, 1.3, 2.2, 6.0, 8.0, 6.5, 2.0, 0.7, 0.5, 0.3, 0.2,
)
TRAWLER_HOURS = (
    0.12, 0.1, 0.1, 0.08, 0.1, 0.25, 0.9, 1.0, 0.8, 1.1, 1.0, 0.8,
    1.2, 1.0, 1.4, 2.5, 6.5, 7.5, 6.0, 1.8, 0.6, 0.4, 0.3, 0.2,
)
TUG_HOURS = (
    0.1, 0.08, 0.08, 0.08, 0.1, 0.4, 3.0, 3.5, 2.8, 3.2, 3.6, 2.9,
    3.1, 3.4, 2.7, 3.3, 3.0, 2.6, 1.5, 0.4, 0.3, 0.2, 0.15, 0.1,
)
YACHT_HOURS = (
    0.08, 0.06, 0.05, 0.05, 0.05, 0.08, 0.2, 0.4, 0.6, 0.7, 0.8, 0.9,
    1.6, 2.3, 3.0, 3.8, 4.2, 2.5, 1.5, 0.8, 0.4, 0.25, 0.15, 0.1,
)
SAILING_HOURS = (
    0.08, 0.06, 0.05, 0.05, 0.05, 0.08, 0.2, 0.5, 0.7, 0.8, 0.8, 0.9,
    0.9, 1.0, 2.5, 3.8, 4.5, 2.8, 1.6, 0.8, 0.4, 0.25, 0.15, 0.1,
)
DAYTIME_HOURS = tuple(0.2 if h < 6 or h > 20 else 1.0 for h in range(24))
FLAT_WEEK = (1.0,) * 7

# 26 further vessel types, each below the 500-call cut, adding up to 2483 calls
RARE_CLASSES = {
    "Pleasure craft": 488,
    "Passenger": 412,
    "Pilot vessel": 296,
    "Search and rescue": 231,
    "Law enforcement": 174,
    "Dive vessel": 133,
    "Port tender": 118,
    "Dredger": 97,
    "Military ops": 84,
    "Research vessel": 71,
    "Workboat": 63,
    "Survey vessel": 52,
    "Crew boat": 44,
    "Ferry": 37,
    "Landing craft": 31,
    "Patrol vessel": 26,
    "Other": 22,
    "Hovercraft": 18,
    "Barge": 15,
    "Buoy tender": 13,
    "Training ship": 11,
    "Whale watcher": 9,
    "Medical transport": 8,
    "Cable layer": 6,
    "Anti-pollution": 5,
    "Wing in ground": 19,
}


@dataclass(frozen=True)
class ClassTarget:
    count: int
    hourly: tuple[float, ...]
    weekday: tuple[float, ...]
    length_range: tuple[float, float] = (5.0, 24.0)

    def __post_init__(self):
        if self.count <= 0:
            raise ValueError("count must be positive")
        for name, w, n in (("hourly", self.hourly, 24), ("weekday", self.weekday, 7)):
            if len(w) != n or min(w) < 0 or sum(w) <= 0:
                raise ValueError(f"{name} weights need {n} non-negative entries with a positive sum")
        lo, hi = self.length_range
        if not 0 < lo <= hi:
            raise ValueError("length_range must satisfy 0 < lo <= hi")


def _default_targets() -> dict[str, ClassTarget]:
    return {
        "Sailing ship": ClassTarget(2056, SAILING_HOURS, LEISURE_WEEK, (6.0, 18.0)),
        "Fishing vessel": ClassTarget(1655, FISHING_HOURS, COMMERCIAL_WEEK, (6.0, 24.0)),
        "Pusher/Tug": ClassTarget(1546, TUG_HOURS, COMMERCIAL_WEEK, (10.0, 24.9)),
        "Yacht": ClassTarget(1176, YACHT_HOURS, LEISURE_WEEK, (8.0, 24.5)),
        "Trawler": ClassTarget(553, TRAWLER_HOURS, COMMERCIAL_WEEK, (10.0, 24.9)),
    }


@dataclass(frozen=True)
class SynthSpec:
    """Generator parameters.

    ``class_targets`` are the classes that survive the default filters.
    The filler calls are meant to be removed by them: ``rare_classes`` stay
    under the frequency cut, ``long_calls`` are 25 m or longer and
    ``outside_calls`` fall in 2018 or 2020.
    """

    seed: int = 42
    class_targets: dict[str, ClassTarget] = field(default_factory=_default_targets)
    rare_classes: dict[str, int] = field(default_factory=lambda: dict(RARE_CLASSES))
    long_calls: int = 900
    outside_calls: int = 600

    @property
    def filler(self) -> int:
        return sum(self.rare_classes.values()) + self.long_calls + self.outside_calls


def apportion(total: int, weights) -> np.ndarray:
    """Largest-remainder split of ``total`` into integer parts proportional to ``weights``.

    Remainder ties go to the lowest index, so the result is deterministic.
    """
    w = np.asarray(weights, dtype=float).ravel()
    if total == 0:
        return np.zeros(w.shape, dtype=np.int64)
    quota = total * w / w.sum()
    base = np.floor(quota).astype(np.int64)
    short = total - int(base.sum())
    order = np.lexsort((np.arange(w.size), -(quota - base)))
    base[order[:short]] += 1
    return base


def _dates_by_weekday(start: date, end: date) -> list[list[date]]:
    out: list[list[date]] = [[] for _ in range(7)]
    d = start
    while d <= end:
        out[d.weekday()].append(d)
        d += timedelta(days=1)
    return out


def _vessel_ids(rng: np.random.Generator, prefix: str, fleet: int, n: int) -> list[str]:
    return [f"{prefix}{i:04d}" for i in rng.integers(0, fleet, size=n)]


def _prefix(label: str) -> str:
    letters = "".join(ch for ch in label.upper() if ch.isalpha())
    return "SYN-" + letters[:4] + "-"


def _place(
    rng: np.random.Generator,
    label: str,
    target: ClassTarget,
    start: date,
    end: date,
    fleet: int,
) -> list[PortCall]:
    by_dow = _dates_by_weekday(start, end)
    days = np.array([len(x) for x in by_dow], dtype=float)
    cell_w = np.outer(np.asarray(target.weekday) * days, np.asarray(target.hourly))
    cells = apportion(target.count, cell_w).reshape(7, 24)
    lo, hi = target.length_range
    ids = _vessel_ids(rng, _prefix(label), fleet, target.count)
    calls = []
    for d in range(7):
        for h in range(24):
            n = int(cells[d, h])
            if n == 0:
                continue
            picks = rng.integers(0, len(by_dow[d]), size=n)
            minutes = rng.integers(0, 60, size=n)
            seconds = rng.integers(0, 60, size=n)
            lengths = np.round(rng.uniform(lo, hi, size=n), 1)
            for i in range(n):
                day = by_dow[d][picks[i]]
                ts = datetime(day.year, day.month, day.day, h, int(minutes[i]), int(seconds[i]), tzinfo=timezone.utc)
                length = min(max(float(lengths[i]), lo), hi)
                calls.append(PortCall(ids[len(calls)], label, length, ts))
    return calls


def generate(spec: SynthSpec = SynthSpec()) -> list[PortCall]:
    """Generate the synthetic calls, sorted by arrival time then vessel id."""
    rng = np.random.default_rng(spec.seed)
    calls: list[PortCall] = []
    for label, target in spec.class_targets.items():
        calls += _place(rng, label, target, YEAR_START, YEAR_END, max(1, target.count // 15))
    for label, n in spec.rare_classes.items():
        t = ClassTarget(n, DAYTIME_HOURS, FLAT_WEEK)
        calls += _place(rng, label, t, YEAR_START, YEAR_END, max(1, n // 10))

    labels = list(spec.class_targets) or ["Other"]
    if spec.long_calls:
        for k, n in zip(labels, apportion(spec.long_calls, np.ones(len(labels)))):
            if n:
                t = ClassTarget(int(n), DAYTIME_HOURS, FLAT_WEEK, (25.0, 60.0))
                calls += _place(rng, k, t, YEAR_START, YEAR_END, max(1, int(n) // 10))
    if spec.outside_calls:
        halves = apportion(spec.outside_calls, [1, 1])
        windows = [(date(2018, 1, 1), date(2018, 12, 31)), (date(2020, 1, 1), date(2020, 12, 31))]
        for (start, end), m in zip(windows, halves):
            for k, n in zip(labels, apportion(int(m), np.ones(len(labels)))):
                if n:
                    t = ClassTarget(int(n), DAYTIME_HOURS, FLAT_WEEK)
                    calls += _place(rng, k, t, start, end, max(1, int(n) // 10))

    calls.sort(key=lambda c: (c.arrival_utc, c.vessel_id, c.vessel_class, c.length_m))
    return calls


def generate_csv(spec: SynthSpec = SynthSpec()) -> str:
    return serialize_port_calls(generate(spec))


def bundled_dataset():
    """Path-like handle to the packaged seed-42 dataset (``synth --seed 42`` output)."""
    return resources.files("portdemand") / "data" / "synthetic_2019.csv"
