"""Port-call CSV parsing and the window / length / type-frequency filters."""

from __future__ import annotations

import re
from decimal import Decimal
from collections import Counter
from dataclasses import dataclass
from datetime import date, datetime, timedelta, timezone
from pathlib import Path
from typing import Iterable, TextIO

HEADER = ("vessel_id", "vessel_type", "length_m", "arrival_utc")

_DECIMAL = re.compile(r"^(\d+(\.\d*)?|\.\d+)$")
_TIMESTAMP = re.compile(
    r"^(\d{4})-(\d{2})-(\d{2})[Tt](\d{2}):(\d{2})(?::(\d{2})(\.\d+)?)?"
    r"([Zz]|[+-]\d{2}:\d{2})$"
)


class MissingHeader(ValueError):
    """The input does not start with the expected port-call header."""


@dataclass(frozen=True)
class PortCall:
    vessel_id: str
    vessel_class: str
    length_m: float
    arrival_utc: datetime

    def __post_init__(self):
        if not self.length_m > 0:
            raise ValueError(f"length_m must be positive, got {self.length_m!r}")
        if self.arrival_utc.tzinfo is None:
            raise ValueError("arrival_utc must be timezone-aware")


@dataclass(frozen=True)
class RowError:
    """A malformed input row. ``line`` is the 1-based line number in the file."""

    line: int
    reason: str
    raw: str = ""


@dataclass(frozen=True)
class FilterConfig:
    window_start: date = date(2019, 1, 1)
    window_end: date = date(2019, 12, 31)
    max_length_m: float = 25.0
    min_type_frequency: int = 500

    def __post_init__(self):
        if self.window_start > self.window_end:
            raise ValueError("window_start must not be after window_end")
        if not self.max_length_m > 0:
            raise ValueError("max_length_m must be positive")
        if self.min_type_frequency < 0:
            raise ValueError("min_type_frequency must be >= 0")

    @property
    def window(self) -> tuple[date, date]:
        return self.window_start, self.window_end


@dataclass(frozen=True)
class TypeFrequencyTable:
    """(class, count) pairs sorted by descending count, then label."""

    entries: tuple[tuple[str, int], ...]

    @classmethod
    def from_calls(cls, calls: Iterable[PortCall]) -> "TypeFrequencyTable":
        counts = Counter(c.vessel_class for c in calls)
        return cls(tuple(sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))))

    @property
    def classes(self) -> list[str]:
        return [label for label, _ in self.entries]

    @property
    def total(self) -> int:
        return sum(n for _, n in self.entries)

    def as_dict(self) -> dict[str, int]:
        return dict(self.entries)

    def __len__(self):
        return len(self.entries)

    def format(self) -> str:
        width = max([len("Vessel type")] + [len(k) for k, _ in self.entries])
        lines = [f"{'Vessel type':<{width}}  Frequency"]
        lines += [f"{k:<{width}}  {n:>9d}" for k, n in self.entries]
        return "\n".join(lines)


def parse_timestamp(text: str) -> datetime:
    """Parse an RFC 3339 timestamp and return it as an aware UTC datetime.

    Offsets other than ``Z`` are accepted and converted.
    """
    m = _TIMESTAMP.match(text)
    if m is None:
        raise ValueError(f"unparseable timestamp {text!r}")
    year, month, day, hour, minute = (int(m.group(i)) for i in range(1, 6))
    second = int(m.group(6) or 0)
    frac = m.group(7)
    micro = int(round(float(frac) * 1_000_000)) if frac else 0
    micro = min(micro, 999_999)
    offset = m.group(8)
    if offset in ("Z", "z"):
        tz = timezone.utc
    else:
        sign = 1 if offset[0] == "+" else -1
        oh, om = int(offset[1:3]), int(offset[4:6])
        if oh > 23 or om > 59:
            raise ValueError(f"bad UTC offset in {text!r}")
        tz = timezone(sign * timedelta(hours=oh, minutes=om))
    # datetime() validates the calendar fields (month 13, Feb 30, hour 24 ...)
    dt = datetime(year, month, day, hour, minute, second, micro, tzinfo=tz)
    return dt.astimezone(timezone.utc)


def format_timestamp(dt: datetime) -> str:
    dt = dt.astimezone(timezone.utc)
    spec = "seconds" if dt.microsecond == 0 else "microseconds"
    return dt.replace(tzinfo=None).isoformat(timespec=spec) + "Z"


def format_length(value: float) -> str:
    """Shortest round-tripping decimal, never in exponent notation."""
    return f"{Decimal(repr(float(value))):f}"


def _parse_row(fields: list[str]) -> PortCall:
    vessel_id, vessel_class, length_text, ts_text = fields
    if not vessel_id:
        raise ValueError("empty vessel_id")
    if not vessel_class:
        raise ValueError("empty vessel_type")
    if not _DECIMAL.match(length_text):
        raise ValueError(f"non-numeric length {length_text!r}")
    length = float(length_text)
    if length <= 0:
        raise ValueError(f"length must be positive, got {length_text!r}")
    return PortCall(vessel_id, vessel_class, length, parse_timestamp(ts_text))


def parse_port_calls(source: TextIO | Iterable[str]) -> tuple[list[PortCall], list[RowError]]:
    """Parse port-call CSV text.

    Returns the well-formed rows in input order and one ``RowError`` per
    malformed row. Raises ``MissingHeader`` if the first line is not the
    expected header. Quoting is not supported, so a field containing a
    comma shows up as a wrong column count.
    """
    lines = iter(source)
    try:
        first = next(lines)
    except StopIteration:
        raise MissingHeader("input is empty; expected header " + ",".join(HEADER)) from None
    header = first.lstrip("\ufeff").rstrip("\r\n")
    if tuple(header.split(",")) != HEADER:
        raise MissingHeader(f"expected header {','.join(HEADER)!r}, got {header!r}")

    calls: list[PortCall] = []
    errors: list[RowError] = []
    pending_blank: list[int] = []
    for lineno, line in enumerate(lines, start=2):
        text = line.rstrip("\r\n")
        if text == "":
            # blank lines only count as errors when followed by more data
            pending_blank.append(lineno)
            continue
        errors.extend(RowError(n, "empty row") for n in pending_blank)
        pending_blank.clear()
        fields = text.split(",")
        if len(fields) != len(HEADER):
            errors.append(RowError(lineno, f"wrong column count: expected 4, got {len(fields)}", text))
            continue
        try:
            calls.append(_parse_row(fields))
        except ValueError as exc:
            errors.append(RowError(lineno, str(exc), text))
    return calls, errors


def read_port_calls(path: str | Path) -> tuple[list[PortCall], list[RowError]]:
    with open(path, encoding="utf-8", newline="") as fh:
        return parse_port_calls(fh)


def serialize_port_calls(calls: Iterable[PortCall]) -> str:
    """Render calls in the input CSV format (LF line endings)."""
    out = [",".join(HEADER)]
    for c in calls:
        out.append(f"{c.vessel_id},{c.vessel_class},{format_length(c.length_m)},{format_timestamp(c.arrival_utc)}")
    return "\n".join(out) + "\n"


def filter_calls(
    calls: list[PortCall], cfg: FilterConfig = FilterConfig()
) -> tuple[list[PortCall], TypeFrequencyTable]:
    """Apply the date window, length cutoff and type-frequency cutoff in that order."""
    kept = [c for c in calls if cfg.window_start <= c.arrival_utc.date() <= cfg.window_end]
    kept = [c for c in kept if c.length_m < cfg.max_length_m]
    counts = Counter(c.vessel_class for c in kept)
    frequent = {k for k, n in counts.items() if n >= cfg.min_type_frequency}
    kept = [c for c in kept if c.vessel_class in frequent]
    return kept, TypeFrequencyTable.from_calls(kept)


def filter_stages(calls: list[PortCall], cfg: FilterConfig = FilterConfig()) -> dict[str, int]:
    """Call counts remaining after each filter stage, for summaries."""
    in_window = [c for c in calls if cfg.window_start <= c.arrival_utc.date() <= cfg.window_end]
    short = [c for c in in_window if c.length_m < cfg.max_length_m]
    final, table = filter_calls(calls, cfg)
    return {
        "parsed": len(calls),
        "in_window": len(in_window),
        "under_length": len(short),
        "types_under_length": len({c.vessel_class for c in short}),
        "frequent": len(final),
        "types_frequent": len(table),
    }
