"""Adoption scenarios: per-class charging policies, demand curves and peaks."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np

from . import charging
from .charging import ChargingProfile, energy_matrix, session_energy
from .profiles import ALL_DAYS, DailyArrivalVector, parse_aggregation

# slots whose total is within this relative distance of the maximum count as tied
PEAK_RTOL = 1e-12


class Mode(str, enum.Enum):
    SLOW = "slow"
    RAPID = "rapid"


class ScenarioError(ValueError):
    """Malformed scenario file or inconsistent scenario configuration."""


class MissingVector(KeyError):
    def __str__(self):
        return f"no arrival vector for scenario class {self.args[0]!r}"


@dataclass(frozen=True)
class ChargePolicy:
    vessel_class: str
    mode: Mode
    profile: ChargingProfile
    sessions_per_arrival: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "mode", Mode(self.mode))
        if not (self.sessions_per_arrival >= 0 and math.isfinite(self.sessions_per_arrival)):
            raise ValueError("sessions_per_arrival must be a finite value >= 0")


DEFAULT_MODES = {
    "Fishing vessel": Mode.SLOW,
    "Trawler": Mode.SLOW,
    "Yacht": Mode.SLOW,
    "Sailing ship": Mode.SLOW,
    "Pusher/Tug": Mode.RAPID,
}


def default_policies(
    slow: ChargingProfile = charging.SLOW, rapid: ChargingProfile = charging.RAPID
) -> dict[str, ChargePolicy]:
    """Slow overnight-style charging for fishing and leisure craft, rapid top-ups for tugs."""
    profiles = {Mode.SLOW: slow, Mode.RAPID: rapid}
    return {k: ChargePolicy(k, m, profiles[m]) for k, m in DEFAULT_MODES.items()}


@dataclass(frozen=True)
class ScenarioConfig:
    adoption: Mapping[str, float]
    policies: Mapping[str, ChargePolicy]
    aggregation: str = ALL_DAYS

    def __post_init__(self):
        for k, f in self.adoption.items():
            if not 0.0 <= f <= 1.0:
                raise ScenarioError(f"adoption fraction for {k!r} must lie in [0, 1], got {f!r}")
            if k not in self.policies:
                raise ScenarioError(f"no charging policy for scenario class {k!r}")
        object.__setattr__(self, "aggregation", parse_aggregation(self.aggregation))

    @property
    def classes(self) -> list[str]:
        return list(self.adoption)

    def scaled(self, c: float) -> "ScenarioConfig":
        return replace(self, adoption={k: c * f for k, f in self.adoption.items()})


@dataclass(frozen=True, eq=False)
class DemandCurve:
    """Representative-day demand in kW per hour slot."""

    per_class: dict[str, np.ndarray]
    total: np.ndarray
    peak_kw: float
    peak_slots: tuple[int, ...]

    @property
    def energy_kwh(self) -> float:
        return math.fsum(self.total)


def peak(curve) -> tuple[float, tuple[int, ...]]:
    """Maximum of a 24-slot curve and every slot attaining it, ascending."""
    values = np.asarray(curve, dtype=float)
    top = float(values.max())
    cutoff = top - PEAK_RTOL * abs(top)
    return top, tuple(int(h) for h in np.flatnonzero(values >= cutoff))


def class_demand(arrivals: DailyArrivalVector, policy: ChargePolicy, fraction: float) -> np.ndarray:
    """Expected demand of one class: every arrival starts a session at the top of its hour."""
    if not 0.0 <= fraction <= 1.0:
        raise ValueError(f"fraction must lie in [0, 1], got {fraction!r}")
    per_fleet = policy.sessions_per_arrival * (arrivals.mean_arrivals @ energy_matrix(policy.profile))
    return fraction * per_fleet


def total_demand(cfg: ScenarioConfig, vectors: Mapping[str, DailyArrivalVector]) -> DemandCurve:
    per_class = {}
    for k in cfg.classes:
        if k not in vectors:
            raise MissingVector(k)
        per_class[k] = class_demand(vectors[k], cfg.policies[k], cfg.adoption[k])
    # fsum is exactly rounded, so the total does not depend on class order
    total = np.array([math.fsum(v[h] for v in per_class.values()) for h in range(charging.SLOTS)])
    peak_kw, slots = peak(total)
    return DemandCurve(per_class, total, peak_kw, slots)


def expected_energy(cfg: ScenarioConfig, vectors: Mapping[str, DailyArrivalVector]) -> float:
    """Daily energy implied by the scenario without going through the hourly breakdown."""
    return math.fsum(
        cfg.adoption[k]
        * cfg.policies[k].sessions_per_arrival
        * session_energy(cfg.policies[k].profile)
        * math.fsum(vectors[k].mean_arrivals)
        for k in cfg.classes
    )


# -- scenario files ----------------------------------------------------------

_PROFILE_KEYS = {"rated_kw": "rated_power_kw", "t1_h": "ramp_start_h", "t2_h": "ramp_end_h"}


@dataclass
class ScenarioFile:
    """Parsed ``key = value`` scenario before it is bound to concrete classes.

    ``adoption``, ``modes`` and ``sessions`` may carry a ``*`` entry that
    applies to every class without an explicit value.
    """

    adoption: dict[str, float] = field(default_factory=dict)
    modes: dict[str, Mode] = field(default_factory=dict)
    sessions: dict[str, float] = field(default_factory=dict)
    slow: ChargingProfile = charging.SLOW
    rapid: ChargingProfile = charging.RAPID
    aggregation: str = ALL_DAYS

    def named_classes(self) -> list[str]:
        return [k for k in self.adoption if k != "*"]

    def resolve(self, classes: Iterable[str]) -> ScenarioConfig:
        """Bind the scenario to ``classes`` (the classes present in the data)."""
        classes = list(classes)
        adoption = {k: v for k, v in self.adoption.items() if k != "*"}
        if "*" in self.adoption:
            for k in classes:
                adoption.setdefault(k, self.adoption["*"])
        profiles = {Mode.SLOW: self.slow, Mode.RAPID: self.rapid}
        policies = {}
        for k in adoption:
            mode = self.modes.get(k, self.modes.get("*", DEFAULT_MODES.get(k)))
            if mode is None:
                raise ScenarioError(f"no charging mode for class {k!r}; add 'mode.{k} = slow|rapid'")
            spa = self.sessions.get(k, self.sessions.get("*", 1.0))
            policies[k] = ChargePolicy(k, mode, profiles[mode], spa)
        return ScenarioConfig(adoption, policies, self.aggregation)


def _number(key: str, value: str, lineno: int) -> float:
    try:
        x = float(value)
    except ValueError:
        raise ScenarioError(f"line {lineno}: {key} expects a number, got {value!r}") from None
    if not math.isfinite(x):
        raise ScenarioError(f"line {lineno}: {key} must be finite")
    return x


def parse_scenario(text: str) -> ScenarioFile:
    """Parse a scenario file. Blank lines and ``#`` comments are ignored."""
    sf = ScenarioFile()
    profile_fields: dict[str, dict[str, float]] = {"slow": {}, "rapid": {}}
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ScenarioError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key in seen:
            raise ScenarioError(f"line {lineno}: duplicate key {key!r}")
        seen.add(key)
        head, _, rest = key.partition(".")
        if head == "adoption" and rest:
            f = _number(key, value, lineno)
            if not 0.0 <= f <= 1.0:
                raise ScenarioError(f"line {lineno}: adoption fraction must lie in [0, 1], got {value}")
            sf.adoption[rest] = f
        elif head == "mode" and rest:
            try:
                sf.modes[rest] = Mode(value.lower())
            except ValueError:
                raise ScenarioError(f"line {lineno}: mode must be slow or rapid, got {value!r}") from None
        elif head == "sessions" and rest:
            s = _number(key, value, lineno)
            if s < 0:
                raise ScenarioError(f"line {lineno}: sessions per arrival must be >= 0")
            sf.sessions[rest] = s
        elif head in profile_fields and rest in _PROFILE_KEYS:
            profile_fields[head][_PROFILE_KEYS[rest]] = _number(key, value, lineno)
        elif key == "aggregation":
            try:
                sf.aggregation = parse_aggregation(value)
            except ValueError as exc:
                raise ScenarioError(f"line {lineno}: {exc}") from None
        else:
            raise ScenarioError(f"line {lineno}: unknown key {key!r}")
    try:
        sf.slow = replace(charging.SLOW, **profile_fields["slow"])
        sf.rapid = replace(charging.RAPID, **profile_fields["rapid"])
    except ValueError as exc:
        raise ScenarioError(f"invalid charging profile: {exc}") from None
    return sf


def load_scenario(path: str | Path) -> ScenarioFile:
    return parse_scenario(Path(path).read_text(encoding="utf-8"))
