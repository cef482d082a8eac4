"""Piecewise-linear charging profile and its hourly energy breakdown.

A session draws the rated power until ``ramp_start_h`` and then tapers
linearly to zero at ``ramp_end_h``. Time ``t`` is measured in hours since
the session began.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

SLOTS = 24


@dataclass(frozen=True)
class ChargingProfile:
    rated_power_kw: float
    ramp_start_h: float
    ramp_end_h: float

    def __post_init__(self):
        if not (self.rated_power_kw > 0 and math.isfinite(self.rated_power_kw)):
            raise ValueError(f"rated_power_kw must be positive, got {self.rated_power_kw!r}")
        if not (0 <= self.ramp_start_h <= self.ramp_end_h and math.isfinite(self.ramp_end_h)):
            raise ValueError(
                f"need 0 <= ramp_start_h <= ramp_end_h, got {self.ramp_start_h!r}, {self.ramp_end_h!r}"
            )


SLOW = ChargingProfile(75.0, 3.0, 4.0)
RAPID = ChargingProfile(150.0, 1.0, 1.0)


@dataclass(frozen=True, eq=False)
class SessionEnergyVector:
    start_slot: int
    energy_kwh_by_slot: np.ndarray

    @property
    def total(self) -> float:
        return math.fsum(self.energy_kwh_by_slot)


def instantaneous_power(p: ChargingProfile, t):
    """Power draw in kW at elapsed time ``t`` (scalar or array)."""
    pr, t1, t2 = p.rated_power_kw, p.ramp_start_h, p.ramp_end_h
    if np.ndim(t) == 0:
        t = float(t)
        if 0 < t <= t1:
            return pr
        if t1 < t <= t2:
            return pr * (t2 - t) / (t2 - t1)
        return 0.0
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    out[(t > 0) & (t <= t1)] = pr
    if t2 > t1:
        ramp = (t > t1) & (t <= t2)
        out[ramp] = pr * (t2 - t[ramp]) / (t2 - t1)
    return out


def session_energy(p: ChargingProfile) -> float:
    """Energy delivered by one complete session, kWh."""
    pr, t1, t2 = p.rated_power_kw, p.ramp_start_h, p.ramp_end_h
    return pr * t1 + pr * (t2 - t1) / 2


def interval_energy(p: ChargingProfile, a: float, b: float) -> float:
    """Closed-form integral of the power draw over elapsed time [a, b], kWh."""
    pr, t1, t2 = p.rated_power_kw, p.ramp_start_h, p.ramp_end_h
    if b <= a:
        return 0.0
    flat = max(0.0, min(b, t1) - max(a, 0.0))
    energy = pr * flat
    lo, hi = max(a, t1), min(b, t2)
    if hi > lo:
        # mean of the two endpoint powers times the overlap length
        energy += pr * (hi - lo) * ((t2 - lo) + (t2 - hi)) / (2 * (t2 - t1))
    return energy


def hourly_energy_vector(p: ChargingProfile, start_slot: int) -> SessionEnergyVector:
    """Energy per hour slot for a session starting at the top of ``start_slot``.

    Contributions past midnight wrap onto the early slots of the same
    representative day.
    """
    if not 0 <= start_slot < SLOTS:
        raise ValueError(f"start_slot must be in 0..23, got {start_slot}")
    out = np.zeros(SLOTS)
    for k in range(math.ceil(p.ramp_end_h)):
        out[(start_slot + k) % SLOTS] += interval_energy(p, k, k + 1)
    return SessionEnergyVector(start_slot, out)


def energy_matrix(p: ChargingProfile) -> np.ndarray:
    """Row ``s`` is the hourly energy vector of a session starting in slot ``s``."""
    return np.stack([hourly_energy_vector(p, s).energy_kwh_by_slot for s in range(SLOTS)])
