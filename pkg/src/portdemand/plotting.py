"""Matplotlib renderings of arrival profiles and demand curves.

Figures are written straight to files; the Agg backend is forced so the
CLI works headless. SVG output is made reproducible by pinning the hash
salt and dropping the creation date, but callers should not rely on it
being byte-stable across matplotlib versions.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .profiles import WEEKDAYS, ArrivalProfile  # noqa: E402
from .scenario import DemandCurve  # noqa: E402

STYLE = {
    "font.size": 9,
    "axes.labelsize": 9,
    "axes.titlesize": 10,
    "legend.fontsize": 7,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "svg.hashsalt": "portdemand",
    "svg.fonttype": "none",
}

HOURS = np.arange(25)


def _metadata(path: Path) -> dict:
    if path.suffix.lower() == ".svg":
        return {"Date": None}
    if path.suffix.lower() == ".png":
        return {"Software": None}
    return {}


def _save(fig, path) -> Path:
    path = Path(path)
    fig.savefig(path, metadata=_metadata(path), bbox_inches="tight")
    plt.close(fig)
    return path


def _step(ax, values, **kw):
    # repeat the last value so slot 23 gets a full-width step
    v = np.asarray(values, dtype=float)
    ax.step(HOURS, np.append(v, v[-1]), where="post", **kw)


def plot_demand(curve: DemandCurve, path, title: str | None = None) -> Path:
    """Per-class and total demand as step curves over the 24 hour slots."""
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(6.4, 3.6))
        for label, values in curve.per_class.items():
            _step(ax, values, lw=1.0, label=label)
        _step(ax, curve.total, lw=2.0, color="k", label="Total")
        for h in curve.peak_slots:
            ax.axvspan(h, h + 1, color="0.85", zorder=0, lw=0)
        ax.set_xlim(0, 24)
        ax.set_xticks(range(0, 25, 3))
        ax.set_xlabel("Hour of day")
        ax.set_ylabel("Demand (kW)")
        ax.set_ylim(bottom=0)
        if title:
            ax.set_title(title)
        ax.legend(frameon=False, ncol=2)
        return _save(fig, path)


def plot_arrival_profile(profile: ArrivalProfile, path) -> Path:
    """Arrivals by hour of day, one line per weekday, plus the all-days mean."""
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(6.4, 3.6))
        for d, name in enumerate(WEEKDAYS):
            ls = "--" if d >= 5 else "-"
            ax.plot(range(24), profile.counts[d], ls=ls, lw=1.0, label=name.capitalize())
        ax.set_xlim(0, 23)
        ax.set_xticks(range(0, 24, 3))
        ax.set_xlabel("Hour of arrival")
        ax.set_ylabel("Number of arrivals")
        ax.set_title(profile.vessel_class)
        ax.legend(frameon=False, ncol=4)
        return _save(fig, path)
