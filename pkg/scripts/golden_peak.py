"""Recompute the golden demand curve for the bundled dataset, one session at a time.

Deliberately shares no code with the package: it re-reads the CSV with the
csv module, applies the three filters itself and integrates every
individual charging session with scipy's adaptive quadrature.

    python scripts/golden_peak.py src/portdemand/data/synthetic_2019.csv tests/data/golden_peak.json
"""

import csv
import json
import math
import sys
from collections import Counter
from datetime import date, datetime

from scipy.integrate import quad

SLOW = (75.0, 3.0, 4.0)
RAPID = (150.0, 1.0, 1.0)
MODES = {
    "Fishing vessel": SLOW,
    "Trawler": SLOW,
    "Yacht": SLOW,
    "Sailing ship": SLOW,
    "Pusher/Tug": RAPID,
}
START, END = date(2019, 1, 1), date(2019, 12, 31)


def power(t, pr, t1, t2):
    if 0 < t <= t1:
        return pr
    if t1 < t <= t2:
        return pr * (t2 - t) / (t2 - t1)
    return 0.0


def session(start_hour, pr, t1, t2):
    """Energy drawn in each absolute hour slot by one session."""
    out = [0.0] * 24
    k = 0
    while k < t2:
        breaks = [b for b in (t1, t2) if k < b < k + 1]
        e, _ = quad(power, k, k + 1, args=(pr, t1, t2), points=breaks or None, epsabs=1e-13, epsrel=1e-13)
        out[(start_hour + k) % 24] += e
        k += 1
    return out


def main(src, dst):
    with open(src, newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    kept = []
    for r in rows:
        ts = datetime.strptime(r["arrival_utc"], "%Y-%m-%dT%H:%M:%SZ")
        if START <= ts.date() <= END and float(r["length_m"]) < 25.0:
            kept.append((r["vessel_type"], ts.hour))
    freq = Counter(k for k, _ in kept)
    kept = [(k, h) for k, h in kept if freq[k] >= 500]
    days = (END - START).days + 1

    total = [0.0] * 24
    for cls, hour in kept:
        for slot, e in enumerate(session(hour, *MODES[cls])):
            total[slot] += e / days
    peak = max(total)
    result = {
        "sessions": len(kept),
        "total_kw": total,
        "peak_kw": peak,
        "peak_slots": [h for h, v in enumerate(total) if v == peak],
        "daily_energy_kwh": math.fsum(total),
    }
    with open(dst, "w", encoding="utf-8") as fh:
        json.dump(result, fh, indent=2)
        fh.write("\n")
    print(f"{len(kept)} sessions, peak {peak!r} kW at {result['peak_slots']}")


if __name__ == "__main__":
    main(*sys.argv[1:3])
