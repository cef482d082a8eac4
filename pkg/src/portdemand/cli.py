"""Command-line interface: ``synth``, ``summary``, ``profile`` and ``demand``."""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import sys
from dataclasses import dataclass, field
from datetime import date
from pathlib import Path

import numpy as np

from . import __version__
from .ingest import FilterConfig, MissingHeader, filter_calls, filter_stages, read_port_calls
from .profiles import (
    ALL_DAYS,
    AGGREGATIONS,
    DailyArrivalVector,
    UnknownClass,
    build_arrival_profile,
    daily_arrival_vector,
    export_profile_csv,
)
from .scenario import DemandCurve, MissingVector, ScenarioError, ScenarioFile, load_scenario, total_demand
from .synthgen import SynthSpec, generate_csv

FIGURE_FORMATS = ("svg", "png", "pdf")


class CommandError(RuntimeError):
    def __init__(self, message: str, exit_code: int = 2):
        super().__init__(message)
        self.exit_code = exit_code


@dataclass
class RunManifest:
    command: str
    input_path: str | None
    input_sha256: str | None
    filter_config: dict
    scenario: str | None
    output_dir: str
    emitted: list[str] = field(default_factory=list)
    tool_version: str = __version__

    def write(self, path: Path) -> None:
        path.write_text(json.dumps(self.__dict__, indent=2) + "\n", encoding="utf-8")


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _fmt(x: float) -> str:
    return repr(float(x))


def demand_csv(curve: DemandCurve) -> str:
    """``hour,<class...>,total_kw`` with 24 rows; values round-trip exactly."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    classes = list(curve.per_class)
    w.writerow(["hour", *classes, "total_kw"])
    for h in range(24):
        w.writerow([h, *(_fmt(curve.per_class[k][h]) for k in classes), _fmt(curve.total[h])])
    return buf.getvalue()


def _filter_config(args) -> FilterConfig:
    try:
        return FilterConfig(args.window_start, args.window_end, args.max_length, args.min_freq)
    except ValueError as exc:
        raise CommandError(f"invalid filter settings: {exc}") from None


def _load(args, cfg: FilterConfig):
    try:
        calls, errors = read_port_calls(args.input)
    except MissingHeader as exc:
        raise CommandError(f"{args.input}: {exc}") from None
    if errors:
        print(f"warning: {len(errors)} malformed row(s) in {args.input} skipped", file=sys.stderr)
        for e in errors[:5]:
            print(f"  line {e.line}: {e.reason}", file=sys.stderr)
    kept, table = filter_calls(calls, cfg)
    return calls, errors, kept, table


def cmd_synth(args) -> int:
    text = generate_csv(SynthSpec(seed=args.seed))
    out = Path(args.output)
    out.write_text(text, encoding="utf-8", newline="")
    calls, _, _, table = _load(argparse.Namespace(input=out), _filter_config(args))
    print(f"wrote {len(calls)} calls to {out}")
    print(table.format())
    return 0


def cmd_summary(args) -> int:
    cfg = _filter_config(args)
    calls, errors, kept, table = _load(args, cfg)
    stages = filter_stages(calls, cfg)
    print(f"rows parsed:           {stages['parsed']}")
    print(f"malformed rows:        {len(errors)}")
    print(f"in window:             {stages['in_window']}")
    print(f"under {cfg.max_length_m:g} m:            {stages['under_length']} ({stages['types_under_length']} types)")
    print(f"types >= {cfg.min_type_frequency} calls:      {stages['frequent']} ({stages['types_frequent']} types)")
    print()
    print(table.format())
    return 0


def cmd_profile(args) -> int:
    cfg = _filter_config(args)
    _, _, kept, table = _load(args, cfg)
    try:
        prof = build_arrival_profile(kept, args.vessel_class, cfg.window, allow_empty=args.allow_empty)
    except UnknownClass as exc:
        raise CommandError(
            f"unknown vessel class {args.vessel_class!r}; available classes: " + ", ".join(table.classes)
        ) from None
    text = export_profile_csv(prof, args.aggregation)
    if args.output in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(args.output).write_text(text, encoding="utf-8", newline="")
        print(f"wrote {args.output} ({prof.total} arrivals)", file=sys.stderr)
    if args.figure:
        from .plotting import plot_arrival_profile

        plot_arrival_profile(prof, args.figure)
    return 0


def _scenario(args) -> ScenarioFile:
    if args.scenario:
        try:
            return load_scenario(args.scenario)
        except ScenarioError as exc:
            raise CommandError(f"{args.scenario}: {exc}") from None
    if args.adoption is not None:
        if not 0.0 <= args.adoption <= 1.0:
            raise CommandError("--adoption must lie in [0, 1]")
        return ScenarioFile(adoption={"*": args.adoption})
    raise CommandError("demand needs --scenario FILE or --adoption FRACTION")


def _formats(values) -> list[str]:
    out = []
    for v in values or ["csv"]:
        for f in v.split(","):
            f = f.strip().lower()
            if f != "csv" and f not in FIGURE_FORMATS:
                raise CommandError(f"unknown output format {f!r}")
            if f and f not in out:
                out.append(f)
    return out


def cmd_demand(args) -> int:
    cfg = _filter_config(args)
    formats = _formats(args.format)
    sf = _scenario(args)
    _, _, kept, table = _load(args, cfg)
    try:
        scen = sf.resolve(table.classes)
    except ScenarioError as exc:
        raise CommandError(str(exc)) from None

    vectors: dict[str, DailyArrivalVector] = {}
    for k in table.classes:
        prof = build_arrival_profile(kept, k, cfg.window, allow_empty=True)
        vectors[k] = daily_arrival_vector(prof, scen.aggregation)
    if not kept:
        print("warning: no calls survive the filters; demand is zero", file=sys.stderr)
        vectors = {k: DailyArrivalVector(k, np.zeros(24), scen.aggregation) for k in scen.classes}
    try:
        curve = total_demand(scen, vectors)
    except MissingVector as exc:
        raise CommandError(f"{exc}; classes in the filtered data: " + ", ".join(table.classes)) from None

    out_dir = Path(args.output)
    out_dir.mkdir(parents=True, exist_ok=True)
    manifest = RunManifest(
        command="demand",
        input_path=str(args.input),
        input_sha256=_sha256(Path(args.input)),
        filter_config={
            "window_start": cfg.window_start.isoformat(),
            "window_end": cfg.window_end.isoformat(),
            "max_length_m": cfg.max_length_m,
            "min_type_frequency": cfg.min_type_frequency,
        },
        scenario=str(args.scenario) if args.scenario else f"adoption.* = {args.adoption}",
        output_dir=str(out_dir),
    )
    if "csv" in formats:
        (out_dir / "demand.csv").write_text(demand_csv(curve), encoding="utf-8", newline="")
        manifest.emitted.append("demand.csv")
    figs = [f for f in formats if f in FIGURE_FORMATS]
    if figs:
        from .plotting import plot_demand

        for f in figs:
            plot_demand(curve, out_dir / f"demand.{f}", title="Charging demand by vessel type")
            manifest.emitted.append(f"demand.{f}")
    manifest.write(out_dir / "manifest.json")

    slots = ", ".join(f"{h:02d}:00" for h in curve.peak_slots)
    print(f"peak_kw = {curve.peak_kw!r}")
    print(f"peak_slots = {list(curve.peak_slots)}")
    print(f"peak demand {curve.peak_kw / 1000:.3f} MW at {slots}")
    print(f"daily energy {curve.energy_kwh / 1000:.3f} MWh")
    return 0


def _filter_flags(parser, suppress: bool) -> None:
    d = FilterConfig()

    def default(v):
        return argparse.SUPPRESS if suppress else v

    parser.add_argument("--window-start", type=date.fromisoformat, default=default(d.window_start),
                        help="first date kept (default %(default)s)" if not suppress else argparse.SUPPRESS)
    parser.add_argument("--window-end", type=date.fromisoformat, default=default(d.window_end),
                        help="last date kept (default %(default)s)" if not suppress else argparse.SUPPRESS)
    parser.add_argument("--max-length", type=float, default=default(d.max_length_m),
                        help="keep vessels strictly shorter than this, m (default %(default)s)"
                        if not suppress else argparse.SUPPRESS)
    parser.add_argument("--min-freq", type=int, default=default(d.min_type_frequency),
                        help="keep vessel types with at least this many calls (default %(default)s)"
                        if not suppress else argparse.SUPPRESS)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="portdemand", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    _filter_flags(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _filter_flags(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", parents=[common], help="write the synthetic port-call CSV")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("summary", parents=[common], help="filter statistics and vessel-type table")
    p.add_argument("input")
    p.set_defaults(func=cmd_summary)

    p = sub.add_parser("profile", parents=[common], help="export one class's arrival counts")
    p.add_argument("input")
    p.add_argument("--class", dest="vessel_class", required=True)
    p.add_argument("--aggregation", default=ALL_DAYS, choices=AGGREGATIONS)
    p.add_argument("-o", "--output", help="CSV path (default stdout)")
    p.add_argument("--allow-empty", action="store_true")
    p.add_argument("--figure", help="also render the profile to this image file")
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("demand", parents=[common], help="simulate the daily demand curve")
    p.add_argument("input")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--scenario", help="key = value scenario file")
    g.add_argument("--adoption", type=float, help="same adoption fraction for every class")
    p.add_argument("-o", "--output", required=True, help="output directory")
    p.add_argument("--format", action="append",
                   help="csv, svg, png or pdf; repeat or comma-separate (default csv)")
    p.set_defaults(func=cmd_demand)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CommandError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
