import csv
import json
import math
import subprocess
import sys
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from portdemand.cli import main

TABLE_1 = {"Sailing ship": 2056, "Fishing vessel": 1655, "Pusher/Tug": 1546, "Yacht": 1176, "Trawler": 553}


def read_demand(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], rows[1:]
    return header, np.array([[float(x) for x in r[1:]] for r in body])


def write(path, text):
    path.write_text(text)
    return path


@pytest.fixture
def synth_csv(tmp_path):
    out = tmp_path / "calls.csv"
    assert main(["synth", "--seed", "42", "-o", str(out)]) == 0
    return out


def test_synth_prints_table(tmp_path, capsys, bundled_path):
    out = tmp_path / "calls.csv"
    assert main(["synth", "--seed", "42", "-o", str(out)]) == 0
    printed = capsys.readouterr().out
    for k, n in TABLE_1.items():
        assert k in printed and str(n) in printed
    assert out.read_bytes() == bundled_path.read_bytes()


def test_synth_unwritable_path(tmp_path, capsys):
    assert main(["synth", "-o", str(tmp_path / "missing" / "dir" / "calls.csv")]) != 0
    assert "error" in capsys.readouterr().err


def test_summary(bundled_path, capsys):
    assert main(["summary", str(bundled_path)]) == 0
    out = capsys.readouterr().out
    assert "9469 (31 types)" in out and "6986 (5 types)" in out


def test_global_filter_flags(bundled_path, capsys):
    assert main(["--min-freq", "1000", "summary", str(bundled_path)]) == 0
    out = capsys.readouterr().out
    assert "Trawler" not in out and "Yacht" in out
    assert main(["summary", "--max-length", "10", str(bundled_path)]) == 0


def test_profile_trawler_total(bundled_path, tmp_path):
    out = tmp_path / "trawler.csv"
    fig = tmp_path / "trawler.png"
    assert main(["profile", str(bundled_path), "--class", "Trawler", "-o", str(out), "--figure", str(fig)]) == 0
    with open(out, newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert sum(int(r["count"]) for r in rows) == 553
    keys = [(int(r["dow"]), int(r["hour"])) for r in rows]
    assert keys == sorted(keys)
    assert fig.stat().st_size > 0


def test_profile_misspelled_class(bundled_path, capsys):
    assert main(["profile", str(bundled_path), "--class", "Trawlr"]) != 0
    err = capsys.readouterr().err
    for k in TABLE_1:
        assert k in err


def test_profile_empty_input(tmp_path, capsys):
    empty = write(tmp_path / "empty.csv", "vessel_id,vessel_type,length_m,arrival_utc\n")
    out = tmp_path / "p.csv"
    assert main(["profile", str(empty), "--class", "Trawler", "--allow-empty", "-o", str(out)]) == 0
    assert out.read_text() == "class,dow,hour,count\n"
    assert main(["profile", str(empty), "--class", "Trawler"]) != 0


def test_demand_full_adoption_conservation(synth_csv, tmp_path, capsys):
    scen = write(tmp_path / "all.txt", "adoption.* = 1.0\n")
    out = tmp_path / "out"
    assert main(["demand", str(synth_csv), "--scenario", str(scen), "-o", str(out), "--format", "csv,svg"]) == 0
    printed = capsys.readouterr().out
    header, values = read_demand(out / "demand.csv")
    assert header[0] == "hour" and header[-1] == "total_kw"
    assert set(header[1:-1]) == set(TABLE_1)
    assert values.shape == (24, 6)
    # conservation: column sums equal fraction x session energy x daily arrivals
    energy = {"Pusher/Tug": 150.0}
    for j, k in enumerate(header[1:-1]):
        expected = energy.get(k, 262.5) * TABLE_1[k] / 365
        assert math.fsum(values[:, j]) == pytest.approx(expected, rel=1e-9)
    assert math.fsum(values[:, -1]) == pytest.approx(sum(energy.get(k, 262.5) * n / 365 for k, n in TABLE_1.items()), rel=1e-9)
    assert "peak_kw" in printed and "peak_slots = [17]" in printed and "MW" in printed
    root = ET.parse(out / "demand.svg").getroot()
    assert root.tag.endswith("svg")
    svg_text = (out / "demand.svg").read_text()
    assert "Total" in svg_text and "Pusher/Tug" in svg_text
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["emitted"] == ["demand.csv", "demand.svg"]
    assert len(manifest["input_sha256"]) == 64


def test_demand_zero_adoption(synth_csv, tmp_path):
    scen = write(tmp_path / "none.txt", "adoption.* = 0.0\n")
    assert main(["demand", str(synth_csv), "--scenario", str(scen), "-o", str(tmp_path / "o")]) == 0
    _, values = read_demand(tmp_path / "o" / "demand.csv")
    assert not values.any()


def test_demand_four_adoption_levels_are_scalar_multiples(synth_csv, tmp_path):
    curves = {}
    for f in (0.1, 0.25, 0.5, 1.0):
        out = tmp_path / f"o{f}"
        assert main(["demand", str(synth_csv), "--adoption", str(f), "-o", str(out)]) == 0
        curves[f] = read_demand(out / "demand.csv")[1]
    for f in (0.1, 0.25, 0.5):
        np.testing.assert_allclose(curves[f], f * curves[1.0], rtol=1e-12, atol=0)


def test_demand_errors(synth_csv, tmp_path, capsys):
    bad = write(tmp_path / "bad.txt", "adoption.Yacht = 0.5\nspeed = 12\n")
    assert main(["demand", str(synth_csv), "--scenario", str(bad), "-o", str(tmp_path / "o")]) == 2
    assert "unknown key" in capsys.readouterr().err
    missing = write(tmp_path / "missing.txt", "adoption.Dredger = 0.5\nmode.Dredger = slow\n")
    assert main(["demand", str(synth_csv), "--scenario", str(missing), "-o", str(tmp_path / "o")]) == 2
    assert "Dredger" in capsys.readouterr().err
    nomode = write(tmp_path / "nomode.txt", "adoption.Dredger = 0.5\n")
    assert main(["demand", str(synth_csv), "--scenario", str(nomode), "-o", str(tmp_path / "o")]) == 2
    assert main(["demand", str(synth_csv), "-o", str(tmp_path / "o")]) == 2


def test_demand_empty_filtered_dataset(synth_csv, tmp_path, capsys):
    out = tmp_path / "o"
    argv = ["--window-start", "2030-01-01", "--window-end", "2030-12-31",
            "demand", str(synth_csv), "--adoption", "1", "-o", str(out)]
    assert main(argv) == 0
    assert "warning" in capsys.readouterr().err
    header, values = read_demand(out / "demand.csv")
    assert header == ["hour", "total_kw"] and not values.any()


def test_demand_weekday_aggregation(synth_csv, tmp_path):
    scen = write(tmp_path / "sat.txt", "adoption.* = 1.0\naggregation = sat\n")
    assert main(["demand", str(synth_csv), "--scenario", str(scen), "-o", str(tmp_path / "o")]) == 0
    header, values = read_demand(tmp_path / "o" / "demand.csv")
    assert values[:, -1].max() > 0


def test_module_entry_point(bundled_path):
    res = subprocess.run([sys.executable, "-m", "portdemand", "summary", str(bundled_path)],
                         capture_output=True, text=True, check=True)
    assert "Sailing ship" in res.stdout
