import io
import math
from datetime import date, datetime, timezone

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from portdemand.ingest import (
    FilterConfig,
    MissingHeader,
    PortCall,
    TypeFrequencyTable,
    filter_calls,
    format_timestamp,
    parse_port_calls,
    parse_timestamp,
    serialize_port_calls,
)

HEADER = "vessel_id,vessel_type,length_m,arrival_utc\n"


def parse(body: str):
    return parse_port_calls(io.StringIO(HEADER + body))


def call(cls="Yacht", length=10.0, ts="2019-06-01T14:32:00Z", vid="V1"):
    return PortCall(vid, cls, length, parse_timestamp(ts))


def test_single_row_echoes_fields():
    calls, errors = parse("V1,Yacht,12.5,2019-06-01T14:32:00Z\n")
    assert errors == []
    assert calls == [PortCall("V1", "Yacht", 12.5, datetime(2019, 6, 1, 14, 32, tzinfo=timezone.utc))]


def test_empty_body():
    assert parse("") == ([], [])


def test_non_numeric_length_reports_line_two():
    calls, errors = parse("V2,Trawler,abc,2019-06-01T14:32:00Z\n")
    assert calls == []
    assert len(errors) == 1
    assert errors[0].line == 2
    assert "non-numeric length" in errors[0].reason


def test_crlf_and_bom_accepted():
    text = "\ufeff" + HEADER.replace("\n", "\r\n") + "V1,Yacht,12.5,2019-06-01T14:32:00Z\r\n"
    calls, errors = parse_port_calls(io.StringIO(text, newline=""))
    assert errors == [] and len(calls) == 1 and calls[0].length_m == 12.5


@pytest.mark.parametrize(
    "header",
    [
        "",
        "vessel_id,vessel_type,length_m\n",
        "vessel_id,length_m,vessel_type,arrival_utc\n",
        "id,type,length,time\n",
        "V1,Yacht,12.5,2019-06-01T14:32:00Z\n",
    ],
)
def test_missing_header(header):
    with pytest.raises(MissingHeader):
        parse_port_calls(io.StringIO(header))


def test_interior_blank_line_is_an_error_but_trailing_is_not():
    calls, errors = parse("V1,Yacht,12.5,2019-06-01T14:32:00Z\n\nV2,Yacht,3,2019-06-01T01:00:00Z\n\n")
    assert len(calls) == 2
    assert [e.line for e in errors] == [3]


def test_offset_timestamps_convert_to_utc():
    assert parse_timestamp("2019-06-01T01:30:00+02:00") == datetime(2019, 5, 31, 23, 30, tzinfo=timezone.utc)


def test_fractional_seconds_round_trip():
    ts = parse_timestamp("2019-06-01T14:32:05.25Z")
    assert format_timestamp(ts) == "2019-06-01T14:32:05.250000Z"
    assert parse_timestamp(format_timestamp(ts)) == ts


def test_defaults_match_published_pipeline():
    cfg = FilterConfig()
    assert (cfg.window_start, cfg.window_end) == (date(2019, 1, 1), date(2019, 12, 31))
    assert cfg.max_length_m == 25.0 and cfg.min_type_frequency == 500


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(window_start=date(2020, 1, 1), window_end=date(2019, 1, 1)),
        dict(max_length_m=0),
        dict(min_type_frequency=-1),
    ],
)
def test_invalid_filter_config(kwargs):
    with pytest.raises(ValueError):
        FilterConfig(**kwargs)


def test_length_cut_is_strict():
    cfg = FilterConfig(min_type_frequency=0)
    kept, _ = filter_calls([call(length=25.0), call(length=24.99)], cfg)
    assert [c.length_m for c in kept] == [24.99]


def test_window_is_inclusive_on_utc_date():
    cfg = FilterConfig(min_type_frequency=0)
    calls = [
        call(ts="2018-12-31T23:59:59Z"),
        call(ts="2019-01-01T00:00:00Z"),
        call(ts="2019-12-31T23:59:59Z"),
        call(ts="2020-01-01T00:00:00Z"),
        call(ts="2020-01-01T00:30:00+01:00"),  # 2019-12-31 23:30 UTC
    ]
    kept, _ = filter_calls(calls, cfg)
    assert [format_timestamp(c.arrival_utc) for c in kept] == [
        "2019-01-01T00:00:00Z",
        "2019-12-31T23:59:59Z",
        "2019-12-31T23:30:00Z",
    ]


def test_frequency_cut_is_computed_after_length_cut():
    cfg = FilterConfig(min_type_frequency=3)
    calls = [call("A", 10.0)] * 2 + [call("A", 30.0)] * 5 + [call("B", 5.0)] * 3
    kept, table = filter_calls(calls, cfg)
    assert table.entries == (("B", 3),)
    assert all(c.vessel_class == "B" for c in kept)


def test_table_ties_broken_by_label():
    t = TypeFrequencyTable.from_calls([call("b"), call("a"), call("c"), call("c")])
    assert t.entries == (("c", 2), ("a", 1), ("b", 1))


def test_noop_filters_keep_everything():
    calls = [call("A", 1.0), call("B", 300.0, "2001-01-01T00:00:00Z"), call("A", 7.0, "2030-05-05T05:05:05Z")]
    cfg = FilterConfig(date(1, 1, 1), date(9999, 12, 31), 1e12, 0)
    kept, table = filter_calls(calls, cfg)
    assert kept == calls
    assert table.as_dict() == {"A": 2, "B": 1}


# -- properties -----------------------------------------------------------------

labels = st.sampled_from(["Yacht", "Trawler", "Pusher/Tug", "Sailing ship", "Odd one"])
instants = st.datetimes(
    min_value=datetime(2018, 6, 1), max_value=datetime(2020, 6, 30), timezones=st.just(timezone.utc)
)
lengths = st.floats(min_value=0.1, max_value=80, allow_nan=False).map(lambda x: round(x, 2)).filter(lambda x: x > 0)
port_calls = st.builds(PortCall, st.from_regex(r"[A-Z0-9]{1,8}", fullmatch=True), labels, lengths, instants)
configs = st.builds(
    FilterConfig,
    st.just(date(2019, 1, 1)),
    st.dates(min_value=date(2019, 1, 1), max_value=date(2020, 1, 1)),
    st.sampled_from([10.0, 25.0, 50.0]),
    st.integers(0, 6),
)


@settings(max_examples=150, deadline=None)
@given(st.lists(port_calls, max_size=40), configs)
def test_filter_properties(calls, cfg):
    kept, table = filter_calls(calls, cfg)
    assert all(c in calls for c in kept)
    assert [c for c in calls if c in kept] == kept  # original order
    for c in kept:
        assert cfg.window_start <= c.arrival_utc.date() <= cfg.window_end
        assert c.length_m < cfg.max_length_m
    assert all(n >= cfg.min_type_frequency for _, n in table.entries)
    assert table.total == len(kept)
    assert len(set(table.classes)) == len(table.classes)
    again, table2 = filter_calls(kept, cfg)
    assert again == kept and table2 == table


@settings(max_examples=150, deadline=None)
@given(st.lists(port_calls, max_size=30))
def test_parse_serialize_fixed_point(calls):
    text = serialize_port_calls(calls)
    parsed, errors = parse_port_calls(io.StringIO(text))
    assert errors == []
    assert parsed == calls
    assert serialize_port_calls(parsed) == text


@given(st.floats(min_value=1e-7, max_value=1e7, allow_nan=False))
def test_lengths_round_trip_without_exponents(x):
    text = serialize_port_calls([PortCall("V", "Y", x, parse_timestamp("2019-01-01T00:00:00Z"))])
    assert "e" not in text.splitlines()[1].split(",")[2]
    parsed, errors = parse_port_calls(io.StringIO(text))
    assert errors == [] and parsed[0].length_m == x and math.isfinite(x)
