import json
import warnings

import pytest

from dirskill import io as dio
from dirskill.errors import AlignmentError, AllZeroError, DirskillError, NegativeCountError, ParseError
from dirskill.evaluate import REFERENCE_ONLY, VERIFIED, evaluate_fixtures

HEADER = "label,band,uu_within,up_down,dd_outside,down_up,uu_outside,dd_within\n"


def test_minimal_series():
    pair = dio.load_series(b"period,actual,forecast\n2000,1.0,\n2001,2.0,1.5\n2002,1.0,2.5\n")
    assert pair.T == 2
    assert pair.actual == (1.0, 2.0, 1.0)
    assert pair.forecast == (1.5, 2.5)
    assert pair.periods == ("2000", "2001", "2002")


def test_series_sorted_crlf_and_bom():
    text = "﻿period,actual,forecast\r\n2002,1.0,2.5\r\n2000,1.0,\r\n2001,2.0,1.5\r\n"
    pair = dio.load_series(text.encode("utf-8"))
    assert pair.periods == ("2000", "2001", "2002")


def test_history_rows_kept_for_sd():
    pair = dio.load_series("period,actual,forecast\n1,0,\n2,2,\n3,0,1\n4,2,1\n")
    assert pair.history == (0.0,)
    assert pair.full_actual == (0.0, 2.0, 0.0, 2.0)


def test_trailing_forecast_dropped_with_warning():
    text = "period,actual,forecast\n1,1.0,\n2,2.0,1.5\n3,1.0,2.5\n4,,3.0\n"
    with pytest.warns(dio.TrailingForecastWarning, match="1 trailing"):
        pair = dio.load_series(text)
    assert pair.T == 2
    assert dio.parse_series_file(text).split()[1] == 1


@pytest.mark.parametrize(
    "body, err",
    [
        ("1,1,\n1,2,3\n", ParseError),
        ("1,1,\n2,x,3\n", ParseError),
        ("1,1,\n2,nan,3\n", ParseError),
        ("1,1,\n2,,\n", ParseError),
        ("1,1\n", ParseError),
        ("1,1,2\n2,2,3\n", AlignmentError),
        ("1,1,\n2,,3\n3,2,3\n", AlignmentError),
        ("1,1,\n2,2,3\n3,3,\n4,4,5\n", AlignmentError),
        ("1,,\n", ParseError),
        ("1,1,\n2,2,\n", AlignmentError),
    ],
)
def test_series_errors(body, err):
    with pytest.raises(err):
        dio.load_series("period,actual,forecast\n" + body)


def test_series_bad_header():
    with pytest.raises(ParseError):
        dio.load_series("year,actual,forecast\n1,1,\n2,2,3\n")


def test_load_counts_examples():
    fx = dio.load_counts(
        HEADER
        + "BOT/GDP,none,9,2,0,1,0,9\n"
        + "BOT/GDP,fixed:0.5,5,2,7,1,4,2\n"
        + "rare,none,1,0,0,0,0,399\n"
    )
    assert [f.contingency().as_tuple() for f in fx] == [(9, 2, 1, 9), (5, 9, 5, 2), (1, 0, 0, 399)]
    assert fx[1].band == "fixed:0.5"
    assert fx[0].status == VERIFIED and fx[0].printed_psi is None


@pytest.mark.parametrize(
    "row, err",
    [
        ("x,none,1,0,0,0,0,-1\n", NegativeCountError),
        ("x,none,1,0,0,0,0,1.5\n", ParseError),
        ("x,none,0,0,0,0,0,0\n", AllZeroError),
        ("x,wide,1,0,0,0,0,1\n", ParseError),
        (",none,1,0,0,0,0,1\n", ParseError),
    ],
)
def test_load_counts_errors(row, err):
    with pytest.raises(err):
        dio.load_counts(HEADER + row)


def test_load_counts_n_mismatch():
    with pytest.raises(ParseError):
        dio.load_counts(HEADER.strip() + ",n\nx,none,1,0,0,0,0,1,3\n")


def test_bundled_fixture_integrity():
    fixtures = dio.bundled_fixtures()
    assert len(fixtures) == 20
    for fx in fixtures:
        assert fx.n == sum(fx.counts.values())
        assert fx.n in (19, 21, 400)
    ref_only = [f.label for f in fixtures if f.status == REFERENCE_ONLY]
    assert ref_only == ["NESDC/Inf"] + ["BOT/GDP", "BOT/Inf", "FPO/GDP", "FPO/Inf", "NESDC/GDP", "NESDC/Inf"]


def test_counts_round_trip():
    fixtures = dio.bundled_fixtures()
    assert dio.load_counts(dio.dump_counts(fixtures)) == fixtures


def test_bundled_reference_metadata():
    ref = dio.bundled_reference()
    assert ref["summary_statistics"]["actual"]["dGDP"][3] == 4.537
    assert ref["summary_statistics"]["actual"]["dInf"][3] == 2.215
    assert ref["printed_joint"]["sd_band"]["NESDC"] == 0.341


def test_text_report_no_band():
    groups = [g for g in dio.bundled_results() if g.table_name == "no_band"]
    text = dio.emit_report(groups, "text")
    bot = [line for line in text.splitlines() if line.startswith("BOT")]
    assert "0.718" in bot[0] and "0.521" in bot[1] and "0.623" in bot[2]


def test_text_report_annotates_reference_only():
    text = dio.emit_report(dio.bundled_results(), "text")
    line = next(l for l in text.splitlines() if l.startswith("BOT GDP") and "printed" in l)
    assert "printed 0.164, recomputed -0.332" in line


def test_json_round_trip():
    groups = dio.bundled_results()
    doc = json.loads(dio.emit_report(groups, "json"))
    assert doc["schema_version"] == dio.SCHEMA_VERSION
    assert doc == dio.report_dict(groups)
    g = next(g for g in doc["groups"] if g["table"] == "no_band" and g["organization"] == "BOT")
    assert g["variables"][0]["scores"]["psi"] == groups[2].variables[0].scores.psi
    assert g["variables"][0]["table"] == {"a": 9, "b": 2, "c": 1, "d": 9, "n": 21}
    assert len(doc["discrepancies"]) == 7 + 4


def test_csv_report_rows():
    lines = dio.emit_report(dio.bundled_results(), "csv").splitlines()
    assert lines[0].split(",") == list(dio.CSV_REPORT_COLUMNS)
    assert "no_band,BOT,joint,none,,,,,,0.623,,,,,62.3,0.623,verified" in lines


def test_empty_report_rejected():
    with pytest.raises(DirskillError):
        dio.emit_report([], "text")
    with pytest.raises(DirskillError):
        dio.emit_report(dio.bundled_results(), "xml")


def test_user_fixture_file_path(tmp_path):
    path = tmp_path / "c.csv"
    path.write_text(HEADER + "A/x,none,3,1,0,1,0,3\nA/y,none,2,2,0,0,0,4\n")
    groups = evaluate_fixtures(dio.load_counts(path))
    assert len(groups) == 1 and len(groups[0].variables) == 2
