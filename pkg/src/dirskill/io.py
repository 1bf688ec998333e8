"""Reading series and count files, the shipped fixtures, and report rendering.

Series CSV::

    period,actual,forecast
    2000,4.5,
    2001,3.4,5.0
    ...

The forecast on a row is the forecast *of that row's period*. Leading rows
with only an actual are history; the last of them is the base period.
Trailing rows with a forecast but no actual yet are dropped with a warning.

Counts CSV::

    label,band,uu_within,up_down,dd_outside,down_up,uu_outside,dd_within[,n,table,printed_psi,status]

Plain (no-band) tables put zeros in ``dd_outside`` and ``uu_outside``.
"""

from __future__ import annotations

import csv
import json
import math
import os
import warnings
from dataclasses import dataclass, field
from importlib import resources
from io import StringIO
from typing import Iterable

from .classify import BAND_COLUMNS, BandSpec, SeriesPair, collapse, period_sort_key
from .contingency import ContingencyTable
from .errors import AlignmentError, DirskillError, NegativeCountError, ParseError
from .evaluate import REFERENCE_ONLY, VERIFIED, GroupResult, discrepancies, evaluate_fixtures
from .scores import round_half_away, skill_score

SERIES_HEADER = ("period", "actual", "forecast")
COUNTS_HEADER = ("label", "band") + BAND_COLUMNS
COUNTS_OPTIONAL = ("n", "table", "printed_psi", "status")
SCHEMA_VERSION = 1
SCORE_NAMES = ("psi", "pss", "phi", "hss", "css")


class TrailingForecastWarning(UserWarning):
    """Forecast rows at the end of a series file had no realized actual."""


def _read_text(source) -> str:
    """Accept a path, raw bytes, text, or a binary/text file object."""
    if isinstance(source, (bytes, bytearray)):
        data = bytes(source)
    elif isinstance(source, os.PathLike) or (isinstance(source, str) and "\n" not in source and os.path.exists(source)):
        with open(source, "rb") as fh:
            data = fh.read()
    elif isinstance(source, str):
        return source
    else:
        data = source.read()
        if isinstance(data, str):
            return data
    try:
        return data.decode("utf-8-sig")
    except UnicodeDecodeError as exc:
        raise ParseError(f"input is not valid UTF-8: {exc}") from None


def _rows(text: str, header: tuple[str, ...], optional: tuple[str, ...] = ()) -> tuple[list[str], list[tuple[int, list[str]]]]:
    reader = csv.reader(StringIO(text, newline=""))
    rows = [(i, [cell.strip() for cell in row]) for i, row in enumerate(reader, start=1) if any(c.strip() for c in row)]
    if not rows:
        raise ParseError("empty file")
    _, head = rows[0]
    head = [h.lower() for h in head]
    if tuple(head[: len(header)]) != header or any(h not in optional for h in head[len(header):]):
        raise ParseError(f"bad header {','.join(head)!r}; expected {','.join(header)}")
    if len(set(head)) != len(head):
        raise ParseError("duplicate header columns")
    body = rows[1:]
    for lineno, row in body:
        if len(row) != len(head):
            raise ParseError(f"line {lineno}: expected {len(head)} fields, got {len(row)}")
    return head, body


def _parse_float(text: str, lineno: int, what: str) -> float | None:
    if text == "":
        return None
    try:
        value = float(text)
    except ValueError:
        raise ParseError(f"line {lineno}: cannot parse {what} {text!r}") from None
    if not math.isfinite(value):
        raise ParseError(f"line {lineno}: {what} must be finite, got {text!r}")
    return value


@dataclass(frozen=True)
class SeriesFile:
    """Parsed series file before alignment."""

    rows: tuple[tuple[str, float | None, float | None], ...]
    variable: str = ""
    organization: str = ""

    def split(self) -> tuple[SeriesPair, int]:
        """Align into a :class:`SeriesPair`; also return how many trailing
        forecast rows were dropped for lack of a realized actual."""
        rows = list(self.rows)
        first_fc = next((i for i, (_, _, f) in enumerate(rows) if f is not None), None)
        if first_fc is None:
            raise AlignmentError("series file has no forecasts")
        if first_fc == 0:
            raise AlignmentError(f"forecast for {rows[0][0]} has no base-period actual before it")

        last = len(rows)
        while last > first_fc and rows[last - 1][1] is None:
            last -= 1
        dropped = len(rows) - last
        scored = rows[first_fc:last]
        if not scored:
            raise AlignmentError("no forecast has a realized actual")
        for period, act, fc in scored:
            if fc is None:
                raise AlignmentError(f"period {period}: actual without a forecast after forecasts began")
            if act is None:
                raise AlignmentError(f"period {period}: actual missing; later directions need it as a base")
        lead = rows[:first_fc]
        for period, act, _ in lead:
            if act is None:
                raise AlignmentError(f"period {period}: actual missing before the first forecast")

        base = lead[-1]
        pair = SeriesPair(
            periods=(base[0],) + tuple(p for p, _, _ in scored),
            actual=(base[1],) + tuple(a for _, a, _ in scored),
            forecast=tuple(f for _, _, f in scored),
            history=tuple(a for _, a, _ in lead[:-1]),
        )
        return pair, dropped


def parse_series_file(source, variable: str = "", organization: str = "") -> SeriesFile:
    text = _read_text(source)
    _, body = _rows(text, SERIES_HEADER)
    rows = []
    seen = set()
    for lineno, (period, act, fc) in body:
        if not period:
            raise ParseError(f"line {lineno}: empty period label")
        if period in seen:
            raise ParseError(f"line {lineno}: duplicate period {period!r}")
        seen.add(period)
        actual = _parse_float(act, lineno, "actual")
        forecast = _parse_float(fc, lineno, "forecast")
        if actual is None and forecast is None:
            raise ParseError(f"line {lineno}: row has neither actual nor forecast")
        rows.append((period, actual, forecast))
    if not rows:
        raise ParseError("series file has no data rows")
    key = period_sort_key(p for p, _, _ in rows)
    rows.sort(key=lambda r: key(r[0]))
    return SeriesFile(tuple(rows), variable, organization)


def load_series(source) -> SeriesPair:
    """Read a ``period,actual,forecast`` CSV into an aligned series pair."""
    pair, dropped = parse_series_file(source).split()
    if dropped:
        warnings.warn(
            f"{dropped} trailing forecast row(s) without a realized actual were excluded",
            TrailingForecastWarning,
            stacklevel=2,
        )
    return pair


@dataclass(frozen=True)
class CountsFixture:
    label: str
    band: str
    counts: dict[str, int]
    table: str = ""
    printed_psi: float | None = None
    status: str = VERIFIED
    n: int | None = field(default=None)

    def __post_init__(self):
        if self.status not in (VERIFIED, REFERENCE_ONLY):
            raise ParseError(f"{self.label}: unknown status {self.status!r}")
        tbl = collapse(self.counts)
        if self.n is None:
            object.__setattr__(self, "n", tbl.n)
        elif self.n != tbl.n:
            raise ParseError(f"{self.label}: counts sum to {tbl.n}, stated n is {self.n}")

    def contingency(self) -> ContingencyTable:
        return collapse(self.counts)


def _parse_count(text: str, lineno: int, col: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise ParseError(f"line {lineno}: {col} must be an integer, got {text!r}") from None
    if value < 0:
        raise NegativeCountError(f"line {lineno}: {col} is negative ({value})")
    return value


def load_counts(source) -> list[CountsFixture]:
    """Read a counts CSV into validated fixtures."""
    text = _read_text(source)
    head, body = _rows(text, COUNTS_HEADER, COUNTS_OPTIONAL)
    out = []
    for lineno, row in body:
        rec = dict(zip(head, row))
        if not rec["label"]:
            raise ParseError(f"line {lineno}: empty label")
        band = str(BandSpec.parse(rec["band"]))
        counts = {col: _parse_count(rec[col], lineno, col) for col in BAND_COLUMNS}
        n = _parse_count(rec["n"], lineno, "n") if rec.get("n") else None
        printed = _parse_float(rec.get("printed_psi", ""), lineno, "printed_psi")
        try:
            out.append(
                CountsFixture(
                    rec["label"],
                    band,
                    counts,
                    table=rec.get("table", ""),
                    printed_psi=printed,
                    status=rec.get("status") or VERIFIED,
                    n=n,
                )
            )
        except DirskillError as exc:
            raise type(exc)(f"line {lineno}: {exc}") from None
    if not out:
        raise ParseError("counts file has no data rows")
    return out


def dump_counts(fixtures: Iterable[CountsFixture]) -> str:
    """Write fixtures in the counts CSV layout (all optional columns included)."""
    buf = StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(COUNTS_HEADER + COUNTS_OPTIONAL)
    for fx in fixtures:
        writer.writerow(
            [fx.label, fx.band]
            + [fx.counts[c] for c in BAND_COLUMNS]
            + [fx.n, fx.table, "" if fx.printed_psi is None else repr(fx.printed_psi), fx.status]
        )
    return buf.getvalue()


def _data_path(name: str):
    return resources.files("dirskill").joinpath("data", name)


def bundled_fixtures() -> list[CountsFixture]:
    """Bundled cell counts: rare/random events plus no-band, 1 SD band and 0.5 band sets."""
    return load_counts(_data_path("fixture_counts.csv").read_text(encoding="utf-8"))


def bundled_reference() -> dict:
    """Printed joint scores, printed event-rate scores and reference summary statistics."""
    return json.loads(_data_path("fixture_reference.json").read_text(encoding="utf-8"))


def bundled_results() -> list[GroupResult]:
    return evaluate_fixtures(bundled_fixtures(), bundled_reference()["printed_joint"])


# ---------------------------------------------------------------- rendering


def _fmt(x: float | None) -> str:
    if x is None:
        return ""
    return f"{round_half_away(x, 3):.3f}"


def _has_joint(g: GroupResult) -> bool:
    return len(g.variables) > 1 or bool(g.organization)


def _render_text(groups: list[GroupResult]) -> str:
    cols = ["Up/Up in", "Up/Dn", "Dn/Dn out", "Dn/Up", "Up/Up out", "Dn/Dn in"]
    width_label = max(
        [len(f"{g.organization} {v.variable}".strip()) for g in groups for v in g.variables]
        + [len(f"{g.organization} joint".strip()) for g in groups if _has_joint(g)]
        + [10]
    )
    lines = []
    current = None
    for g in groups:
        key = (g.table_name, g.band)
        if key != current:
            if lines:
                lines.append("")
            title = f"{g.table_name}  " if g.table_name else ""
            lines.append(f"{title}band: {g.band}")
            lines.append(
                f"{'':<{width_label}}  "
                + " ".join(f"{c:>9}" for c in cols)
                + f" {'n':>4}  "
                + " ".join(f"{s.upper():>6}" for s in SCORE_NAMES)
                + "  note"
            )
            current = key
        for v in g.variables:
            label = f"{g.organization} {v.variable}".strip()
            note = ""
            if v.status == REFERENCE_ONLY:
                note = f"printed {_fmt(v.printed_psi)}, recomputed {_fmt(v.scores.psi)}"
            if v.excluded_ties:
                note = (note + "; " if note else "") + f"{v.excluded_ties} tie(s) excluded"
            lines.append(
                f"{label:<{width_label}}  "
                + " ".join(f"{v.counts[c]:>9d}" for c in BAND_COLUMNS)
                + f" {v.table.n:>4d}  "
                + " ".join(f"{_fmt(getattr(v.scores, s)):>6}" for s in SCORE_NAMES)
                + (f"  {note}" if note else "")
            )
        if _has_joint(g):
            label = f"{g.organization} joint".strip()
            note = ""
            if g.printed_joint is not None and g.joint_status == REFERENCE_ONLY:
                note = f"  printed {_fmt(g.printed_joint)}, recomputed {_fmt(g.composite.joint)}"
            pad = 10 * len(cols) + 6
            lines.append(f"{label:<{width_label}}  {'':>{pad - 1}} {_fmt(g.composite.joint):>6}{note}")
    return "\n".join(lines) + "\n"


def _variable_record(v) -> dict:
    return {
        "variable": v.variable,
        "band_counts": dict(v.counts),
        "table": {"a": v.table.a, "b": v.table.b, "c": v.table.c, "d": v.table.d, "n": v.table.n},
        "scores": v.scores.as_dict(),
        "skill_pct": v.scores.skill_percents(),
        "printed_psi": v.printed_psi,
        "status": v.status,
        "half_width": v.half_width,
        "excluded_ties": v.excluded_ties,
    }


def report_dict(groups: list[GroupResult]) -> dict:
    """JSON report payload.

    ``{"schema_version": 1, "groups": [{organization, band, table,
    variables: [...], joint: {psi_n, skill_pct, weights, printed, status}}],
    "discrepancies": [...]}``
    """
    out = []
    for g in groups:
        out.append(
            {
                "organization": g.organization,
                "band": g.band,
                "table": g.table_name,
                "variables": [_variable_record(v) for v in g.variables],
                "joint": {
                    "psi_n": g.composite.joint,
                    "skill_pct": g.composite.skill_percent,
                    "weights": list(g.composite.weights),
                    "printed": g.printed_joint,
                    "status": g.joint_status,
                },
            }
        )
    disc = [
        {
            "table": d.table_name,
            "organization": d.organization,
            "variable": d.variable,
            "band": d.band,
            "cells": list(d.cells),
            "recomputed_psi": d.recomputed,
            "printed_psi": d.printed,
            "delta": d.delta,
        }
        for d in discrepancies(groups)
    ]
    return {"schema_version": SCHEMA_VERSION, "groups": out, "discrepancies": disc}


CSV_REPORT_COLUMNS = (
    "table", "organization", "variable", "band", "a", "b", "c", "d", "n",
    "psi", "pss", "phi", "hss", "css", "psi_skill_pct", "printed_psi", "status",
)


def _render_csv(groups: list[GroupResult]) -> str:
    buf = StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_REPORT_COLUMNS)
    for g in groups:
        for v in g.variables:
            writer.writerow(
                [g.table_name, g.organization, v.variable, g.band, v.table.a, v.table.b, v.table.c, v.table.d, v.table.n]
                + [_fmt(getattr(v.scores, s)) for s in SCORE_NAMES]
                + [f"{round_half_away(skill_score(v.scores.psi), 1):.1f}", _fmt(v.printed_psi), v.status]
            )
        if not _has_joint(g):
            continue
        writer.writerow(
            [g.table_name, g.organization, "joint", g.band, "", "", "", "", ""]
            + [_fmt(g.composite.joint), "", "", "", ""]
            + [f"{round_half_away(g.composite.skill_percent, 1):.1f}", _fmt(g.printed_joint), g.joint_status]
        )
    return buf.getvalue()


def emit_report(groups: Iterable[GroupResult], fmt: str = "text") -> str:
    """Render scored groups as ``text``, ``csv`` or ``json``.

    Text and CSV round scores to 3 decimals; JSON keeps full precision.
    """
    groups = list(groups)
    if not groups:
        raise DirskillError("nothing to report")
    if fmt == "text":
        return _render_text(groups)
    if fmt == "csv":
        return _render_csv(groups)
    if fmt == "json":
        return json.dumps(report_dict(groups), indent=2) + "\n"
    raise DirskillError(f"unknown report format {fmt!r}")
