"""Command-line interface.

Exit codes: 0 success, 2 input or validation error, 3 tie-policy error.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from pathlib import Path

from . import io as dio
from .benchmarks import DEFAULT_QUANTILES, null_distribution
from .classify import BAND_COLUMNS, BandSpec, ClassificationConfig, classify_series
from .contingency import from_counts
from .errors import DirskillError, ParseError, TiePolicyError
from .evaluate import evaluate_fixtures, evaluate_series
from .scores import round_half_away, score_table

EXIT_INPUT = 2
EXIT_POLICY = 3


class CliError(DirskillError):
    pass


def _floats(text: str, what: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise CliError(f"cannot parse {what} {text!r}") from None


def _cells(text: str):
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 4:
        raise CliError(f"--cells needs four comma-separated counts a,b,c,d, got {text!r}")
    try:
        values = [int(p) for p in parts]
    except ValueError:
        raise CliError(f"--cells values must be integers, got {text!r}") from None
    return from_counts(*values)


def _f3(x) -> str:
    return f"{round_half_away(x, 3):.3f}"


def _config(args) -> ClassificationConfig:
    return ClassificationConfig(
        tie_epsilon=args.tie_epsilon,
        tie_policy=args.tie_policy,
        direction_base=args.base,
        sd_ddof=args.sd_ddof,
    )


def _load_series_file(path: str):
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", dio.TrailingForecastWarning)
        pair = dio.load_series(Path(path))
    for w in caught:
        print(f"warning: {path}: {w.message}", file=sys.stderr)
    return pair


# ---------------------------------------------------------------- commands


def cmd_score(args) -> str:
    if (args.counts is None) == (args.cells is None):
        raise CliError("give exactly one of --counts or --cells")
    if args.cells is not None:
        items = [("table", _cells(args.cells))]
    else:
        items = [(fx.label, fx.contingency()) for fx in dio.load_counts(Path(args.counts))]

    if args.format == "json":
        payload = []
        for label, t in items:
            s = score_table(t)
            payload.append(
                {
                    "label": label,
                    "table": {"a": t.a, "b": t.b, "c": t.c, "d": t.d, "n": t.n},
                    "scores": s.as_dict(),
                    "skill_pct": s.skill_percents(),
                }
            )
        return json.dumps({"schema_version": dio.SCHEMA_VERSION, "results": payload}, indent=2) + "\n"

    lines = []
    for label, t in items:
        s = score_table(t)
        pct = s.skill_percents()
        lines.append(f"{label}: a={t.a} b={t.b} c={t.c} d={t.d} n={t.n}")
        for name, value in s.as_dict().items():
            lines.append(f"  {name.upper():<4} {_f3(value):>7}   skill {round_half_away(pct[name], 1):6.1f}%")
    return "\n".join(lines) + "\n"


def cmd_classify(args) -> str:
    pair = _load_series_file(args.series)
    band = BandSpec.parse(args.band)
    res = classify_series(pair, band, _config(args))
    counts = res.band_counts()
    table = res.table()
    if args.format == "json":
        return json.dumps(
            {
                "schema_version": dio.SCHEMA_VERSION,
                "band": str(band),
                "half_width": res.half_width,
                "outcomes": [{"period": p, "outcome": o.value} for p, o in zip(res.periods, res.outcomes)],
                "excluded_periods": list(res.excluded_periods),
                "band_counts": counts,
                "table": {"a": table.a, "b": table.b, "c": table.c, "d": table.d, "n": table.n},
            },
            indent=2,
        ) + "\n"
    lines = [f"band: {band}  half-width: {res.half_width:.6g}"]
    lines += [f"{p:>10}  {o.value}" for p, o in zip(res.periods, res.outcomes)]
    for p in res.excluded_periods:
        lines.append(f"{p:>10}  tie (excluded)")
    lines.append("counts: " + " ".join(f"{c}={counts[c]}" for c in BAND_COLUMNS))
    lines.append(f"table: a={table.a} b={table.b} c={table.c} d={table.d} n={table.n}")
    if res.excluded_ties:
        lines.append(f"excluded ties: {res.excluded_ties}")
    return "\n".join(lines) + "\n"


def _series_arg(spec: str) -> tuple[str, str]:
    label, sep, path = spec.partition("=")
    if sep and label and not Path(spec).exists():
        return label, path
    return Path(spec).stem, spec


def cmd_evaluate(args) -> str:
    if not args.series:
        raise CliError("need at least one --series")
    series = {}
    for spec in args.series:
        label, path = _series_arg(spec)
        if label in series:
            raise CliError(f"duplicate series label {label!r}")
        series[label] = _load_series_file(path)
    weights = None
    if args.weights:
        weights = _floats(args.weights, "--weights")
        if len(weights) != len(series):
            raise CliError(f"got {len(weights)} weights for {len(series)} series")
    group = evaluate_series(series, BandSpec.parse(args.band), _config(args), weights, args.organization)
    return dio.emit_report([group], args.format)


def cmd_simulate(args) -> str:
    quantiles = _floats(args.quantiles, "--quantiles") if args.quantiles else DEFAULT_QUANTILES
    summary = null_distribution(
        n=args.n,
        p_up_observed=args.p_up_observed,
        p_up_forecast=args.p_up,
        trials=args.trials,
        seed=args.seed,
        quantiles=quantiles,
        workers=args.workers,
    )
    payload = {
        "schema_version": dio.SCHEMA_VERSION,
        "n": args.n,
        "seed": args.seed,
        "p_up_observed": args.p_up_observed,
        "p_up_forecast": args.p_up,
        **summary.as_dict(),
    }
    return json.dumps(payload, indent=2) + "\n"


def cmd_report(args) -> str:
    if args.fixtures == "paper":
        groups = dio.bundled_results()
    else:
        path = Path(args.fixtures)
        if not path.is_file():
            raise CliError(f"unknown fixture set {args.fixtures!r} (use 'paper' for the bundled fixtures or a counts CSV path)")
        groups = evaluate_fixtures(dio.load_counts(path))
    return dio.emit_report(groups, args.format)


# ---------------------------------------------------------------- parser


def _add_classification_flags(p) -> None:
    p.add_argument("--band", default="none", help="none, fixed:<x> or sd:<k> (default: none)")
    p.add_argument("--tie-policy", dest="tie_policy", default="exclude", choices=["exclude", "as_up", "as_down", "error"])
    p.add_argument("--tie-epsilon", dest="tie_epsilon", type=float, default=0.0)
    p.add_argument("--base", default="prior_actual", choices=["prior_actual", "prior_forecast"],
                   help="value the forecast direction is measured from")
    p.add_argument("--sd-ddof", dest="sd_ddof", type=int, default=1, choices=[0, 1],
                   help="1: sample SD of changes (default), 0: population SD")


def build_parser() -> tuple[argparse.ArgumentParser, dict[str, argparse.ArgumentParser]]:
    parser = argparse.ArgumentParser(prog="dirskill", description="Skill of directional (Up/Down) forecasts.")
    sub = parser.add_subparsers(dest="command", required=True)
    subs = {}

    p = sub.add_parser("score", help="score a 2x2 table")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--counts", help="counts CSV file")
    src.add_argument("--cells", help="a,b,c,d")
    p.add_argument("--format", default="text", choices=["text", "json"])
    p.set_defaults(func=cmd_score)
    subs["score"] = p

    p = sub.add_parser("classify", help="classify a series file into directional outcomes")
    p.add_argument("--series", required=True, help="period,actual,forecast CSV")
    _add_classification_flags(p)
    p.add_argument("--format", default="text", choices=["text", "json"])
    p.set_defaults(func=cmd_classify)
    subs["classify"] = p

    p = sub.add_parser("evaluate", help="score one or more series and their joint PSI")
    p.add_argument("--series", action="append", default=[], metavar="[LABEL=]FILE")
    _add_classification_flags(p)
    p.add_argument("--weights", help="comma-separated weights summing to 1, one per series")
    p.add_argument("--organization", default="")
    p.add_argument("--format", default="text", choices=["text", "csv", "json"])
    p.set_defaults(func=cmd_evaluate)
    subs["evaluate"] = p

    p = sub.add_parser("simulate", help="null distribution of PSI for a random forecaster")
    p.add_argument("--n", type=int, default=400)
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--p-up", dest="p_up", type=float, default=0.5, help="forecast probability of Up")
    p.add_argument("--p-up-observed", dest="p_up_observed", type=float, default=0.5)
    p.add_argument("--quantiles", help="comma-separated quantiles in (0, 1)")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_simulate)
    subs["simulate"] = p

    p = sub.add_parser("report", help="render fixture tables")
    p.add_argument("--fixtures", default="paper", help="'paper' for the bundled fixture tables, or a counts CSV path")
    p.add_argument("--format", default="text", choices=["text", "csv", "json"])
    p.set_defaults(func=cmd_report)
    subs["report"] = p

    for p in subs.values():
        p.add_argument("--config", help="JSON file of flag values (keys use underscores)")
    return parser, subs


def _apply_config(parser, subs, args, argv):
    path = args.config
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"config {path}: {exc}") from None
    if not isinstance(data, dict):
        raise ParseError(f"config {path}: expected a JSON object")
    sub = subs[args.command]
    known = {a.dest for a in sub._actions}
    unknown = sorted(set(data) - known - {"config"})
    if unknown:
        raise CliError(f"config {path}: unknown keys {', '.join(unknown)}")
    sub.set_defaults(**{k: v for k, v in data.items() if k != "config"})
    # explicit flags still win over the config file
    return parser.parse_args(argv)


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser, subs = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.config:
            args = _apply_config(parser, subs, args, argv)
        out = args.func(args)
    except TiePolicyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_POLICY
    except (DirskillError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    sys.stdout.write(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
