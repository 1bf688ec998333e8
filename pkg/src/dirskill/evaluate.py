"""End-to-end evaluation: series or counts in, per-variable scores and joint PSI out."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .classify import BandSpec, ClassificationConfig, SeriesPair, classify_series, collapse
from .composite import CompositeResult, psi_n
from .contingency import ContingencyTable
from .scores import ScoreSet, score_table

VERIFIED = "verified"
REFERENCE_ONLY = "reference_only"


@dataclass(frozen=True)
class VariableResult:
    organization: str
    variable: str
    band: str
    counts: dict[str, int]
    table: ContingencyTable
    scores: ScoreSet
    printed_psi: float | None = None
    status: str = VERIFIED
    half_width: float | None = None
    excluded_ties: int = 0


@dataclass(frozen=True)
class GroupResult:
    """Variables scored together under one band, plus their joint PSI."""

    organization: str
    band: str
    variables: tuple[VariableResult, ...]
    composite: CompositeResult
    table_name: str = ""
    printed_joint: float | None = None

    @property
    def joint_status(self) -> str:
        if any(v.status == REFERENCE_ONLY for v in self.variables):
            return REFERENCE_ONLY
        return VERIFIED


def split_label(label: str) -> tuple[str, str]:
    """``"BOT/GDP"`` -> ``("BOT", "GDP")``; a label without a slash has no organization."""
    org, sep, var = label.rpartition("/")
    return (org, var) if sep else ("", label)


def score_counts(
    counts: Mapping[str, int],
    organization: str = "",
    variable: str = "",
    band: str = "none",
    **extra,
) -> VariableResult:
    counts = dict(counts)
    table = collapse(counts)
    return VariableResult(organization, variable, band, counts, table, score_table(table), **extra)


def build_group(
    results: Sequence[VariableResult],
    weights: Sequence[float] | None = None,
    table_name: str = "",
    printed_joint: float | None = None,
) -> GroupResult:
    composite = psi_n([(r.variable, r.scores.psi) for r in results], weights)
    first = results[0]
    return GroupResult(first.organization, first.band, tuple(results), composite, table_name, printed_joint)


def evaluate_series(
    series: Mapping[str, SeriesPair],
    band: BandSpec = BandSpec(),
    config: ClassificationConfig = ClassificationConfig(),
    weights: Sequence[float] | None = None,
    organization: str = "",
) -> GroupResult:
    """Classify and score each labelled series, then combine into one joint PSI.

    Every series gets its own band half-width (an ``sd`` band uses that
    series' own changes).
    """
    results = []
    for label, pair in series.items():
        res = classify_series(pair, band, config)
        results.append(
            score_counts(
                res.band_counts(),
                organization,
                label,
                str(band),
                half_width=res.half_width,
                excluded_ties=res.excluded_ties,
            )
        )
    if not results:
        raise ValueError("need at least one series")
    return build_group(results, weights)


def evaluate_fixtures(fixtures: Iterable, printed_joint: Mapping | None = None) -> list[GroupResult]:
    """Score count fixtures grouped by (table, band, organization), in file order.

    Labels look like ``"ORG/VARIABLE"``; a label without ``/`` forms its own
    single-variable group.

    ``printed_joint`` maps table name -> organization -> printed joint PSI.
    """
    groups: dict[tuple, list[VariableResult]] = {}
    for i, fx in enumerate(fixtures):
        org, var = split_label(fx.label)
        result = score_counts(
            fx.counts, org, var, fx.band, printed_psi=fx.printed_psi, status=fx.status
        )
        # a label without an organization stands alone
        key = (fx.table, fx.band, org) if org else (fx.table, fx.band, org, i)
        groups.setdefault(key, []).append(result)
    printed_joint = printed_joint or {}
    out = []
    for (table_name, _, org, *_), results in groups.items():
        printed = printed_joint.get(table_name, {}).get(org)
        out.append(build_group(results, table_name=table_name, printed_joint=printed))
    return out


@dataclass(frozen=True)
class Discrepancy:
    table_name: str
    organization: str
    variable: str  # "joint" for the combined score
    band: str
    cells: tuple[int, ...] = field(default=())
    recomputed: float = 0.0
    printed: float | None = None

    @property
    def delta(self) -> float | None:
        return None if self.printed is None else self.recomputed - self.printed


def discrepancies(groups: Iterable[GroupResult]) -> list[Discrepancy]:
    """Rows whose printed values do not follow from their printed counts."""
    rows = []
    for g in groups:
        for v in g.variables:
            if v.status == REFERENCE_ONLY:
                rows.append(
                    Discrepancy(
                        g.table_name,
                        g.organization,
                        v.variable,
                        g.band,
                        tuple(v.counts.values()),
                        v.scores.psi,
                        v.printed_psi,
                    )
                )
        if g.joint_status == REFERENCE_ONLY:
            rows.append(Discrepancy(g.table_name, g.organization, "joint", g.band, (), g.composite.joint, g.printed_joint))
    return rows
