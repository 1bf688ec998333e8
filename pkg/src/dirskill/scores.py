"""Skill scores for 2x2 tables and accuracy measures for value series.

All table scores lie in [-1, 1]. Where a formula has an empty marginal the
offending term or ratio is taken as 0, so constant forecasters (always Up
or always Down) score exactly 0.
"""

from __future__ import annotations

import decimal
import math
from dataclasses import asdict, dataclass

from .classify import SeriesPair
from .contingency import ContingencyTable
from .errors import DegenerateBaselineError, NonFiniteError, ZeroDenominatorError


def _standardized(cell: int, row: int, col: int, n: int) -> float:
    # (observed proportion - expected proportion) / sqrt(expected proportion)
    if row == 0 or col == 0:
        return 0.0
    expected = (row * col) / (n * n)
    return (cell / n - expected) / math.sqrt(expected)


def psi(t: ContingencyTable) -> float:
    """Prediction Skill Index of a 2x2 table.

    Each cell's deviation from its independence expectation is divided by
    the square root of that expectation; the diagonal (hits, correct
    rejections) terms count for, the off-diagonal terms against, and the
    total is halved. A balanced perfect table scores 1, a perfect forecast
    of a rare event scores less.
    """
    a, b, c, d = t.as_tuple()
    n = t.n
    agree = _standardized(a, a + b, a + c, n) + _standardized(d, c + d, b + d, n)
    disagree = _standardized(b, a + b, b + d, n) + _standardized(c, c + d, a + c, n)
    value = (agree - disagree) / 2
    return min(1.0, max(-1.0, value))


def skill_score(score: float, perfect: float = 1.0, reference: float = 0.0) -> float:
    """Percentage improvement of ``score`` over ``reference``.

    100 at ``perfect``, 0 at ``reference``, negative when worse than the
    reference.
    """
    if perfect == reference:
        raise DegenerateBaselineError("perfect and reference scores are equal")
    return 100.0 * (score - reference) / (perfect - reference)


def pss(t: ContingencyTable) -> float:
    """Peirce skill score (hit rate minus false alarm rate)."""
    a, b, c, d = t.as_tuple()
    denom = (a + c) * (b + d)
    if denom == 0:
        return 0.0
    return (a * d - b * c) / denom


def phi(t: ContingencyTable) -> float:
    """Phi (Pearson) correlation of the 2x2 table."""
    a, b, c, d = t.as_tuple()
    prod = (a + b) * (c + d) * (a + c) * (b + d)
    if prod == 0:
        return 0.0
    return (a * d - b * c) / math.sqrt(prod)


def hss(t: ContingencyTable) -> float:
    """Heidke skill score."""
    a, b, c, d = t.as_tuple()
    denom = (a + c) * (c + d) + (a + b) * (b + d)
    if denom == 0:
        return 0.0
    return 2 * (a * d - b * c) / denom


def css(t: ContingencyTable) -> float:
    """Clayton skill score: a/(a+b) - c/(c+d), empty rows contribute 0."""
    a, b, c, d = t.as_tuple()
    up = a / (a + b) if a + b else 0.0
    down = c / (c + d) if c + d else 0.0
    return up - down


@dataclass(frozen=True)
class ScoreSet:
    psi: float
    pss: float
    phi: float
    hss: float
    css: float

    def skill_percents(self) -> dict[str, float]:
        """Skill score of each measure against perfect = 1, reference = 0."""
        return {name: skill_score(value) for name, value in asdict(self).items()}

    def as_dict(self) -> dict[str, float]:
        return asdict(self)


def score_table(t: ContingencyTable) -> ScoreSet:
    return ScoreSet(psi(t), pss(t), phi(t), hss(t), css(t))


def round_half_away(x: float, places: int = 3) -> float:
    """Round like the printed tables: halves go away from zero."""
    if not math.isfinite(x):
        return x
    q = decimal.Decimal(1).scaleb(-places)
    return float(decimal.Decimal(repr(x)).quantize(q, rounding=decimal.ROUND_HALF_UP))


def mse(pair: SeriesPair) -> float:
    """Mean squared error of the forecasts against their realizations."""
    errs = [(a - f) ** 2 for a, f in zip(pair.realized, pair.forecast)]
    value = math.fsum(errs) / len(errs)
    if not math.isfinite(value):
        raise NonFiniteError("MSE overflowed")
    return value


def theil_u(pair: SeriesPair) -> float:
    """Theil inequality coefficient: root-sum-square error over root-sum-square actual."""
    num = math.fsum((f - a) ** 2 for a, f in zip(pair.realized, pair.forecast))
    den = math.fsum(a * a for a in pair.realized)
    if den == 0:
        raise ZeroDenominatorError("Theil U is undefined when every realized value is 0")
    return math.sqrt(num) / math.sqrt(den)
