"""Turn actual/forecast series into directional outcomes and 2x2 tables.

A forecast for period t is judged on direction first: the forecast change
and the realized change are both measured from the actual value at t-1. A
wrong direction is always a false alarm or a miss. When the direction is
right and a band of half-width x is in force, the realized value must also
lie within x of the forecast to count as a hit or correct rejection;
otherwise a correct Up call becomes a miss and a correct Down call becomes a
false alarm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from .contingency import ContingencyTable
from .errors import (
    AlignmentError,
    DirskillError,
    NonFiniteError,
    OutOfRangeError,
    ParseError,
    TiePolicyError,
    TooShortError,
)


class Direction(str, Enum):
    UP = "up"
    DOWN = "down"
    TIE = "tie"


class Outcome(str, Enum):
    """Cell category of one forecast/observation pair.

    The values double as the six-count column names used in count files.
    """

    UP_UP_WITHIN = "uu_within"
    UP_DOWN = "up_down"
    DOWN_DOWN_OUTSIDE = "dd_outside"
    DOWN_UP = "down_up"
    UP_UP_OUTSIDE = "uu_outside"
    DOWN_DOWN_WITHIN = "dd_within"
    TIE = "tie"


# column order of the six-count layout
BAND_COLUMNS = tuple(o.value for o in Outcome if o is not Outcome.TIE)


class TiePolicy(str, Enum):
    EXCLUDE = "exclude"
    AS_UP = "as_up"
    AS_DOWN = "as_down"
    ERROR = "error"


class DirectionBase(str, Enum):
    PRIOR_ACTUAL = "prior_actual"
    PRIOR_FORECAST = "prior_forecast"


@dataclass(frozen=True)
class BandSpec:
    """Band regime around the forecast value.

    ``kind`` is ``"none"``, ``"fixed"`` (``value`` is the half-width in
    percentage points) or ``"sd"`` (``value`` multiplies the SD of the
    first differences of the actual series).
    """

    kind: str = "none"
    value: float | None = None

    def __post_init__(self):
        if self.kind == "none":
            if self.value is not None:
                raise OutOfRangeError("a no-band spec takes no value")
            return
        if self.kind not in ("fixed", "sd"):
            raise ParseError(f"unknown band kind {self.kind!r}")
        if self.value is None or not math.isfinite(self.value) or self.value <= 0:
            raise OutOfRangeError(f"band {self.kind} needs a finite value > 0, got {self.value!r}")
        object.__setattr__(self, "value", float(self.value))

    @classmethod
    def none(cls) -> BandSpec:
        return cls("none")

    @classmethod
    def fixed(cls, half_width: float) -> BandSpec:
        return cls("fixed", half_width)

    @classmethod
    def sd(cls, k: float = 1.0) -> BandSpec:
        return cls("sd", k)

    @classmethod
    def parse(cls, text: str) -> BandSpec:
        """Parse ``none``, ``fixed:<x>`` or ``sd:<k>``."""
        text = text.strip().lower()
        if text in ("none", ""):
            return cls.none()
        kind, sep, raw = text.partition(":")
        if not sep or kind not in ("fixed", "sd"):
            raise ParseError(f"cannot parse band {text!r}; expected none, fixed:<x> or sd:<k>")
        try:
            value = float(raw)
        except ValueError:
            raise ParseError(f"cannot parse band value in {text!r}") from None
        return cls(kind, value)

    def __str__(self) -> str:
        if self.kind == "none":
            return "none"
        return f"{self.kind}:{self.value:g}"

    def resolve(self, actual: Sequence[float], ddof: int = 1) -> float:
        """Half-width in value units: 0 for no band, x, or k times the SD of changes."""
        if self.kind == "none":
            return 0.0
        if self.kind == "fixed":
            return self.value
        return self.value * sd_of_changes(actual, ddof=ddof)


@dataclass(frozen=True)
class ClassificationConfig:
    tie_epsilon: float = 0.0
    tie_policy: TiePolicy = TiePolicy.EXCLUDE
    direction_base: DirectionBase = DirectionBase.PRIOR_ACTUAL
    sd_ddof: int = 1

    def __post_init__(self):
        if not (self.tie_epsilon >= 0 and math.isfinite(self.tie_epsilon)):
            raise OutOfRangeError(f"tie_epsilon must be finite and >= 0, got {self.tie_epsilon!r}")
        object.__setattr__(self, "tie_policy", TiePolicy(self.tie_policy))
        object.__setattr__(self, "direction_base", DirectionBase(self.direction_base))
        if self.sd_ddof not in (0, 1):
            raise OutOfRangeError("sd_ddof must be 0 (population) or 1 (sample)")


def period_sort_key(labels: Iterable[str]):
    """Sort key for period labels: numeric when every label parses as a number."""
    labels = list(labels)
    try:
        for label in labels:
            float(label)
    except ValueError:
        return lambda label: label
    return lambda label: float(label)


@dataclass(frozen=True)
class SeriesPair:
    """Actual values over T+1 periods and forecasts for the last T of them.

    ``forecast[t]`` is the forecast of ``actual[t + 1]``; ``actual[0]`` is
    the base period. ``history`` holds any earlier actuals that are not
    scored but still enter the SD of changes used by ``sd`` bands.
    """

    periods: tuple[str, ...]
    actual: tuple[float, ...]
    forecast: tuple[float, ...]
    history: tuple[float, ...] = field(default=())

    def __post_init__(self):
        periods = tuple(str(p) for p in self.periods)
        actual = tuple(float(v) for v in self.actual)
        forecast = tuple(float(v) for v in self.forecast)
        history = tuple(float(v) for v in self.history)
        object.__setattr__(self, "periods", periods)
        object.__setattr__(self, "actual", actual)
        object.__setattr__(self, "forecast", forecast)
        object.__setattr__(self, "history", history)

        if len(forecast) < 1:
            raise TooShortError("need at least one forecast")
        if len(actual) != len(forecast) + 1:
            raise AlignmentError(
                f"actual must have one more value than forecast (base period); "
                f"got {len(actual)} actual and {len(forecast)} forecast values"
            )
        if len(periods) != len(actual):
            raise AlignmentError("need one period label per actual value")
        if len(set(periods)) != len(periods):
            raise ParseError("duplicate period labels")
        key = period_sort_key(periods)
        if any(key(p) >= key(q) for p, q in zip(periods, periods[1:])):
            raise ParseError("period labels must be strictly increasing")
        for v in actual + forecast + history:
            if not math.isfinite(v):
                raise NonFiniteError("series contains NaN or infinite values")

    @classmethod
    def from_values(cls, actual: Sequence[float], forecast: Sequence[float], periods=None) -> SeriesPair:
        if periods is None:
            periods = [str(i) for i in range(len(actual))]
        return cls(tuple(periods), tuple(actual), tuple(forecast))

    @property
    def T(self) -> int:
        return len(self.forecast)

    @property
    def realized(self) -> tuple[float, ...]:
        """Actual values aligned with ``forecast``."""
        return self.actual[1:]

    @property
    def full_actual(self) -> tuple[float, ...]:
        return self.history + self.actual


def direction(base: float, value: float, epsilon: float = 0.0) -> Direction:
    """Up if ``value`` exceeds ``base`` by more than ``epsilon``, Down if it
    falls short by more than ``epsilon``, Tie otherwise."""
    if not (math.isfinite(base) and math.isfinite(value) and math.isfinite(epsilon)):
        raise NonFiniteError(f"direction needs finite inputs, got base={base!r}, value={value!r}")
    change = value - base
    if change > epsilon:
        return Direction.UP
    if change < -epsilon:
        return Direction.DOWN
    return Direction.TIE


def _resolve_tie(d: Direction, policy: TiePolicy) -> Direction:
    if d is not Direction.TIE:
        return d
    if policy is TiePolicy.AS_UP:
        return Direction.UP
    if policy is TiePolicy.AS_DOWN:
        return Direction.DOWN
    if policy is TiePolicy.ERROR:
        raise TiePolicyError("zero change encountered and tie policy is 'error'")
    return Direction.TIE


def classify_point(
    prev_actual: float,
    forecast: float,
    actual: float,
    band: BandSpec,
    resolved_half_width: float,
    config: ClassificationConfig = ClassificationConfig(),
    prev_forecast: float | None = None,
) -> Outcome:
    """Categorize a single forecast against its realization.

    ``prev_forecast`` is only consulted when the config's direction base is
    ``prior_forecast``; if it is ``None`` the prior actual is used instead.
    """
    if not math.isfinite(resolved_half_width) or resolved_half_width < 0:
        raise OutOfRangeError(f"resolved half-width must be finite and >= 0, got {resolved_half_width!r}")
    base = prev_actual
    if config.direction_base is DirectionBase.PRIOR_FORECAST and prev_forecast is not None:
        base = prev_forecast
    fdir = _resolve_tie(direction(base, forecast, config.tie_epsilon), config.tie_policy)
    odir = _resolve_tie(direction(prev_actual, actual, config.tie_epsilon), config.tie_policy)
    if fdir is Direction.TIE or odir is Direction.TIE:
        return Outcome.TIE

    if fdir is not odir:
        return Outcome.UP_DOWN if fdir is Direction.UP else Outcome.DOWN_UP

    within = band.kind == "none" or abs(actual - forecast) <= resolved_half_width
    if fdir is Direction.UP:
        return Outcome.UP_UP_WITHIN if within else Outcome.UP_UP_OUTSIDE
    return Outcome.DOWN_DOWN_WITHIN if within else Outcome.DOWN_DOWN_OUTSIDE


def sd_of_changes(actual: Sequence[float], ddof: int = 1) -> float:
    """Standard deviation of the first differences of ``actual``.

    ``ddof=1`` (default) gives the sample SD, ``ddof=0`` the population SD.
    """
    values = np.asarray(actual, dtype=float)
    if values.ndim != 1 or values.size < 3:
        raise TooShortError(f"need at least 3 values (2 changes) for an SD of changes, got {values.size}")
    if not np.all(np.isfinite(values)):
        raise NonFiniteError("series contains NaN or infinite values")
    return float(np.std(np.diff(values), ddof=ddof))


@dataclass(frozen=True)
class ClassificationResult:
    """Outcome per scored period plus bookkeeping.

    ``outcomes`` and ``periods`` exclude tie periods, which are listed in
    ``excluded_periods``.
    """

    outcomes: tuple[Outcome, ...]
    periods: tuple[str, ...]
    excluded_periods: tuple[str, ...]
    band: BandSpec
    half_width: float

    @property
    def excluded_ties(self) -> int:
        return len(self.excluded_periods)

    def band_counts(self) -> dict[str, int]:
        return band_counts(self.outcomes)

    def table(self) -> ContingencyTable:
        return to_table(self.outcomes)

    def __iter__(self):
        # unpacks as (outcomes, excluded_ties)
        return iter((self.outcomes, self.excluded_ties))


def classify_series(
    pair: SeriesPair,
    band: BandSpec = BandSpec(),
    config: ClassificationConfig = ClassificationConfig(),
) -> ClassificationResult:
    """Classify every forecast period of ``pair`` in order."""
    half_width = band.resolve(pair.full_actual, ddof=config.sd_ddof)
    outcomes = []
    periods = []
    excluded = []
    for t, fc in enumerate(pair.forecast):
        prev_fc = pair.forecast[t - 1] if t > 0 else None
        out = classify_point(pair.actual[t], fc, pair.actual[t + 1], band, half_width, config, prev_forecast=prev_fc)
        label = pair.periods[t + 1]
        if out is Outcome.TIE:
            excluded.append(label)
        else:
            outcomes.append(out)
            periods.append(label)
    return ClassificationResult(tuple(outcomes), tuple(periods), tuple(excluded), band, half_width)


def band_counts(outcomes: Iterable[Outcome]) -> dict[str, int]:
    """Six-category tally keyed by the count-file column names."""
    counts = dict.fromkeys(BAND_COLUMNS, 0)
    for o in outcomes:
        o = Outcome(o)
        if o is Outcome.TIE:
            raise TiePolicyError("unresolved tie in outcome list")
        counts[o.value] += 1
    return counts


def collapse(counts: dict[str, int]) -> ContingencyTable:
    """Fold six band counts into a 2x2 table.

    Outside-band Up/Up joins the misses and outside-band Down/Down joins the
    false alarms.
    """
    missing = [k for k in BAND_COLUMNS if k not in counts]
    if missing:
        raise DirskillError(f"missing band counts: {', '.join(missing)}")
    return ContingencyTable(
        counts["uu_within"],
        counts["up_down"] + counts["dd_outside"],
        counts["down_up"] + counts["uu_outside"],
        counts["dd_within"],
    )


def to_table(outcomes: Iterable[Outcome]) -> ContingencyTable:
    return collapse(band_counts(outcomes))
