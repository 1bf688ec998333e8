"""No-skill reference forecasters and Monte Carlo null distributions of PSI.

Randomness is drawn from counter-based Philox streams keyed by
``(seed, trial_index)``, so a trial's draws never depend on which worker
ran it or in what order. Summaries are reduced with exact summation, which
makes them bit-identical for any worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np

from .classify import Direction, SeriesPair
from .contingency import ContingencyTable
from .errors import DirskillError, OutOfRangeError
from .scores import psi

DEFAULT_QUANTILES = (0.025, 0.05, 0.5, 0.95, 0.975)
_SEED_MAX = 2**64 - 1


class ForecasterKind(str, Enum):
    RANDOM = "random"
    ALWAYS_UP = "always_up"
    ALWAYS_DOWN = "always_down"
    NO_CHANGE = "no_change"


@dataclass(frozen=True)
class ReferenceForecaster:
    """A forecaster that needs no skill.

    ``NO_CHANGE`` repeats the previously observed direction. At the first
    step there is nothing to repeat: ``first_step="repeat"`` reuses the first
    observed direction, ``"exclude"`` drops that step.
    """

    kind: ForecasterKind
    p_up: float = 0.5
    seed: int = 0
    first_step: str = "repeat"

    def __post_init__(self):
        object.__setattr__(self, "kind", ForecasterKind(self.kind))
        if not 0.0 <= self.p_up <= 1.0:
            raise OutOfRangeError(f"p_up must lie in [0, 1], got {self.p_up!r}")
        _check_seed(self.seed)
        if self.first_step not in ("repeat", "exclude"):
            raise DirskillError("first_step must be 'repeat' or 'exclude'")


def _check_seed(seed: int) -> None:
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)) or not 0 <= seed <= _SEED_MAX:
        raise OutOfRangeError(f"seed must be an unsigned 64-bit integer, got {seed!r}")


def trial_rng(seed: int, index: int) -> np.random.Generator:
    """Independent generator for trial ``index`` under master ``seed``."""
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(index),))
    return np.random.Generator(np.random.Philox(ss))


def generate_directions(f: ReferenceForecaster, observed: Sequence[Direction]) -> list[Direction]:
    """One forecast direction per observed direction (one fewer for
    ``NO_CHANGE`` with ``first_step="exclude"``)."""
    observed = [Direction(o) for o in observed]
    if not observed:
        raise DirskillError("need at least one observed direction")
    if any(o is Direction.TIE for o in observed):
        raise DirskillError("observed directions must be Up or Down")
    n = len(observed)
    if f.kind is ForecasterKind.ALWAYS_UP:
        return [Direction.UP] * n
    if f.kind is ForecasterKind.ALWAYS_DOWN:
        return [Direction.DOWN] * n
    if f.kind is ForecasterKind.NO_CHANGE:
        repeated = observed[:-1]
        return [observed[0]] + repeated if f.first_step == "repeat" else repeated
    draws = trial_rng(f.seed, 0).random(n)
    return [Direction.UP if u < f.p_up else Direction.DOWN for u in draws]


def reference_series(pair_or_actual, kind: str, step: float = 1.0) -> SeriesPair:
    """Value forecasts of a no-skill forecaster for an actual series.

    ``always_up``/``always_down`` forecast the prior actual plus/minus
    ``step``. ``no_change`` forecasts the prior actual itself, so every
    forecast direction is a tie and lands in a single row once a tie policy
    of ``as_up`` or ``as_down`` resolves it.
    """
    if isinstance(pair_or_actual, SeriesPair):
        periods, actual = pair_or_actual.periods, pair_or_actual.actual
    else:
        actual = tuple(float(v) for v in pair_or_actual)
        periods = tuple(str(i) for i in range(len(actual)))
    if not step > 0:
        raise OutOfRangeError("step must be > 0")
    prior = actual[:-1]
    if kind == "always_up":
        forecast = tuple(v + step for v in prior)
    elif kind == "always_down":
        forecast = tuple(v - step for v in prior)
    elif kind == "no_change":
        forecast = tuple(prior)
    else:
        raise DirskillError(f"unknown reference forecaster {kind!r}")
    return SeriesPair(periods, actual, forecast)


def table_from_directions(forecast: Sequence[Direction], observed: Sequence[Direction]) -> ContingencyTable:
    """No-band 2x2 table of paired forecast/observed directions."""
    if len(forecast) != len(observed):
        raise DirskillError("forecast and observed direction lists differ in length")
    a = b = c = d = 0
    for fd, od in zip(forecast, observed):
        fd, od = Direction(fd), Direction(od)
        if fd is Direction.TIE or od is Direction.TIE:
            raise DirskillError("ties cannot enter a 2x2 table")
        if fd is Direction.UP:
            if od is Direction.UP:
                a += 1
            else:
                b += 1
        elif od is Direction.UP:
            c += 1
        else:
            d += 1
    return ContingencyTable(a, b, c, d)


def simulate_trial(
    seed: int, index: int, n: int, p_up_observed: float, p_up_forecast: float | None
) -> ContingencyTable:
    """Table of one null trial.

    Observed and forecast directions are independent Bernoulli draws; with
    ``p_up_forecast=None`` the forecast copies the observation (a perfect
    forecaster, useful as an upper reference).
    """
    rng = trial_rng(seed, index)
    obs_up = rng.random(n) < p_up_observed
    if p_up_forecast is None:
        fc_up = obs_up
    else:
        fc_up = rng.random(n) < p_up_forecast
    a = int(np.count_nonzero(fc_up & obs_up))
    b = int(np.count_nonzero(fc_up & ~obs_up))
    c = int(np.count_nonzero(~fc_up & obs_up))
    return ContingencyTable(a, b, c, n - a - b - c)


@dataclass(frozen=True)
class NullDistributionSummary:
    trials: int
    mean_psi: float
    sd_psi: float
    quantiles: dict[float, float] = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "trials": self.trials,
            "mean_psi": self.mean_psi,
            "sd_psi": self.sd_psi,
            "quantiles": {repr(q): v for q, v in sorted(self.quantiles.items())},
        }


def _psi_block(args) -> list[float]:
    seed, start, stop, n, p_obs, p_fc = args
    return [psi(simulate_trial(seed, i, n, p_obs, p_fc)) for i in range(start, stop)]


def null_distribution(
    n: int,
    p_up_observed: float = 0.5,
    p_up_forecast: float | None = 0.5,
    trials: int = 10_000,
    seed: int = 0,
    quantiles: Sequence[float] = DEFAULT_QUANTILES,
    workers: int = 1,
) -> NullDistributionSummary:
    """Summarize PSI over ``trials`` simulated no-skill forecast sets of size ``n``.

    ``sd_psi`` is the sample SD (0 for a single trial). Results depend only
    on the arguments other than ``workers``.
    """
    if isinstance(n, bool) or int(n) != n or n < 2:
        raise OutOfRangeError(f"n must be an integer >= 2, got {n!r}")
    if isinstance(trials, bool) or int(trials) != trials or trials < 1:
        raise OutOfRangeError(f"trials must be an integer >= 1, got {trials!r}")
    for p in (p_up_observed, p_up_forecast):
        if p is not None and not 0.0 <= p <= 1.0:
            raise OutOfRangeError(f"probabilities must lie in [0, 1], got {p!r}")
    _check_seed(seed)
    qs = tuple(float(q) for q in quantiles)
    if any(not 0.0 < q < 1.0 for q in qs):
        raise OutOfRangeError("quantiles must lie strictly between 0 and 1")
    if workers < 1:
        raise OutOfRangeError("workers must be >= 1")
    n, trials = int(n), int(trials)

    chunk = max(1, math.ceil(trials / (workers * 4)))
    blocks = [(seed, s, min(s + chunk, trials), n, p_up_observed, p_up_forecast) for s in range(0, trials, chunk)]
    if workers == 1:
        parts = [_psi_block(b) for b in blocks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_psi_block, blocks))
    values = np.fromiter((v for part in parts for v in part), dtype=float, count=trials)

    mean = math.fsum(values) / trials
    sd = math.sqrt(math.fsum((values - mean) ** 2) / (trials - 1)) if trials > 1 else 0.0
    qvals = np.quantile(values, qs) if qs else []
    return NullDistributionSummary(trials, mean, sd, {q: float(v) for q, v in zip(qs, qvals)})
