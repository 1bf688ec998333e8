"""Joint skill of several variables from their individual PSI values.

Each PSI in [-1, 1] is shifted into [0, 2], the shifted values are combined
by a (weighted) root mean square, and the shift is undone. All components
at -1 give -1, all at 1 give 1, and equal components return their common
value. Weights default to 1/N; unequal weights are an extension.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import DirskillError, NonFiniteError, OutOfRangeError
from .scores import skill_score

WEIGHT_TOL = 1e-9


def composite_index(x: float, y: float) -> float:
    """Root mean square of two values in [0, 1]."""
    for v in (x, y):
        if not math.isfinite(v):
            raise NonFiniteError(f"composite index input {v!r} is not finite")
        if not 0.0 <= v <= 1.0:
            raise OutOfRangeError(f"composite index inputs must lie in [0, 1], got {v!r}")
    return math.sqrt((x * x + y * y) / 2)


@dataclass(frozen=True)
class CompositeInput:
    components: tuple[tuple[str, float], ...]
    weights: tuple[float, ...] | None = None

    def __post_init__(self):
        comps = tuple((str(label), float(value)) for label, value in self.components)
        if not comps:
            raise DirskillError("need at least one component")
        for label, value in comps:
            if not math.isfinite(value):
                raise NonFiniteError(f"component {label!r} is not finite")
            if not -1.0 <= value <= 1.0:
                raise OutOfRangeError(f"component {label!r} = {value!r} lies outside [-1, 1]")
        object.__setattr__(self, "components", comps)
        if self.weights is not None:
            weights = tuple(float(w) for w in self.weights)
            if len(weights) != len(comps):
                raise DirskillError(f"got {len(weights)} weights for {len(comps)} components")
            if any(not (w > 0 and math.isfinite(w)) for w in weights):
                raise OutOfRangeError("weights must be finite and > 0")
            if abs(math.fsum(weights) - 1.0) > WEIGHT_TOL:
                raise OutOfRangeError(f"weights must sum to 1, got {math.fsum(weights)!r}")
            object.__setattr__(self, "weights", weights)

    @classmethod
    def build(cls, components, weights=None) -> CompositeInput:
        """Accept a mapping, (label, value) pairs, or bare values."""
        if isinstance(components, CompositeInput):
            return components
        if isinstance(components, Mapping):
            pairs = list(components.items())
        else:
            pairs = []
            for i, item in enumerate(components):
                if isinstance(item, (tuple, list)) and len(item) == 2:
                    pairs.append((item[0], item[1]))
                else:
                    pairs.append((f"v{i + 1}", item))
        return cls(tuple(pairs), None if weights is None else tuple(weights))

    @property
    def values(self) -> tuple[float, ...]:
        return tuple(v for _, v in self.components)

    def effective_weights(self) -> tuple[float, ...]:
        if self.weights is not None:
            return self.weights
        n = len(self.components)
        return (1.0 / n,) * n


@dataclass(frozen=True)
class CompositeResult:
    joint: float
    per_component: tuple[tuple[str, float, float], ...]  # (label, psi, skill %)
    weights: tuple[float, ...]

    @property
    def skill_percent(self) -> float:
        return skill_score(self.joint)


def joint_psi(values: Sequence[float], weights: Sequence[float] | None = None) -> float:
    """Shifted root mean square of PSI values; see :func:`psi_n`."""
    return psi_n(CompositeInput.build(list(values), weights)).joint


def psi_n(components, weights: Sequence[float] | None = None) -> CompositeResult:
    """Combine per-variable PSI values into one joint score.

    ``components`` may be a :class:`CompositeInput`, a mapping of label to
    PSI, a sequence of ``(label, psi)`` pairs, or a sequence of bare values.
    """
    inp = CompositeInput.build(components, weights)
    values = inp.values
    w = inp.effective_weights()
    if all(v == values[0] for v in values):
        joint = values[0]
    else:
        mean_sq = math.fsum(wi * (1.0 + v) ** 2 for wi, v in zip(w, values))
        if inp.weights is not None:
            # weights sum to 1 only within tolerance
            mean_sq /= math.fsum(w)
        joint = min(1.0, max(-1.0, math.sqrt(mean_sq) - 1.0))
    per = tuple((label, v, skill_score(v)) for label, v in inp.components)
    return CompositeResult(joint, per, w)
