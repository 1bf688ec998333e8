"""2x2 contingency table of forecasted vs observed directions.

Layout (rows = forecast, columns = observation)::

                 obs Up   obs Down
    fcst Up        a         b        a + b
    fcst Down      c         d        c + d
                 a + c     b + d        n
"""

from __future__ import annotations

import numbers
from dataclasses import dataclass
from typing import NamedTuple

from .errors import AllZeroError, NegativeCountError


class Marginals(NamedTuple):
    forecast_up: int
    forecast_down: int
    observed_up: int
    observed_down: int
    n: int


def _check_count(name: str, value) -> int:
    # bool is Integral but never a meaningful count
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        raise NegativeCountError(f"{name} must be an integer count, got {value!r}")
    if value < 0:
        raise NegativeCountError(f"{name} must be non-negative, got {value}")
    return int(value)


@dataclass(frozen=True)
class ContingencyTable:
    """Hits ``a``, false alarms ``b``, misses ``c`` and correct rejections ``d``.

    Cells are exact integers. Tables with an empty row or column are valid;
    only the all-zero table is rejected.
    """

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        for name in "abcd":
            object.__setattr__(self, name, _check_count(name, getattr(self, name)))
        if self.a == self.b == self.c == self.d == 0:
            raise AllZeroError("contingency table has no observations (a = b = c = d = 0)")

    @property
    def n(self) -> int:
        return self.a + self.b + self.c + self.d

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def marginals(self) -> Marginals:
        return marginals(self)

    def __add__(self, other: ContingencyTable) -> ContingencyTable:
        if not isinstance(other, ContingencyTable):
            return NotImplemented
        return merge(self, other)


def from_counts(a: int, b: int, c: int, d: int) -> ContingencyTable:
    """Build a validated table from the four cell counts."""
    return ContingencyTable(a, b, c, d)


def marginals(t: ContingencyTable) -> Marginals:
    """Row and column totals: ``(a+b, c+d, a+c, b+d, n)``."""
    return Marginals(t.a + t.b, t.c + t.d, t.a + t.c, t.b + t.d, t.n)


def merge(t1: ContingencyTable, t2: ContingencyTable) -> ContingencyTable:
    """Cellwise sum of two tables, e.g. to pool sub-periods."""
    return ContingencyTable(t1.a + t2.a, t1.b + t2.b, t1.c + t2.c, t1.d + t2.d)
