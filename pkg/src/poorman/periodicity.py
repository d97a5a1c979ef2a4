"""Eventual periodicity of thresholds on DAGs: prediction and detection.

A threshold function is (x, y)-climbing from B0 when T(B + x) = T(B) + y for
every B >= B0.  On a DAG every vertex climbs.  Prediction follows the
inductive construction: successors with the smallest ratio merge into one
climbing function (lcm of their periods), likewise those with the largest
ratio, and the two compose.

Start bounds.  Let t1 < ... < tk be the distinct successor ratios, p the
largest successor max-path, m(B) / M(c) the smallest / largest successor
threshold.  From the pipe bounds:

* m equals the minimum over the t1 group once B >= t2 p / (t2 - t1);
* M equals the maximum over the tk group once c >= tk p / (tk - t(k-1));
* with S_M the start of M, every bid whose crossing index c = B - b - 1 lies
  below S_M is strictly worse than t_v B once
  B > (S_M + t1 p)(1 + tk) / (1 + t1);
* the crossing min_c max(A - c, M(c)) shifts by w_y when A grows by
  w_x + w_y once A > (S_M + tk)(1 + tk), where A = B - 1 + m(B).

The predicted start is the first B satisfying all of these.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional

import numpy as np

from .budget import INF
from .game import Game, max_path_lengths, topological_order
from .iteration import SENT, ThresholdTable
from .ratios import RatioMap, ratios_dag


@dataclass(frozen=True)
class PeriodSpec:
    b_start: int
    u_x: int
    u_y: int

    def __post_init__(self):
        if self.u_x < 1 or self.u_y < 0 or self.b_start < 0:
            raise ValueError(f"invalid period spec {self}")

    @property
    def slope(self) -> Fraction:
        return Fraction(self.u_y, self.u_x)

    def holds_on(self, row) -> bool:
        """True iff row[B + u_x] == row[B] + u_y for all B >= b_start in range."""
        row = np.asarray(row)
        if self.b_start + self.u_x >= len(row):
            return True
        a = row[self.b_start : len(row) - self.u_x]
        b = row[self.b_start + self.u_x :]
        return bool(np.all(b == a + self.u_y))


def compose_period(u: tuple[int, int], w: tuple[int, int]) -> tuple[int, int]:
    """Climbing period of a vertex from its cheapest (u) and dearest (w) successor.

    ``w = (0, 1)`` stands for the sink, whose threshold is infinite: the vertex
    then has T(B) = B + m(B) and the rule still gives the right period.
    """
    ux, uy = u
    wx, wy = w
    if ux < 1:
        raise ValueError("u_x must be at least 1")
    if wx < 0 or wx + wy < 1:
        raise ValueError("w must be a climbing period or the sink's (0, 1)")
    return ux * (wx + wy), wy * (ux + uy)


def _merge(specs: list[PeriodSpec], ratio: Fraction) -> PeriodSpec:
    """Period of the pointwise min (or max) of equally sloped climbing functions."""
    lcm = 1
    for s in specs:
        lcm = lcm * s.u_x // math.gcd(lcm, s.u_x)
    rise = lcm * ratio
    if rise.denominator != 1:
        raise ValueError("merged rise is not integral; ratios and periods disagree")
    return PeriodSpec(max(s.b_start for s in specs), lcm, int(rise))


def _first_above(x: Fraction) -> int:
    """Smallest natural number strictly greater than x."""
    return max(0, math.floor(x) + 1)


def _first_at_least(x: Fraction) -> int:
    return max(0, math.ceil(x))


def predict_period_dag(
    g: Game,
    ratios: Optional[RatioMap] = None,
    child_specs: Optional[Mapping[int, PeriodSpec]] = None,
) -> dict[int, Optional[PeriodSpec]]:
    """Predicted climbing spec of every vertex; None where the threshold is infinite.

    ``child_specs`` overrides the prediction at given vertices, for instance
    with minimal periods known from closed forms.  Predicted starts are
    sound but not minimal.
    """
    order = topological_order(g)
    if ratios is None:
        ratios = ratios_dag(g)
    paths = max_path_lengths(g)
    child_specs = dict(child_specs or {})
    out: dict[int, Optional[PeriodSpec]] = {}
    for v in order:
        if v in child_specs:
            out[v] = child_specs[v]
            continue
        if v == g.target:
            out[v] = PeriodSpec(0, 1, 0)
            continue
        if v == g.sink or ratios[v] is INF:
            out[v] = None
            continue
        out[v] = _predict_vertex(g, v, ratios, paths, out)
    return out


def _predict_vertex(g, v, ratios, paths, known) -> PeriodSpec:
    succ = g.successors(v)
    groups: dict = {}
    for u in succ:
        groups.setdefault(ratios[u], []).append(u)
    finite = sorted(r for r in groups if r is not INF)
    t1 = finite[0]
    p = max(paths[u] for u in succ)
    low = _merge([known[u] for u in groups[t1]], Fraction(t1))
    s_m = low.b_start
    if len(finite) > 1:
        t2 = finite[1]
        s_m = max(s_m, _first_at_least(Fraction(t2 * p) / (t2 - t1)))
    if t1 == 0 and len(groups) == 1:
        # every successor has ratio 0, so all thresholds vanish
        return PeriodSpec(s_m, 1, 0)
    if INF in groups:
        ux, uy = compose_period((low.u_x, low.u_y), (0, 1))
        return PeriodSpec(s_m, ux, uy)
    tk = finite[-1]
    high = _merge([known[u] for u in groups[tk]], Fraction(tk))
    s_big = high.b_start
    if len(finite) > 1:
        tk1 = finite[-2]
        s_big = max(s_big, _first_at_least(Fraction(tk * p) / (tk - tk1)))
    t1, tk = Fraction(t1), Fraction(tk)
    start = max(
        s_m,
        s_big + 1,
        _first_above((s_big + t1 * p) * (1 + tk) / (1 + t1)),
        _first_above((s_big + tk) * (1 + tk)) + 1,
    )
    ux, uy = compose_period((low.u_x, low.u_y), (high.u_x, high.u_y))
    return PeriodSpec(start, ux, uy)


def _candidate(row: np.ndarray, ux: int) -> tuple[int, int]:
    """(start, rise) of the longest tail on which row climbs with step ux."""
    d = row[ux:] - row[:-ux]
    uy = int(d[-1])
    bad = np.flatnonzero(d != uy)
    return (int(bad[-1]) + 1 if len(bad) else 0), uy


def detect_period(
    table: ThresholdTable,
    v: int,
    min_periods: int = 3,
    max_period: Optional[int] = None,
) -> Optional[PeriodSpec]:
    """Empirical climbing spec of ``table`` at ``v``, or None.

    Every candidate u_x whose climbing tail holds for at least
    ``min_periods`` full periods is considered.  The candidate with the
    earliest start wins (a short tail can fit a spurious small period); it
    is then reduced to its smallest divisor that climbs from no later.
    """
    row = np.asarray(table.values[v])
    if np.any(row >= SENT):
        return None
    b_max = len(row) - 1
    if max_period is None:
        max_period = b_max // min_periods
    found: dict[int, tuple[int, int]] = {}
    for ux in range(1, min(max_period, b_max) + 1):
        start, uy = _candidate(row, ux)
        if uy >= 0 and b_max - start >= min_periods * ux:
            found[ux] = (start, uy)
    if not found:
        return None
    best = min(found, key=lambda ux: (found[ux][0], ux))
    s0 = found[best][0]
    for d in range(1, best + 1):
        if best % d == 0 and d in found and found[d][0] <= s0:
            return PeriodSpec(found[d][0], d, found[d][1])
    return PeriodSpec(s0, best, found[best][1])
