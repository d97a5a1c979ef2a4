"""Continuous threshold ratios and the pipe bounds they induce.

A ratio is a ``Fraction`` or ``INF``.  On a DAG every vertex's ratio follows
from its successors' extreme ratios t+ (max) and t- (min)::

    t_v = t+ (1 + t-) / (1 + t+)      (t_v = 1 + t- when t+ is infinite)
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Optional, Union

from .budget import INF, Infinity
from .game import Game, longest_simple_path_lengths, max_path_lengths, topological_order
from .iteration import ThresholdTable

Rational = Union[Fraction, Infinity]
RatioMap = Dict[int, Rational]


def combine(t_plus: Rational, t_minus: Rational) -> Rational:
    """Ratio of a vertex from its successors' largest and smallest ratios."""
    if t_minus is INF:
        return INF
    if t_plus is INF:
        return 1 + Fraction(t_minus)
    t_plus = Fraction(t_plus)
    return t_plus * (1 + Fraction(t_minus)) / (1 + t_plus)


def _extremes(values: Iterable[Rational]):
    vals = list(values)
    finite = [x for x in vals if x is not INF]
    t_plus = INF if len(finite) < len(vals) else max(finite)
    t_minus = min(finite) if finite else INF
    return t_plus, t_minus


def ratios_dag(g: Game) -> RatioMap:
    """Exact continuous ratio of every vertex of a DAG."""
    out: RatioMap = {}
    for v in topological_order(g):
        if v == g.target:
            out[v] = Fraction(0)
        elif v == g.sink:
            out[v] = INF
        else:
            out[v] = combine(*_extremes(out[u] for u in g.successors(v)))
    return out


def pipe_bounds(t_v: Rational, maxpath: int, b2: int) -> tuple[Fraction, Fraction]:
    """Lower and upper pipe bound on the threshold at opponent budget ``b2``."""
    if t_v is INF:
        raise ValueError("pipe bounds need a finite ratio")
    t_v = Fraction(t_v)
    lower = max(Fraction(0), t_v * (b2 - maxpath))
    return lower, t_v * b2


@dataclass(frozen=True)
class PipeViolation:
    vertex: int
    b: int
    value: int
    bound: Fraction
    side: str  # "lower" or "upper"


def _bracket(r) -> tuple[Rational, Rational]:
    if isinstance(r, tuple):
        return r
    return r, r


def check_pipe(
    g: Game,
    table: ThresholdTable,
    ratios: Mapping[int, Union[Rational, tuple]],
    offset: Optional[Mapping[int, int] | int] = None,
    vertices: Optional[Iterable[int]] = None,
    check_lower: Optional[bool] = None,
) -> list[PipeViolation]:
    """Entries of ``table`` outside the pipe.

    ``ratios`` maps a vertex to an exact ratio or to a (low, high) bracket
    around it; the lower bound uses low and the upper bound uses high, so a
    reported violation holds for every ratio in the bracket.  On a DAG the
    lower-bound offset is the vertex's longest path to a leaf.  On cyclic
    games only the upper bound is checked unless ``check_lower`` is set, in
    which case ``offset`` defaults to the longest simple path to a leaf.
    """
    try:
        paths = max_path_lengths(g)
        dag = True
    except ValueError:
        paths = None
        dag = False
    if check_lower is None:
        check_lower = dag
    if offset is None:
        offsets = paths if dag else longest_simple_path_lengths(g)
    elif isinstance(offset, int):
        offsets = [offset] * g.n_vertices
    else:
        offsets = [offset.get(v, g.n_vertices) for v in range(g.n_vertices)]
    if vertices is None:
        vertices = g.interior()
    out: list[PipeViolation] = []
    for v in vertices:
        lo, hi = _bracket(ratios[v])
        hi = None if hi is INF else Fraction(hi)
        lo = None if lo is INF or not check_lower else Fraction(lo)
        row = table.row(v)
        for b, value in enumerate(row):
            if value is INF:
                continue
            if hi is not None and value * hi.denominator > hi.numerator * b:
                out.append(PipeViolation(v, b, value, hi * b, "upper"))
            if lo is not None and value * lo.denominator < lo.numerator * (b - offsets[v]):
                out.append(PipeViolation(v, b, value, lo * (b - offsets[v]), "lower"))
    out.sort(key=lambda p: (p.b, p.vertex, p.side))
    return out


# -- cyclic games ----------------------------------------------------------


def _round(x: Fraction, den: int, up: bool) -> Fraction:
    scaled = x * den
    n = math.ceil(scaled) if up else math.floor(scaled)
    return Fraction(n, den)


def ratio_bracket(
    g: Game, digits: int = 40, max_rounds: int = 100_000, tol: Optional[Fraction] = None
) -> dict[int, tuple[Rational, Rational]]:
    """Rational brackets around the continuous ratios of a possibly cyclic game.

    The combine rule is monotone in every successor ratio, so iterating it
    from 0 climbs towards the least fixed point and iterating from INF
    descends towards the greatest one.  Iterates are rounded outward to a
    grid with ``10**digits`` denominators so they stay valid bounds while
    keeping the fractions small.  Stops when every finite bracket is
    narrower than ``tol`` (default ``10**-(digits // 2)``) or both sequences
    stall.
    """
    den = 10**digits
    if tol is None:
        tol = Fraction(1, 10 ** (digits // 2))
    interior = g.interior()

    def sweep(cur, up):
        nxt = dict(cur)
        for v in interior:
            t = combine(*_extremes(cur[u] for u in g.successors(v)))
            nxt[v] = t if t is INF else _round(t, den, up)
        return nxt

    base = {g.target: Fraction(0), g.sink: INF}
    low = {**base, **{v: Fraction(0) for v in interior}}
    high = {**base, **{v: INF for v in interior}}
    for _ in range(max_rounds):
        new_low, new_high = sweep(low, False), sweep(high, True)
        # rounding may undo monotone progress; keep the tighter side
        for v in interior:
            if new_low[v] is INF or (low[v] is not INF and new_low[v] < low[v]):
                new_low[v] = low[v] if new_low[v] is not INF else INF
            if high[v] is not INF and (new_high[v] is INF or new_high[v] > high[v]):
                new_high[v] = high[v]
        stalled = new_low == low and new_high == high
        low, high = new_low, new_high
        if stalled or all(
            high[v] is not INF and low[v] is not INF and high[v] - low[v] < tol
            for v in interior
        ):
            break
    return {v: (low[v], high[v]) for v in range(g.n_vertices)}
