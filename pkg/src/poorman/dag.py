"""Single-pass threshold solver for acyclic games.

Vertices are finished in reverse topological order, so every successor row
is final when a vertex is handled.  The continuous ratio t_v pins the
threshold inside the pipe [t_v (B - maxpath), t_v B]; with T' the smallest
successor threshold at B, an optimal bid lies in

    [max(0, ceil(t_v (B - maxpath)) - T'),  min(B, floor(t_v B) - T')]

and a bisection for the crossing point only has to cover that interval.
"""

from __future__ import annotations

import logging
from fractions import Fraction

import numpy as np

from .budget import INF
from .game import Game, max_path_lengths, require_valid, topological_order
from .iteration import SENT, ThresholdTable
from .ratios import ratios_dag

log = logging.getLogger(__name__)

_INT64_SAFE = 1 << 62


def _scaled(t: Fraction, x: np.ndarray, up: bool) -> np.ndarray:
    """floor (or ceil) of t * x, exactly."""
    p, q = t.numerator, t.denominator
    big = max(abs(int(x.min(initial=0))), abs(int(x.max(initial=0)))) + 1
    if p * big < _INT64_SAFE:
        prod = x * p
        return -((-prod) // q) if up else prod // q
    # rare: fall back to Python integers
    vals = [(-((-(p * int(b))) // q) if up else (p * int(b)) // q) for b in x]
    return np.array(vals, dtype=object)


def _step_rows(m, mext, Bs, lo, hi):
    """Crossing-point bisection restricted to [lo, hi] for every budget."""
    lo = lo.copy()
    hi = hi.copy()
    while True:
        active = lo < hi
        if not active.any():
            break
        mid = (lo + hi) >> 1
        cond = mid + m >= mext[Bs - mid]
        hi = np.where(active & cond, mid, hi)
        lo = np.where(active & ~cond, mid + 1, lo)
    b = lo
    best = np.maximum(b + m, mext[Bs - b])
    bm = np.maximum(b - 1, 0)
    best = np.minimum(best, np.maximum(bm + m, mext[Bs - bm]))
    return np.minimum(best, SENT)


def solve_dag(g: Game, b2: int) -> ThresholdTable:
    """Threshold table of an acyclic game; equal to ``iteration.solve``."""
    require_valid(g)
    order = topological_order(g)
    ratios = ratios_dag(g)
    paths = max_path_lengths(g)
    vals = np.full((g.n_vertices, b2 + 1), SENT, dtype=np.int64)
    vals[g.target] = 0
    Bs = np.arange(b2 + 1, dtype=np.int64)
    fallbacks = 0
    for v in order:
        if v in (g.target, g.sink):
            continue
        t = ratios[v]
        if t is INF:
            continue
        sub = vals[list(g.successors(v))]
        m = sub.min(axis=0)
        mext = np.concatenate(([0], sub.max(axis=0)))
        lower = np.maximum(_scaled(t, Bs - paths[v], up=True), 0)
        upper = _scaled(t, Bs, up=False)
        if lower.dtype == object or upper.dtype == object:
            lower = np.array([int(x) for x in lower], dtype=object)
            upper = np.array([int(x) for x in upper], dtype=object)
            lo = np.array([max(0, int(a) - int(c)) for a, c in zip(lower, m)], dtype=np.int64)
            hi = np.array([min(int(B), int(a) - int(c)) for a, c, B in zip(upper, m, Bs)], dtype=np.int64)
        else:
            lo = np.maximum(lower - m, 0)
            hi = np.minimum(upper - m, Bs)
        bad = lo > hi
        lo = np.where(bad, 0, lo)
        hi = np.where(bad, Bs, hi)
        row = _step_rows(m, mext, Bs, lo, hi)
        # the value must land inside the pipe; otherwise redo those budgets
        outside = bad | (row < lower.astype(np.int64)) | (row > upper.astype(np.int64))
        if outside.any():
            idx = np.flatnonzero(outside)
            fallbacks += len(idx)
            log.info("vertex %s: full bid search at %d budgets", g.name(v), len(idx))
            full = _step_rows(m, mext, Bs, np.zeros_like(Bs), Bs.copy())
            row[idx] = full[idx]
        vals[v] = row
    return ThresholdTable(g, vals, iterations=1, mode="dag", meta={"fallbacks": fallbacks})
