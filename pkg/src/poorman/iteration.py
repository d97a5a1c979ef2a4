"""Threshold budgets by fixed-point iteration of the step operator.

For an interior vertex v, opponent budget B and a bid b <= B::

    step_b = b + min_u f(u, B)                              if b == B
    step_b = max(b + min_u f(u, B), max_u f(u, B - b - 1))  otherwise

and the new value is the minimum over b.  Writing max_u f(u, -1) = 0 makes the
first line a special case of the second.

The first branch grows with b and the second shrinks, so the minimum sits
where they cross.  With c = B - b - 1 and H(c) = M(c) + c (strictly
increasing), the smallest b where the first branch dominates corresponds to
the largest c with H(c) <= B - 1 + m(B), which ``np.searchsorted`` finds for
all B at once.

Tables are held as int64 arrays with ``SENT`` standing in for infinity; the
public accessors translate back to ``INF``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Iterator, Union

import numpy as np

from .budget import INF, Budget
from .game import Game, require_valid

log = logging.getLogger(__name__)

SENT = np.int64(2**62)
MODES = ("scan", "binary_search")

# rows of the scan kernel's (B, b) matrix evaluated at once
_SCAN_CHUNK = 1 << 22


@dataclass(frozen=True)
class BidInterval:
    low: int
    high: int

    def __post_init__(self):
        if self.low > self.high:
            raise ValueError(f"empty bid interval [{self.low}, {self.high}]")

    def __contains__(self, b: int) -> bool:
        return self.low <= b <= self.high

    def __iter__(self):
        return iter(range(self.low, self.high + 1))


@dataclass(eq=False)
class ThresholdTable:
    game: Game
    values: np.ndarray  # shape (|V|, B_max + 1), SENT for infinity
    iterations: int = 0
    mode: str = "binary_search"
    meta: dict = field(default_factory=dict)

    @property
    def b_max(self) -> int:
        return self.values.shape[1] - 1

    def __call__(self, v: int, b: int) -> Budget:
        x = self.values[v, b]
        return INF if x >= SENT else int(x)

    value = __call__

    def row(self, v: int) -> list[Budget]:
        return [INF if x >= SENT else int(x) for x in self.values[v]]

    def rows(self) -> list[list[Budget]]:
        return [self.row(v) for v in range(self.game.n_vertices)]

    def same_values(self, other: "ThresholdTable") -> bool:
        return np.array_equal(self.values, other.values)


TableLike = Union[ThresholdTable, Callable[[int, int], Budget]]


def _min(xs):
    return min(xs, key=lambda x: (x is INF, 0 if x is INF else x))


def _max(xs):
    return max(xs, key=lambda x: (x is INF, 0 if x is INF else x))


def step_bid(g: Game, f: TableLike, v: int, b: int, B: int) -> Budget:
    """Budget needed at (v, B) when Player 1 commits to bidding ``b``."""
    if not 0 <= b <= B:
        raise ValueError(f"bid {b} outside 0..{B}")
    succ = g.successors(v)
    if not succ:
        raise ValueError(f"vertex {v} has no successors")
    first = b + _min(f(u, B) for u in succ)
    if b == B:
        return first
    return _max([first, _max(f(u, B - b - 1) for u in succ)])


def step(g: Game, f: TableLike, v: int, B: int, mode: str = "binary_search") -> Budget:
    """Minimum of ``step_bid`` over all bids 0..B."""
    if mode == "scan":
        return _min(step_bid(g, f, v, b, B) for b in range(B + 1))
    if mode != "binary_search":
        raise ValueError(f"unknown mode {mode!r}")
    succ = g.successors(v)
    m = _min(f(u, B) for u in succ)

    def dominates(b):
        # first branch >= second branch
        if b == B:
            return True
        return b + m >= _max(f(u, B - b - 1) for u in succ)

    lo, hi = 0, B
    while lo < hi:
        mid = (lo + hi) // 2
        if dominates(mid):
            hi = mid
        else:
            lo = mid + 1
    best = step_bid(g, f, v, lo, B)
    if lo > 0:
        best = _min([best, step_bid(g, f, v, lo - 1, B)])
    return best


def step_bound(g: Game, b2: int) -> int:
    """Iteration count after which the fixed point is guaranteed reached."""
    return g.n_vertices * (b2 + 1)


# -- vectorised kernels ------------------------------------------------------


def _seed(g: Game, b2: int) -> np.ndarray:
    vals = np.full((g.n_vertices, b2 + 1), SENT, dtype=np.int64)
    vals[g.target] = 0
    return vals


def _g(b, m, mext, Bs):
    """step_bid for arrays of bids, aligned with budgets ``Bs``."""
    return np.maximum(b + m, mext[Bs - b])


class _VertexCache:
    """m(B), M(c) and H(c) of one vertex, refreshed from a given budget upward."""

    def __init__(self, b2: int):
        self.m = np.zeros(b2 + 1, dtype=np.int64)
        self.mext = np.zeros(b2 + 2, dtype=np.int64)  # mext[c + 1] = M(c)
        self.h = np.full(b2 + 2, -1, dtype=np.int64)  # h[c + 1] = M(c) + c
        self.c = np.arange(-1, b2 + 1, dtype=np.int64)

    def refresh(self, sub: np.ndarray, lo: int) -> None:
        self.m[lo:] = sub.min(axis=0)
        self.mext[lo + 1 :] = sub.max(axis=0)
        self.h[lo + 1 :] = self.mext[lo + 1 :] + self.c[lo + 1 :]


def _binary_rows(cache: _VertexCache, Bs: np.ndarray) -> np.ndarray:
    m = cache.m[Bs]
    k = Bs - 1 + m
    c = np.searchsorted(cache.h, k, side="right") - 2
    c = np.minimum(c, Bs - 1)
    b = Bs - 1 - c
    best = _g(b, m, cache.mext, Bs)
    bm = np.maximum(b - 1, 0)
    best = np.minimum(best, _g(bm, m, cache.mext, Bs))
    return np.minimum(best, SENT)


def _scan_row(sub: np.ndarray) -> np.ndarray:
    b2 = sub.shape[1] - 1
    m = sub.min(axis=0)
    mext = np.concatenate(([0], sub.max(axis=0)))
    out = np.empty(b2 + 1, dtype=np.int64)
    rows = max(1, _SCAN_CHUNK // (b2 + 1))
    bids = np.arange(b2 + 1, dtype=np.int64)
    for start in range(0, b2 + 1, rows):
        Bs = np.arange(start, min(b2 + 1, start + rows), dtype=np.int64)
        bb = np.broadcast_to(bids, (len(Bs), b2 + 1))
        valid = bb <= Bs[:, None]
        idx = np.where(valid, Bs[:, None] - bb, 0)
        vals = np.maximum(bb + m[Bs][:, None], mext[idx])
        vals = np.where(valid, vals, SENT)
        out[start : start + len(Bs)] = vals.min(axis=1)
    return np.minimum(out, SENT)


def iterate(g: Game, b2: int, mode: str = "binary_search", copy: bool = True) -> Iterator[np.ndarray]:
    """Yield the Jacobi iterates f_0, f_1, ... until two in a row agree.

    The last yielded array is the fixed point (it equals the one before it).
    Only budgets at or above the first changed entry of some successor are
    recomputed; this yields the same iterates as a full sweep.  With
    ``copy=False`` the same array is yielded each time and updated in place.
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    require_valid(g)
    if b2 < 0:
        raise ValueError("b2 must be non-negative")
    vals = _seed(g, b2)
    yield vals.copy() if copy else vals
    interior = g.interior()
    succ = {v: list(g.successors(v)) for v in interior}
    caches = {v: _VertexCache(b2) for v in interior} if mode == "binary_search" else {}
    Bs_all = np.arange(b2 + 1, dtype=np.int64)
    # first budget index that changed in the last sweep, per vertex
    changed: dict[int, int | None] = {v: 0 for v in range(g.n_vertices)}
    while True:
        updates = []
        for v in interior:
            starts = [changed[u] for u in succ[v] if changed[u] is not None]
            if not starts:
                continue
            lo = min(starts)
            sub = vals[succ[v], lo:]
            if mode == "binary_search":
                cache = caches[v]
                cache.refresh(sub, lo)
                new = _binary_rows(cache, Bs_all[lo:])
            else:
                lo = 0
                new = _scan_row(vals[succ[v]])
            updates.append((v, lo, new))
        changed = {v: None for v in range(g.n_vertices)}
        for v, lo, new in updates:
            diff = np.flatnonzero(vals[v, lo:] != new)
            if len(diff):
                first = lo + int(diff[0])
                changed[v] = first
                vals[v, first:] = new[first - lo :]
        done = all(x is None for x in changed.values())
        yield vals.copy() if copy and not done else vals
        if done:
            return


def solve(
    g: Game,
    b2: int,
    mode: str = "binary_search",
    max_iterations: int | None = None,
) -> ThresholdTable:
    """Threshold budgets of every vertex for opponent budgets 0..b2.

    ``iterations`` counts sweeps, including the last one that found no change.
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    require_valid(g)
    if max_iterations is None:
        max_iterations = step_bound(g, b2) + 1
    sweeps = -1
    vals = None
    for vals in iterate(g, b2, mode, copy=False):
        sweeps += 1
        if sweeps > max_iterations:
            raise RuntimeError(f"no fixed point after {max_iterations} sweeps")
    log.debug("solved %d vertices to B=%d in %d sweeps (%s)", g.n_vertices, b2, sweeps, mode)
    return ThresholdTable(g, vals, iterations=sweeps, mode=mode)


def history(g: Game, b2: int, mode: str = "binary_search") -> list[ThresholdTable]:
    """Every iterate as a table; meant for small inspections."""
    return [ThresholdTable(g, a, iterations=i, mode=mode) for i, a in enumerate(iterate(g, b2, mode))]


# -- bids and moves ------------------------------------------------------------


def _threshold(table: TableLike, v: int, B: int) -> Budget:
    t = table(v, B)
    if t is INF:
        raise ValueError(f"vertex {v} has no winning budget at B={B}")
    return t


def winning_bids(g: Game, table: TableLike, v: int, B: int) -> BidInterval:
    """Bids that win for Player 1 holding exactly the threshold budget at (v, B)."""
    if v == g.target:
        raise ValueError("the target needs no bid")
    T = _threshold(table, v, B)
    succ = g.successors(v)
    m = _min(table(u, B) for u in succ)
    high = T - m

    def safe(b):
        # Player 2 outbidding b still leaves Player 1 at or above threshold
        return b == B or _max(table(u, B - b - 1) for u in succ) <= T

    # safe is monotone in b since thresholds grow with the opponent budget
    low, hi = 0, B
    while low < hi:
        mid = (low + hi) // 2
        if safe(mid):
            hi = mid
        else:
            low = mid + 1
    return BidInterval(low, high)


def winning_moves(g: Game, table: TableLike, v: int, B: int) -> set[int]:
    """Successors Player 1 can move to after winning a bid at the threshold.

    With budget T at (v, B) and the cheapest winning bid l, any successor u
    with T_u(B) <= T - l keeps Player 1 at or above its threshold.
    """
    T = _threshold(table, v, B)
    low = winning_bids(g, table, v, B).low
    out = set()
    for u in g.successors(v):
        t = table(u, B)
        if t is not INF and t <= T - low:
            out.add(u)
    return out


def cheapest_moves(g: Game, table: TableLike, v: int, B: int) -> set[int]:
    """Successors with the smallest threshold at B."""
    vals = {u: table(u, B) for u in g.successors(v)}
    best = _min(vals.values())
    return {u for u, t in vals.items() if t == best}
