"""Exhaustive minimax solver used as ground truth on small games.

Win sets are stored as bitmasks, one per budget level (B1, B2).  A level only
depends on levels with a smaller B1 (Player 1 won the bid and paid) or a
smaller B2 (Player 2 won and paid).  Zero bids keep the level fixed, and since
ties go to Player 1 a zero-zero round lets Player 1 move; inside a level the
winning region is therefore a least fixed point (an attractor), which also
makes infinite plays count as losses for Player 1.
"""

from __future__ import annotations

from dataclasses import dataclass

from .budget import INF, Budget
from .game import Configuration, Game, require_valid

DEFAULT_LIMIT = 2_000_000


class OracleLimitError(ValueError):
    """The requested instance is too large for exhaustive search."""


@dataclass(frozen=True)
class BiddingMatrix:
    """entries[b1][b2] is the winner (1 or 2) once bids b1, b2 are revealed."""

    entries: tuple[tuple[int, ...], ...]

    @property
    def b1_max(self) -> int:
        return len(self.entries) - 1

    @property
    def b2_max(self) -> int:
        return len(self.entries[0]) - 1

    def __getitem__(self, key: tuple[int, int]) -> int:
        b1, b2 = key
        return self.entries[b1][b2]

    def one_rows(self) -> list[int]:
        return [b1 for b1, row in enumerate(self.entries) if all(x == 1 for x in row)]

    def two_columns(self) -> list[int]:
        cols = range(self.b2_max + 1)
        return [b2 for b2 in cols if all(row[b2] == 2 for row in self.entries)]


def check_local_determinacy(m: BiddingMatrix) -> bool:
    """True iff the matrix has a row of 1s or a column of 2s."""
    return bool(m.one_rows() or m.two_columns())


def matrix_structure_violations(m: BiddingMatrix) -> list[str]:
    """Report breaches of the row/column constancy rules around the diagonal."""
    out = []
    e = m.entries
    for b1 in range(m.b1_max + 1):
        for b2 in range(m.b2_max + 1):
            # above the diagonal a column is constant
            if b2 > b1 and b1 > 0 and e[b1][b2] != e[0][b2]:
                out.append(f"column {b2} not constant above diagonal at row {b1}")
            # left of the diagonal a row is constant
            if b1 > b2 and b2 > 0 and e[b1][b2] != e[b1][0]:
                out.append(f"row {b1} not constant left of diagonal at column {b2}")
        if 1 <= b1 <= m.b2_max and e[b1][b1] != e[b1][b1 - 1]:
            out.append(f"diagonal entry {b1} differs from its left neighbour")
    return out


class Oracle:
    """One solving session with its own cache of win sets."""

    def __init__(self, game: Game, limit: int = DEFAULT_LIMIT):
        require_valid(game)
        self.game = game
        self.limit = limit
        n = game.n_vertices
        self._succ_mask = [sum(1 << u for u in game.successors(v)) for v in range(n)]
        self._interior = game.interior()
        self._interior_mask = sum(1 << v for v in self._interior)
        self._t_bit = 1 << game.target
        # _levels[b1][b2] -> bitmask of vertices Player 1 wins from
        self._levels: list[list[int]] = []
        # per-level helper masks, same indexing
        self._some: list[list[int]] = []
        self._every: list[list[int]] = []

    # -- level computation -------------------------------------------------

    def _guard(self, b1: int, b2: int) -> None:
        size = (b1 + 1) * (b2 + 1) * self.game.n_vertices
        if size > self.limit:
            raise OracleLimitError(
                f"instance size {size} exceeds oracle limit {self.limit}"
            )

    def _some_succ(self, w: int) -> int:
        """Interior vertices with at least one successor in w."""
        out = 0
        for v in self._interior:
            if self._succ_mask[v] & w:
                out |= 1 << v
        return out

    def _every_succ(self, w: int) -> int:
        """Interior vertices whose successors all lie in w."""
        out = 0
        for v in self._interior:
            if self._succ_mask[v] & ~w == 0:
                out |= 1 << v
        return out

    def _solve_level(self, b1: int, b2: int) -> int:
        every_row = self._every[b1]
        # z: vertices where Player 2 winning with any positive bid still loses
        z = self._interior_mask
        for k in range(1, b2 + 1):
            z &= every_row[b2 - k]
        # suffix[k] = AND over b2' in [k, b2] of every(b1, b2 - b2')
        suffix = [self._interior_mask] * (b2 + 2)
        for k in range(b2, 0, -1):
            suffix[k] = suffix[k + 1] & every_row[b2 - k]
        direct = 0
        for bid in range(1, b1 + 1):
            move = self._some[b1 - bid][b2]
            if not move:
                continue
            guard = self._interior_mask if bid >= b2 else suffix[bid + 1]
            direct |= move & guard
        w = self._t_bit | direct
        while True:
            grow = self._some_succ(w) & z & ~w
            if not grow:
                return w
            w |= grow

    def ensure(self, b1: int, b2: int) -> None:
        """Compute every level (x, y) with x <= b1 and y <= b2."""
        self._guard(b1, b2)
        for x in range(b1 + 1):
            if x == len(self._levels):
                self._levels.append([])
                self._some.append([])
                self._every.append([])
            row = self._levels[x]
            for y in range(len(row), b2 + 1):
                w = self._solve_level(x, y)
                row.append(w)
                self._some[x].append(self._some_succ(w))
                self._every[x].append(self._every_succ(w))

    def _win_set(self, b1: int, b2: int) -> int:
        if b1 >= len(self._levels) or b2 >= len(self._levels[b1]):
            self.ensure(b1, b2)
        return self._levels[b1][b2]

    # -- queries -----------------------------------------------------------

    def _check(self, v: int, b1: int, b2: int) -> None:
        if not 0 <= v < self.game.n_vertices:
            raise ValueError(f"vertex {v} out of range")
        if b1 < 0 or b2 < 0:
            raise ValueError("budgets must be non-negative")

    def winner(self, v: int, b1: int, b2: int) -> int:
        self._check(v, b1, b2)
        return 1 if self._win_set(b1, b2) >> v & 1 else 2

    def threshold(self, v: int, b2: int, cap: int | None = None, start: int = 0) -> Budget:
        """Least b1 with which Player 1 wins from (v, b1, b2); INF beyond the cap.

        ``start`` may be a known lower bound (e.g. the threshold at b2 - 1).
        """
        self._check(v, 0, b2)
        if v == self.game.sink:
            return INF
        if cap is None:
            cap = default_cap(self.game, b2)
        for b1 in range(start, cap + 1):
            if self._win_set(b1, b2) >> v & 1:
                return b1
        return INF

    def table(self, b2_max: int, cap: int | None = None) -> list[list[Budget]]:
        """Thresholds of every vertex for b2 = 0..b2_max, rows indexed by vertex."""
        out: list[list[Budget]] = [[] for _ in range(self.game.n_vertices)]
        for v in range(self.game.n_vertices):
            prev: Budget = 0
            for b2 in range(b2_max + 1):
                if prev is INF:
                    out[v].append(INF)
                    continue
                prev = self.threshold(v, b2, cap=cap, start=prev)
                out[v].append(prev)
        return out

    def matrix(self, v: int, b1: int, b2: int) -> BiddingMatrix:
        self._check(v, b1, b2)
        g = self.game
        if v in (g.target, g.sink):
            label = 1 if v == g.target else 2
            return BiddingMatrix(tuple((label,) * (b2 + 1) for _ in range(b1 + 1)))
        succ = self._succ_mask[v]
        rows = []
        for x in range(b1 + 1):
            row = []
            for y in range(b2 + 1):
                if x >= y:
                    ok = succ & self._win_set(b1 - x, b2) != 0
                else:
                    ok = succ & ~self._win_set(b1, b2 - y) == 0
                row.append(1 if ok else 2)
            rows.append(tuple(row))
        return BiddingMatrix(tuple(rows))

    def winning_bids(self, v: int, b1: int, b2: int) -> list[int]:
        """Every bid of Player 1 that wins regardless of Player 2's bid."""
        return self.matrix(v, b1, b2).one_rows()

    def winning_successors(self, v: int, b1: int, b2: int, bid: int) -> list[int]:
        """Successors Player 1 may move to after winning with ``bid``."""
        w = self._win_set(b1 - bid, b2)
        return [u for u in self.game.successors(v) if w >> u & 1]


def default_cap(g: Game, b2: int) -> int:
    """Search bound for thresholds; every finite threshold lies below it."""
    return (g.n_vertices - 1) * (b2 + 1) + 1


def oracle_winner(g: Game, c: Configuration, limit: int = DEFAULT_LIMIT) -> int:
    return Oracle(g, limit).winner(c.vertex, c.b1, c.b2)


def oracle_threshold(
    g: Game, v: int, b2: int, cap: int | None = None, limit: int = DEFAULT_LIMIT
) -> Budget:
    return Oracle(g, limit).threshold(v, b2, cap=cap)


def bidding_matrix(g: Game, c: Configuration, limit: int = DEFAULT_LIMIT) -> BiddingMatrix:
    return Oracle(g, limit).matrix(c.vertex, c.b1, c.b2)
