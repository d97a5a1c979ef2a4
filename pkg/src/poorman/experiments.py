"""Reproduction experiments that emit CSV-shaped reports."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from .budget import format_budget
from .dag import solve_dag
from .game import Game, gen_choice, gen_pipe_violation, gen_race, gen_tow
from .iteration import cheapest_moves, solve, winning_bids, winning_moves
from .periodicity import PeriodSpec
from .ratios import check_pipe, ratio_bracket, ratios_dag


@dataclass
class ExperimentReport:
    name: str
    header: list[str]
    rows: list[list] = field(default_factory=list)
    summary: dict[str, bool] = field(default_factory=dict)
    notes: dict[str, str] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.summary.values())

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.header)
        for row in self.rows:
            w.writerow([_fmt(x) for x in row])
        return buf.getvalue()


def _fmt(x) -> str:
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)
    return format_budget(x) if not isinstance(x, str) else x


def fig1(b2: int = 5) -> ExperimentReport:
    g = gen_tow(2)
    t = solve(g, b2)
    near, far = g.index("v_1"), g.index("v_0")
    rep = ExperimentReport("fig1", ["b2", "v_1", "v_0"])
    for b in range(b2 + 1):
        rep.rows.append([b, t(near, b), t(far, b)])
    if b2 >= 5:
        rep.summary["table"] = (
            t.row(near)[:6] == [0, 0, 1, 1, 2, 3] and t.row(far)[:6] == [0, 1, 3, 4, 6, 8]
        )
    rep.notes["iterations"] = str(t.iterations)
    return rep


def fig2_game() -> Game:
    return gen_choice([gen_race(4, 5), gen_race(3, 5)])


def fig2(b2: int = 144) -> ExperimentReport:
    g = fig2_game()
    t = solve_dag(g, b2)
    root = g.index("root")
    r35, r45 = g.index("c1.v_{3,5}"), g.index("c0.v_{4,5}")
    rep = ExperimentReport("fig2", ["b2", "race(3,5)", "race(4,5)", "root"])
    for b in range(b2 + 1):
        rep.rows.append([b, t(r35, b), t(r45, b), t(root, b)])
    for x, y in ((44, 28), (89, 60), (134, 92)):
        if x <= b2:
            rep.summary[f"point({x},{y})"] = t(root, x) == y
    if b2 >= 144:
        rep.summary["period(45,32)"] = PeriodSpec(44, 45, 32).holds_on(t.values[root][: 99 + 45 + 1])
    rep.notes["ratio"] = _fmt(ratios_dag(g)[root])
    return rep


def eventually_periodic(b2: int = 100) -> ExperimentReport:
    g = gen_choice([gen_race(5, 4), gen_race(2, 2)])
    t = solve(g, b2)
    root = g.index("root")
    small = g.index("c1.v_{2,2}")
    rep = ExperimentReport(
        "eventually-periodic", ["b2", "root", "bid_low", "bid_high", "winning_moves", "cheapest_moves"]
    )
    ok = True
    for b in range(b2 + 1):
        bids = winning_bids(g, t, root, b)
        moves = winning_moves(g, t, root, b)
        cheap = cheapest_moves(g, t, root, b)
        rep.rows.append([
            b, t(root, b), bids.low, bids.high,
            ";".join(sorted(g.name(u) for u in moves)),
            ";".join(sorted(g.name(u) for u in cheap)),
        ])
        if b >= 7 and small not in moves:
            ok = False
    rep.summary["race(2,2) reachable for B>=7"] = ok
    return rep


def pipe_violation(b2: int = 10_000, digits: int = 40) -> ExperimentReport:
    g = gen_pipe_violation()
    t = solve(g, b2)
    bracket = ratio_bracket(g, digits=digits)
    found = [p for p in check_pipe(g, t, bracket, check_lower=True) if p.side == "lower"]
    rep = ExperimentReport("pipe-violation", ["b2", "vertex", "threshold", "lower_bound"])
    for p in found:
        rep.rows.append([p.b, g.name(p.vertex), p.value, f"{float(p.bound):.6f}"])
    rep.summary["lower-bound violation found"] = bool(found)
    if found:
        rep.notes["first"] = f"vertex {g.name(found[0].vertex)} at B2={found[0].b}"
    for v in g.interior():
        lo, hi = bracket[v]
        rep.notes[f"ratio {g.name(v)}"] = f"{float(lo):.15f}"
    return rep


def _tow_vertices(g: Game, vertex: Optional[str]) -> list[int]:
    if vertex is not None:
        return [g.index(vertex)]
    return sorted(g.interior(), key=g.name)


def conjecture_diff(b2: int = 3900, n: int = 21, vertex: Optional[str] = None) -> ExperimentReport:
    """t_v * B - T_v(B) per vertex of a tug of war; data only."""
    g = gen_tow(n)
    t = solve(g, b2)
    vs = sorted(_tow_vertices(g, vertex), key=lambda v: int(g.name(v)[2:]))
    bracket = ratio_bracket(g, digits=30)
    ratio = {v: (bracket[v][0] + bracket[v][1]) / 2 for v in vs}
    rep = ExperimentReport("conjecture-diff", ["b2"] + [g.name(v) for v in vs])
    for b in range(b2 + 1):
        rep.rows.append([b] + [f"{float(ratio[v] * b - t(v, b)):.6f}" for v in vs])
    for v in vs:
        rep.notes[f"ratio {g.name(v)}"] = f"{float(ratio[v]):.15f}"
    rep.notes["iterations"] = str(t.iterations)
    return rep


def conjecture_bids(b2: int = 3900, n: int = 21, vertex: Optional[str] = None) -> ExperimentReport:
    """Winning-bid interval per vertex of a tug of war; data only."""
    g = gen_tow(n)
    t = solve(g, b2)
    vs = sorted(_tow_vertices(g, vertex), key=lambda v: int(g.name(v)[2:]))
    header = ["b2"]
    for v in vs:
        header += [f"{g.name(v)}.low", f"{g.name(v)}.high"]
    rep = ExperimentReport("conjecture-bids", header)
    for b in range(b2 + 1):
        row: list = [b]
        for v in vs:
            bids = winning_bids(g, t, v, b)
            row += [bids.low, bids.high]
        rep.rows.append(row)
    return rep


def race_switching(b2: int = 60) -> ExperimentReport:
    g = gen_choice([gen_race(2, 2), gen_race(3, 3)])
    t = solve_dag(g, b2)
    root = g.index("root")
    a, b_ = g.index("c0.v_{2,2}"), g.index("c1.v_{3,3}")
    rep = ExperimentReport(
        "race-switching", ["b2", "race(2,2)", "race(3,3)", "cheapest_moves", "winning_moves"]
    )
    pattern = []
    for b in range(b2 + 1):
        cheap = cheapest_moves(g, t, root, b)
        moves = winning_moves(g, t, root, b)
        pattern.append(frozenset(cheap))
        rep.rows.append([
            b, t(a, b), t(b_, b),
            ";".join(sorted(g.name(u) for u in cheap)),
            ";".join(sorted(g.name(u) for u in moves)),
        ])
    if b2 >= 12:
        rep.summary["cheapest pattern has period 6"] = all(
            pattern[i] == pattern[i + 6] for i in range(b2 + 1 - 6)
        )
    return rep


EXPERIMENTS: dict[str, Callable[..., ExperimentReport]] = {
    "fig1": fig1,
    "fig2": fig2,
    "eventually-periodic": eventually_periodic,
    "pipe-violation": pipe_violation,
    "conjecture-diff": conjecture_diff,
    "conjecture-bids": conjecture_bids,
    "race-switching": race_switching,
}


def run_experiment(name: str, b2: Optional[int] = None, **kw) -> ExperimentReport:
    try:
        fn = EXPERIMENTS[name]
    except KeyError:
        raise ValueError(f"unknown experiment {name!r}") from None
    if b2 is not None:
        kw["b2"] = b2
    return fn(**kw)
