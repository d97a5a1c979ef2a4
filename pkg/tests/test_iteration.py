import time

import numpy as np
import pytest

from poorman.budget import INF
from poorman.game import gen_choice, gen_pipe_violation, gen_race, gen_tow, max_path_lengths
from poorman.iteration import (
    SENT,
    BidInterval,
    cheapest_moves,
    history,
    solve,
    step,
    step_bid,
    step_bound,
    winning_bids,
    winning_moves,
)
from poorman.oracle import Oracle

from conftest import dag_games, small_games

TOW2 = gen_tow(2)
NEAR = TOW2.index("v_1")
FAR = TOW2.index("v_0")
FIG1 = {NEAR: [0, 0, 1, 1, 2, 3], FAR: [0, 1, 3, 4, 6, 8]}


def fig1_f(v, b):
    if v == TOW2.target:
        return 0
    if v == TOW2.sink:
        return INF
    return FIG1[v][b]


def brute_bids(g, f, v, B):
    """Bids b such that every reply keeps Player 1 at or above a threshold."""
    T = f(v, B)
    out = []
    for b in range(B + 1):
        ok = any(f(u, B) <= T - b for u in g.successors(v)) if T - b >= 0 else False
        for y in range(b + 1, B + 1):
            ok = ok and all(f(u, B - y) <= T for u in g.successors(v))
        if ok:
            out.append(b)
    return out


def test_step_bid_examples():
    assert step_bid(TOW2, fig1_f, NEAR, 1, 2) == 1
    assert step_bid(TOW2, fig1_f, NEAR, 0, 2) == 1
    assert step_bid(gen_tow(1), lambda v, b: INF if v == 1 else 0, 2, 0, 0) == 0
    with pytest.raises(ValueError):
        step_bid(TOW2, fig1_f, NEAR, 3, 2)


def test_step_bid_sink_only():
    from poorman.game import Game
    g = Game(("t", "s", "a", "b"), ((), (), (1, 3), (0, 1)), 0, 1)
    # every successor of vertex 2 is infinite under this f
    assert step_bid(g, lambda v, b: INF if v in (1, 3) else 0, 2, 4, 4) is INF


@pytest.mark.parametrize("mode", ["scan", "binary_search"])
def test_step_examples(mode):
    assert step(TOW2, fig1_f, NEAR, 2, mode) == 1
    g = gen_race(1, 1)
    leaves = lambda v, b: INF if v == g.sink else 0
    assert step(g, leaves, g.root, 7, mode) == 7
    assert step(TOW2, fig1_f, FAR, 0, mode) == 0


def test_step_modes_agree_on_fixed_points():
    for g in small_games(21, 30):
        t = solve(g, 15)
        for v in g.interior():
            for B in range(16):
                a = step(g, t, v, B, "scan")
                assert a == step(g, t, v, B, "binary_search")
                assert a == t(v, B)


def test_solve_fig1():
    for mode in ("scan", "binary_search"):
        t = solve(TOW2, 5, mode)
        assert t.row(NEAR) == FIG1[NEAR]
        assert t.row(FAR) == FIG1[FAR]
        assert t.row(TOW2.sink) == [INF] * 6
        assert t.row(TOW2.target) == [0] * 6


def test_solve_fig2_point():
    g = gen_choice([gen_race(4, 5), gen_race(3, 5)])
    assert solve(g, 89)(g.root, 89) == 60


def test_zero_budget():
    t = solve(TOW2, 0)
    assert t(NEAR, 0) == 0 and t(FAR, 0) == 0


def test_step_bound():
    g = gen_tow(2)
    assert step_bound(g, 5) == 24
    assert step_bound(g, 0) == 4
    assert step_bound(gen_tow(20), 10**6) == 22 * (10**6 + 1)


def test_iterates_decrease_and_fixed_point_monotone():
    for g in small_games(22, 20) + [gen_pipe_violation()]:
        hist = history(g, 20)
        for a, b in zip(hist, hist[1:]):
            assert np.all(b.values <= a.values)
        final = hist[-1].values
        assert np.array_equal(final, hist[-2].values)
        assert np.all(np.diff(final, axis=1) >= 0)
        assert len(hist) - 2 <= step_bound(g, 20)


def test_incremental_matches_full_sweeps():
    # a plain Jacobi sweep over all budgets must give the same sequence
    for g in small_games(23, 10) + [gen_tow(4)]:
        hist = history(g, 30)
        vals = hist[0].values.copy()
        for expected in hist[1:]:
            nxt = vals.copy()
            for v in g.interior():
                for B in range(31):
                    f = lambda u, b: INF if vals[u, b] >= SENT else int(vals[u, b])
                    x = step(g, f, v, B, "scan")
                    nxt[v, B] = SENT if x is INF else x
            vals = nxt
            assert np.array_equal(vals, expected.values)


def test_dag_stabilises_within_height():
    for g in dag_games(24, 30):
        t = solve(g, 40)
        assert t.iterations <= max(max_path_lengths(g)) + 1


def test_modes_identical():
    for g in small_games(25, 30) + dag_games(26, 10):
        assert solve(g, 60, "scan").same_values(solve(g, 60, "binary_search"))


def test_matches_oracle_small():
    for g in small_games(27, 20):
        t = solve(g, 8)
        assert t.rows() == Oracle(g).table(8)


def test_winning_bids_examples():
    assert winning_bids(TOW2, fig1_f, NEAR, 2) == BidInterval(0, 1)
    assert winning_bids(TOW2, fig1_f, FAR, 1) == BidInterval(1, 1)
    g = gen_race(1, 1)
    t = solve(g, 3)
    assert winning_bids(g, t, g.root, 3) == BidInterval(3, 3)
    with pytest.raises(ValueError):
        winning_bids(TOW2, fig1_f, TOW2.sink, 1)


def test_winning_bids_match_brute_force():
    for g in small_games(28, 25):
        t = solve(g, 12)
        for v in g.interior():
            for B in range(13):
                T = t(v, B)
                if T is INF:
                    continue
                brute = brute_bids(g, t, v, B)
                iv = winning_bids(g, t, v, B)
                assert brute == list(iv)
                m = min(t(u, B) for u in g.successors(v))
                assert iv.high == T - m
                if iv.low != iv.high:
                    assert T == max(t(u, B - iv.low - 1) for u in g.successors(v))


def test_winning_moves():
    t = solve(TOW2, 10)
    # at B = 0 both successors tie at zero
    for B in range(1, 11):
        assert TOW2.target in winning_moves(TOW2, t, NEAR, B)
        assert cheapest_moves(TOW2, t, NEAR, B) == {TOW2.target}
    g = gen_choice([gen_race(5, 4), gen_race(2, 2)])
    t = solve(g, 30)
    small = g.index("c1.v_{2,2}")
    assert all(small in winning_moves(g, t, g.root, B) for B in range(7, 31))
    assert small not in winning_moves(g, t, g.root, 6)


def test_moves_reach_a_winning_successor():
    for g in small_games(29, 20):
        t = solve(g, 10)
        for v in g.interior():
            for B in range(11):
                T = t(v, B)
                if T is INF:
                    continue
                low = winning_bids(g, t, v, B).low
                for u in winning_moves(g, t, v, B):
                    assert t(u, B) <= T - low


def test_race_switching_pattern():
    g = gen_choice([gen_race(2, 2), gen_race(3, 3)])
    t = solve(g, 36)
    a, b = g.index("c0.v_{2,2}"), g.index("c1.v_{3,3}")
    for B in range(37):
        x, y = 2 * (B // 2), 3 * (B // 3)
        expect = {a} if x < y else {b} if y < x else {a, b}
        assert cheapest_moves(g, t, g.root, B) == expect


def test_bad_mode():
    with pytest.raises(ValueError):
        solve(TOW2, 3, "fast")
