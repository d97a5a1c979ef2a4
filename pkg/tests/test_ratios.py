from fractions import Fraction

import pytest

from poorman.budget import INF
from poorman.game import (
    NotADagError,
    gen_choice,
    gen_pipe_violation,
    gen_race,
    gen_tow,
    max_path_lengths,
)
from poorman.iteration import solve
from poorman.oracle import Oracle
from poorman.ratios import check_pipe, combine, pipe_bounds, ratio_bracket, ratios_dag

from conftest import dag_games

# frozen from the solver sweep and confirmed by the oracle below
FIRST_VIOLATION = ("3", 15, 9)


def test_race_ratio():
    for a in range(1, 6):
        for b in range(1, 6):
            g = gen_race(a, b)
            assert ratios_dag(g)[g.root] == Fraction(a, b)


def test_choice_ratio():
    g = gen_choice([gen_race(4, 5), gen_race(3, 5)])
    assert ratios_dag(g)[g.root] == Fraction(32, 45)


def test_leaf_neighbour():
    g = gen_race(1, 1)
    r = ratios_dag(g)
    assert r[g.root] == 1 and r[g.target] == 0 and r[g.sink] is INF


def test_combine_edge_cases():
    assert combine(INF, Fraction(2)) == 3
    assert combine(INF, INF) is INF
    assert combine(Fraction(1), Fraction(0)) == Fraction(1, 2)


def test_cyclic_rejected():
    with pytest.raises(NotADagError):
        ratios_dag(gen_tow(2))


def test_pipe_bounds_examples():
    lo, hi = pipe_bounds(Fraction(3, 5), 7, 10)
    assert (lo, hi) == (Fraction(9, 5), 6)
    assert pipe_bounds(Fraction(7, 2), 9, 9)[0] == 0
    lo, hi = pipe_bounds(Fraction(32, 45), 9, 89)
    assert lo <= 60 <= hi
    with pytest.raises(ValueError):
        pipe_bounds(INF, 1, 1)


def test_ratio_magnitude():
    for g in dag_games(31, 30):
        r = ratios_dag(g)
        for v in g.interior():
            if r[v] is INF:
                continue
            succ = [r[u] for u in g.successors(v)]
            assert r[v] <= 1 + min(x for x in succ if x is not INF)
            assert r[v] <= g.n_vertices


def test_convergence_rate():
    for g in dag_games(32, 20):
        t = solve(g, 300)
        r = ratios_dag(g)
        paths = max_path_lengths(g)
        for v in g.interior():
            if r[v] is INF:
                continue
            for B in range(1, 301):
                assert abs(Fraction(t(v, B), B) - r[v]) <= r[v] * paths[v] / B


def test_check_pipe_dags_clean():
    for g in dag_games(33, 20) + [gen_choice([gen_race(4, 5), gen_race(3, 5)])]:
        t = solve(g, 200)
        assert check_pipe(g, t, ratios_dag(g)) == []


def test_bracket_tow2_is_golden():
    g = gen_tow(2)
    br = ratio_bracket(g, digits=30)
    near, far = g.index("v_1"), g.index("v_0")
    lo, hi = br[near]
    # 1/phi solves x^2 + x - 1 = 0, so the polynomial changes sign on the bracket
    assert lo * lo + lo - 1 <= 0 <= hi * hi + hi - 1
    assert hi - lo < Fraction(1, 10**14)
    lo2, hi2 = br[far]
    assert lo2 <= 1 + hi and 1 + lo <= hi2


def test_bracket_on_dag_matches_exact():
    for g in dag_games(34, 10):
        exact = ratios_dag(g)
        br = ratio_bracket(g, digits=30)
        for v in g.interior():
            lo, hi = br[v]
            if exact[v] is INF:
                assert lo is INF
            else:
                assert lo <= exact[v] <= hi


def test_upper_bound_holds_on_cyclic():
    for g in (gen_tow(2), gen_tow(3), gen_tow(6), gen_pipe_violation()):
        t = solve(g, 400)
        assert check_pipe(g, t, ratio_bracket(g)) == []


def test_pipe_violation_found():
    g = gen_pipe_violation()
    t = solve(g, 2000)
    found = check_pipe(g, t, ratio_bracket(g), check_lower=True)
    assert found and all(p.side == "lower" for p in found)
    first = found[0]
    assert (g.name(first.vertex), first.b, first.value) == FIRST_VIOLATION


def test_pipe_violation_value_confirmed_by_oracle():
    g = gen_pipe_violation()
    name, b, value = FIRST_VIOLATION
    assert Oracle(g).threshold(g.index(name), b) == value
