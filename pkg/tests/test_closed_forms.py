from decimal import Decimal, getcontext
from fractions import Fraction

import pytest

from poorman.closed_forms import (
    GoldenFloorPair,
    golden_floors,
    race_threshold,
    tow2_threshold,
    tow3_threshold,
)
from poorman.game import gen_race, gen_tow, tow_vertex
from poorman.iteration import solve
from poorman.ratios import ratios_dag

getcontext().prec = 210
PHI = (1 + Decimal(5).sqrt()) / 2


def decimal_floors(b):
    return int(Decimal(b) / PHI), int(Decimal(b) * PHI)


def test_race_examples():
    assert race_threshold(3, 5, 89) == 51
    assert race_threshold(4, 5, 89) == 68
    assert race_threshold(0, 5, 42) == 0
    with pytest.raises(ValueError):
        race_threshold(1, 0, 3)


def test_golden_examples():
    assert golden_floors(100) == GoldenFloorPair(100, 61, 161)
    assert golden_floors(0) == GoldenFloorPair(0, 0, 0)
    assert golden_floors(2) == GoldenFloorPair(2, 1, 3)


def test_golden_against_high_precision():
    for b in list(range(3000)) + [10**k + j for k in range(4, 60, 5) for j in range(3)]:
        p = golden_floors(b)
        assert (p.floor_div_phi, p.floor_mul_phi) == decimal_floors(b)


def test_golden_identity():
    for b in range(5000):
        p = golden_floors(b)
        assert p.floor_mul_phi == p.floor_div_phi + b


def test_tow2_recurrence():
    t = [golden_floors(b).floor_div_phi for b in range(10**4 + 1)]
    u = [golden_floors(b).floor_mul_phi for b in range(10**4 + 1)]
    # x rises and u[b - 1 - x] falls, so a window bracketing their crossing holds the minimum
    for b in range(1, 10**4 + 1):
        lo = max(0, t[b] - 2)
        hi = min(b - 1, t[b] + 2)
        assert lo == 0 or u[b - 1 - lo] >= lo
        assert hi == b - 1 or hi >= u[b - 1 - hi]
        assert min(max(x, u[b - 1 - x]) for x in range(lo, hi + 1)) == t[b]


def test_tow_examples():
    assert tow2_threshold(1, 5) == 3
    assert tow2_threshold(2, 4) == 6
    assert tow2_threshold(2, 1) == 1
    assert tow3_threshold(3, 100) == 199
    assert (tow3_threshold(1, 1), tow3_threshold(2, 1), tow3_threshold(3, 1)) == (0, 0, 1)
    assert tow3_threshold(2, 7) == 6
    for bad in ((0, 3), (3, 3)):
        with pytest.raises(ValueError):
            tow2_threshold(*bad)
    with pytest.raises(ValueError):
        tow3_threshold(1, 0)
    with pytest.raises(ValueError):
        tow3_threshold(4, 2)


def test_tow_against_solver():
    t2 = solve(gen_tow(2), 500)
    t3 = solve(gen_tow(3), 500)
    for b in range(501):
        for k in (1, 2):
            assert t2(tow_vertex(t2.game, k), b) == tow2_threshold(k, b)
        if b:
            for k in (1, 2, 3):
                assert t3(tow_vertex(t3.game, k), b) == tow3_threshold(k, b)


def test_race_tightness():
    for n, m in ((3, 5), (4, 5), (2, 3), (5, 2)):
        g = gen_race(n, m)
        t = solve(g, 10**4)
        r = ratios_dag(g)[g.root]
        row = t.row(g.root)
        on_upper = [B for B in range(10**4 + 1) if row[B] == r * B]
        below = [B for B in range(10**4 + 1) if row[B] < r * B]
        assert len(on_upper) > 100 and len(below) > 100
        assert on_upper[-1] > 9000 and below[-1] > 9000
        # B = -1 mod m sits furthest below the line
        assert all(r * B - row[B] == Fraction(n * (m - 1), m) for B in range(m - 1, 10**4, m))
