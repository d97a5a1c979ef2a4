import pickle
from fractions import Fraction

import pytest

from poorman.budget import INF, Infinity, format_budget, is_finite, parse_budget


def test_singleton_and_pickle():
    assert Infinity() is INF
    assert pickle.loads(pickle.dumps(INF)) is INF


def test_order_and_arithmetic():
    assert 10**30 < INF
    assert INF > 0
    assert Fraction(7, 3) < INF
    assert not INF < INF
    assert INF <= INF and INF >= 5
    assert min(3, INF) == 3
    assert max(3, INF) is INF
    assert 5 + INF is INF
    assert INF + INF is INF
    with pytest.raises(ValueError):
        INF + -1


def test_format_roundtrip():
    for x in (0, 17, INF):
        assert parse_budget(format_budget(x)) == x
    assert format_budget(INF) == "inf"
    assert not is_finite(INF) and is_finite(0)
    with pytest.raises(ValueError):
        parse_budget("-3")
