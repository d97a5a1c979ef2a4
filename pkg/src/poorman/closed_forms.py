"""Closed-form thresholds for race games and short tugs of war.

Golden-ratio floors are computed with integer square roots: for b > 0,
5b^2 is not a square, so floor(b * sqrt 5) = isqrt(5b^2) and both
floor(b / phi) and floor(b * phi) follow by exact halving.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt


@dataclass(frozen=True)
class GoldenFloorPair:
    b: int
    floor_div_phi: int
    floor_mul_phi: int

    def __post_init__(self):
        if self.floor_mul_phi != self.floor_div_phi + self.b:
            raise ValueError("golden floors must differ by b")


def race_threshold(x: int, y: int, B: int) -> int:
    """Threshold at v_{x,y} of a race game: x * floor(B / y)."""
    if y < 1:
        raise ValueError("y must be at least 1")
    if x < 0 or B < 0:
        raise ValueError("x and B must be non-negative")
    return x * (B // y)


def golden_floors(b: int) -> GoldenFloorPair:
    if b < 0:
        raise ValueError("b must be non-negative")
    r = isqrt(5 * b * b)
    return GoldenFloorPair(b, (r - b) // 2, (r + b) // 2)


def tow2_threshold(k: int, b: int) -> int:
    """Threshold in the two-vertex tug of war, ``k`` steps from the target."""
    pair = golden_floors(b)
    if k == 1:
        return pair.floor_div_phi
    if k == 2:
        return pair.floor_mul_phi
    raise ValueError(f"k must be 1 or 2, got {k}")


def tow3_threshold(k: int, b: int) -> int:
    """Threshold in the three-vertex tug of war, ``k`` steps from the target."""
    if b < 1:
        raise ValueError("closed form holds for b >= 1")
    if k == 1:
        return (b - 1) // 2
    if k == 2:
        return b - 1
    if k == 3:
        return 2 * b - 1
    raise ValueError(f"k must be in 1..3, got {k}")
