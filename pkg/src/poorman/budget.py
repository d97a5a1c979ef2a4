"""Budgets: natural numbers extended with a single infinity value."""

from __future__ import annotations

import functools
import numbers
from typing import Union


@functools.total_ordering
class Infinity:
    """The infinite budget. Greater than every number, absorbing under addition."""

    _instance: Infinity | None = None

    def __new__(cls) -> Infinity:
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INF"

    def __str__(self) -> str:
        return "inf"

    def __reduce__(self):
        return (Infinity, ())

    def __hash__(self) -> int:
        return hash("poorman.INF")

    def __eq__(self, other: object) -> bool:
        return other is self

    def __lt__(self, other: object) -> bool:
        if other is self:
            return False
        if isinstance(other, numbers.Real):
            return False
        return NotImplemented

    def __gt__(self, other: object) -> bool:
        if other is self:
            return False
        if isinstance(other, numbers.Real):
            return True
        return NotImplemented

    def __add__(self, other: object) -> Infinity:
        if other is self:
            return self
        if not isinstance(other, numbers.Real):
            return NotImplemented
        if other < 0:
            raise ValueError("budgets are non-negative")
        return self

    __radd__ = __add__


INF = Infinity()

Budget = Union[int, Infinity]


def is_finite(value: object) -> bool:
    return value is not INF


def format_budget(value: Budget) -> str:
    return "inf" if value is INF else str(value)


def parse_budget(text: str) -> Budget:
    text = text.strip()
    if text == "inf":
        return INF
    value = int(text)
    if value < 0:
        raise ValueError(f"negative budget {text!r}")
    return value
