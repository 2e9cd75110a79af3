"""Admissible weight sets and their arithmetic-progression envelopes."""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from math import gcd
from typing import Iterable


@dataclass(frozen=True)
class WeightSet:
    """Allowed nonzero weights ``W`` inside the envelope ``{i*delta : a <= i <= b}``."""

    weights: frozenset[int]
    delta: int
    a: int
    b: int

    def __post_init__(self) -> None:
        if self.delta < 1 or not 1 <= self.a <= self.b:
            raise ValueError(f"invalid envelope delta={self.delta} a={self.a} b={self.b}")
        if not self.weights:
            raise ValueError("weight set is empty")
        bad = [w for w in self.weights if w % self.delta or not self.a <= w // self.delta <= self.b]
        if bad:
            raise ValueError(f"weights {sorted(bad)} lie outside the envelope")

    @classmethod
    def explicit(cls, weights: Iterable[int]) -> "WeightSet":
        ws = frozenset(int(w) for w in weights)
        if not ws or min(ws) < 1:
            raise ValueError("weights must be positive")
        delta = reduce(gcd, ws)
        return cls(ws, delta, min(ws) // delta, max(ws) // delta)

    @classmethod
    def min_distance(cls, d: int, n_max: int, delta: int = 1) -> "WeightSet":
        """All multiples of ``delta`` in ``[d, n_max]``."""
        a = -(-d // delta)
        b = n_max // delta
        if a > b:
            raise ValueError(f"no weight >= {d} divisible by {delta} up to {n_max}")
        return cls(frozenset(i * delta for i in range(a, b + 1)), delta, a, b)

    @property
    def envelope(self) -> tuple[int, ...]:
        return tuple(i * self.delta for i in range(self.a, self.b + 1))

    @property
    def is_envelope(self) -> bool:
        return len(self.weights) == self.b - self.a + 1

    def describe(self) -> str:
        return f"W={sorted(self.weights)} delta={self.delta} a={self.a} b={self.b}"
