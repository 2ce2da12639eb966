"""Deterministic probe sampling.

All randomness in the library and CLI flows through one seeded generator,
so the same seed reproduces the same probes and byte-identical reports.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .distributions import PointQ


class ProbeSampler:
    def __init__(self, seed: int = 0):
        self.seed = seed
        self._rng = random.Random(seed)

    def integer(self, lo: int = -3, hi: int = 3) -> int:
        return self._rng.randint(lo, hi)

    def fraction(self, lo: int = -3, hi: int = 3) -> Fraction:
        return Fraction(self._rng.randint(lo, hi))

    def fractions(self, count: int, lo: int = -4, hi: int = 4) -> list:
        """Distinct small rationals, deterministic for a fixed seed."""
        seen: list = []
        attempts = 0
        while len(seen) < count and attempts < 200:
            v = Fraction(self._rng.randint(lo, hi))
            attempts += 1
            if v not in seen:
                seen.append(v)
        return seen

    def point(self, dim: int, lo: int = -3, hi: int = 3,
              valid=None, attempts: int = 60) -> PointQ:
        """A probe point with small integer coordinates; ``valid`` may
        reject points (e.g. denominator zeros)."""
        for _ in range(attempts):
            pt = PointQ(tuple(self._rng.randint(lo, hi) for _ in range(dim)))
            if valid is None or valid(pt):
                return pt
        raise RuntimeError("could not sample a valid probe point")
