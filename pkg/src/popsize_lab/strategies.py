"""Population-sizing strategies: static, variance-adaptive, and
variance-plus-supply-adaptive, behind one interface consumed by the engine.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .theory import (TheoryParams, p_decide_from_variance, size_from_p,
                     size_static)

KINDS = ("static", "varfit", "varfit_supply")

# CLI / plot tokens
TOKENS = {"static": "static", "varfit": "varfit", "varfit-supply": "varfit_supply"}


def percentile_supply(bb_counts, alpha: float) -> int:
    """BB count of the alpha-percentile worst partition.

    Ascending sort, zero-based index floor(alpha * m): roughly an alpha
    fraction of partitions sit at or below the returned count.
    """
    counts = sorted(bb_counts)
    if not counts:
        raise ValueError("bb_counts must be non-empty")
    return int(counts[int(math.floor(alpha * len(counts)))])


@dataclass(frozen=True)
class SizingObservation:
    """What a strategy sees of the current generation."""

    fitness_variance: float
    bb_counts: tuple
    current_n: int


@dataclass(frozen=True)
class SizingStrategy:
    kind: str
    params: TheoryParams
    cap: int = 0          # 0 -> default 2 * static size (unused for static)
    fixed_n: int = 0      # 0 -> static size; bisection probes set this

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown strategy kind {self.kind!r}")
        if self.cap == 0:
            object.__setattr__(self, "cap", 2 * size_static(self.params))
        if self.cap < 4 or self.cap % 2:
            raise ValueError("cap must be even and >= 4")
        if self.fixed_n and (self.fixed_n < 4 or self.fixed_n % 2):
            raise ValueError("fixed_n must be even and >= 4")

    @classmethod
    def static(cls, params: TheoryParams, fixed_n: int = 0) -> "SizingStrategy":
        return cls("static", params, fixed_n=fixed_n)

    @classmethod
    def varfit(cls, params: TheoryParams, cap: int = 0) -> "SizingStrategy":
        return cls("varfit", params, cap=cap)

    @classmethod
    def varfit_supply(cls, params: TheoryParams, cap: int = 0) -> "SizingStrategy":
        return cls("varfit_supply", params, cap=cap)

    def initial_size(self) -> int:
        """All strategies start from the static equation (or a probe size)."""
        if self.fixed_n:
            return self.fixed_n
        return size_static(self.params)

    def next_size(self, obs: SizingObservation) -> int:
        if self.kind == "static":
            return self.initial_size()
        params = self.params
        p = p_decide_from_variance(params.d, obs.fitness_variance)
        if p <= 0.5:
            # measured variance beyond any finite model value; be maximally
            # conservative rather than undefined
            return self.cap
        supply_fraction = 1.0 / 2**params.k
        if self.kind == "varfit_supply":
            worst = percentile_supply(obs.bb_counts, params.alpha)
            supply_fraction = max(supply_fraction, worst / obs.current_n)
        return size_from_p(params.k, params.alpha, p, supply_fraction, cap=self.cap)
