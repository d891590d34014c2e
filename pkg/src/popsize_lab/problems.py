"""Additively decomposable, uniformly scaled test functions.

A problem is ``m`` contiguous partitions of ``k`` bits, every partition
scored by the same lookup table with a unique best configuration (the
building block). Built-ins: onemax (k=1) and the concatenated 4-bit trap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

MAX_PARTITION_BITS = 20


class InvalidGenomeError(ValueError):
    """Genome length does not match the problem layout."""


class AmbiguousBuildingBlockError(ValueError):
    """The subfunction table has no strictly unique optimum."""


@dataclass(frozen=True)
class PartitionLayout:
    m: int
    k: int

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("need at least one partition")
        if not 1 <= self.k <= MAX_PARTITION_BITS:
            raise ValueError(f"partition size must be in [1, {MAX_PARTITION_BITS}]")

    @property
    def length(self) -> int:
        return self.m * self.k


@dataclass(frozen=True)
class Subfunction:
    table: tuple[float, ...]
    bb_index: int

    def __post_init__(self):
        size = len(self.table)
        k = size.bit_length() - 1
        if size < 2 or size != 2**k:
            raise ValueError("table length must be a power of two >= 2")
        if not 0 <= self.bb_index < size:
            raise ValueError("bb_index out of range")

    @property
    def k(self) -> int:
        return len(self.table).bit_length() - 1


@dataclass(frozen=True)
class SubfunctionStats:
    d: float
    sigma_bb_sq: float
    competitor_index: int

    @property
    def sigma_bb(self) -> float:
        return math.sqrt(self.sigma_bb_sq)


@dataclass(frozen=True)
class ProblemSpec:
    layout: PartitionLayout
    subfunction: Subfunction
    name: str = "custom"

    def __post_init__(self):
        if self.subfunction.k != self.layout.k:
            raise ValueError("subfunction table size does not match layout.k")

    @property
    def m(self) -> int:
        return self.layout.m

    @property
    def k(self) -> int:
        return self.layout.k

    @property
    def length(self) -> int:
        return self.layout.length

    @property
    def bb_index(self) -> int:
        return self.subfunction.bb_index

    @cached_property
    def table(self) -> np.ndarray:
        arr = np.asarray(self.subfunction.table, dtype=np.float64)
        arr.flags.writeable = False
        return arr

    @cached_property
    def stats(self) -> SubfunctionStats:
        return subfunction_stats(self.subfunction)


def onemax(length: int) -> ProblemSpec:
    """Count-of-ones: m = length partitions of a single bit each."""
    return ProblemSpec(PartitionLayout(m=length, k=1), Subfunction((0.0, 1.0), 1),
                       name="onemax")


def trap4(m: int) -> ProblemSpec:
    """Concatenated deceptive 4-bit trap: f(u) = 4 if u == 4 else 3 - u."""
    table = tuple(4.0 if u == 4 else 3.0 - u
                  for u in (bin(c).count("1") for c in range(16)))
    return ProblemSpec(PartitionLayout(m=m, k=4), Subfunction(table, 15), name="trap4")


def custom_problem(m: int, k: int, bb_index: int, table, name: str = "custom") -> ProblemSpec:
    return ProblemSpec(PartitionLayout(m=m, k=k),
                       Subfunction(tuple(float(v) for v in table), bb_index), name)


def parse_problem(text: str) -> ProblemSpec:
    """Parse the custom problem file format.

    Line 1: ``m k``; line 2: ``bb_index``; line 3: 2^k fitness values.
    """
    lines = [ln for ln in (s.strip() for s in text.splitlines()) if ln]
    if len(lines) < 3:
        raise ValueError("problem file needs 3 non-empty lines: 'm k', 'bb_index', table")
    try:
        m, k = (int(t) for t in lines[0].split())
        bb_index = int(lines[1])
        table = tuple(float(t) for t in lines[2].split())
    except ValueError as exc:
        raise ValueError(f"malformed problem file: {exc}") from exc
    if len(table) != 2**k:
        raise ValueError(f"expected {2**k} table values, got {len(table)}")
    return custom_problem(m, k, bb_index, table)


def load_problem(path) -> ProblemSpec:
    with open(path) as fh:
        return parse_problem(fh.read())


def subfunction_stats(sub: Subfunction) -> SubfunctionStats:
    """Signal d, variance under uniform inputs, and the toughest competitor.

    Competitor ties resolve to the lowest configuration index. Raises
    AmbiguousBuildingBlockError unless table[bb_index] is strictly greatest.
    """
    table = np.asarray(sub.table, dtype=np.float64)
    others = np.delete(np.arange(table.size), sub.bb_index)
    competitor = others[np.argmax(table[others])]
    d = table[sub.bb_index] - table[competitor]
    if d <= 0:
        raise AmbiguousBuildingBlockError(
            "building block is not the strictly unique optimum")
    mean = table.mean()
    sigma_bb_sq = float(np.mean((table - mean) ** 2))
    return SubfunctionStats(d=float(d), sigma_bb_sq=sigma_bb_sq,
                            competitor_index=int(competitor))


def bits_to_configs(bits: np.ndarray, layout: PartitionLayout) -> np.ndarray:
    """Pack bit rows into per-partition configuration integers.

    Within a partition the leftmost bit is the most significant digit, so
    textual "1111" is configuration 15. Accepts one genome (1-D) or a
    population (2-D, one genome per row).
    """
    bits = np.asarray(bits)
    squeeze = bits.ndim == 1
    if squeeze:
        bits = bits[None, :]
    if bits.shape[1] != layout.length:
        raise InvalidGenomeError(
            f"genome length {bits.shape[1]} != layout length {layout.length}")
    blocks = bits.reshape(bits.shape[0], layout.m, layout.k).astype(np.int64)
    weights = 1 << np.arange(layout.k - 1, -1, -1, dtype=np.int64)
    configs = blocks @ weights
    return configs[0] if squeeze else configs


def configs_to_bits(configs: np.ndarray, layout: PartitionLayout) -> np.ndarray:
    configs = np.asarray(configs, dtype=np.int64)
    squeeze = configs.ndim == 1
    if squeeze:
        configs = configs[None, :]
    shifts = np.arange(layout.k - 1, -1, -1, dtype=np.int64)
    bits = ((configs[:, :, None] >> shifts) & 1).astype(np.uint8)
    bits = bits.reshape(configs.shape[0], layout.length)
    return bits[0] if squeeze else bits


def genome_from_string(s: str) -> np.ndarray:
    s = s.replace(" ", "")
    if set(s) - {"0", "1"}:
        raise InvalidGenomeError(f"not a bit string: {s!r}")
    return np.frombuffer(s.encode(), dtype=np.uint8) - ord("0")


def evaluate(problem: ProblemSpec, genome: np.ndarray) -> float:
    """Fitness: sum of the subfunction table over all partitions."""
    configs = bits_to_configs(genome, problem.layout)
    return float(problem.table[configs].sum())


def bb_count(problem: ProblemSpec, configs: np.ndarray, partition: int) -> int:
    """Number of population members carrying the BB in one partition.

    ``configs`` is the population's (n, m) configuration matrix.
    """
    configs = np.asarray(configs)
    if not 0 <= partition < problem.m:
        raise IndexError(f"partition {partition} out of range [0, {problem.m})")
    return int(np.count_nonzero(configs[:, partition] == problem.bb_index))
