"""Generational selecto-recombinative GA.

Binary tournament selection without replacement, partition-shuffle
crossover, full replacement, an archive so no genome is ever evaluated
twice in a run, per-partition absorbing convergence detection, and
per-generation resizing driven by a pluggable sizing strategy.

Populations are held as (n, m) matrices of partition configurations; the
hot per-generation work is delegated to the kernel backend.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .problems import ProblemSpec
from .strategies import SizingObservation, SizingStrategy

# per-partition convergence states
OPEN, WON, LOST = 0, 1, 2


class Archive:
    """Fitness cache keyed by genome identity. Evaluations = misses."""

    __slots__ = ("values", "hits", "misses", "_compact")

    def __init__(self, compact_keys: bool = True):
        self.values: dict[bytes, float] = {}
        self.hits = 0
        self.misses = 0
        self._compact = compact_keys

    def evaluate_batch(self, configs: np.ndarray, table: np.ndarray) -> np.ndarray:
        """Fitness of every row, charging only archive misses."""
        fresh = kernels.evaluate_configs(table, configs)
        key_rows = configs.astype(np.uint8) if self._compact else configs
        out = np.empty(configs.shape[0])
        values = self.values
        for i in range(configs.shape[0]):
            key = key_rows[i].tobytes()
            cached = values.get(key)
            if cached is None:
                values[key] = fresh[i]
                self.misses += 1
                out[i] = fresh[i]
            else:
                self.hits += 1
                out[i] = cached
        return out


@dataclass
class Population:
    configs: np.ndarray   # (n, m) int64 partition configurations
    fitness: np.ndarray   # (n,) float64

    @property
    def n(self) -> int:
        return self.configs.shape[0]


@dataclass
class RunState:
    problem: ProblemSpec
    population: Population
    archive: Archive
    rng: np.random.Generator
    generation: int = 0
    partition_status: np.ndarray = None
    last_bb_counts: np.ndarray = None
    size_history: list = field(default_factory=list)
    truncated: bool = False

    @property
    def evaluations(self) -> int:
        return self.archive.misses

    def bb_counts(self) -> np.ndarray:
        return kernels.bb_counts(self.population.configs, self.problem.bb_index)

    def all_converged(self) -> bool:
        return bool((self.partition_status != OPEN).all())


@dataclass(frozen=True)
class RunRecord:
    evaluations: int
    quality: float
    generations: int
    size_history: tuple
    seed: int
    truncated: bool = False


def init_population(problem: ProblemSpec, n: int, rng: np.random.Generator,
                    archive: Archive) -> Population:
    """Uniformly random population of n genomes, evaluated through the archive."""
    _check_size(n)
    configs = rng.integers(0, 2**problem.k, size=(n, problem.m), dtype=np.int64)
    fitness = archive.evaluate_batch(configs, problem.table)
    return Population(configs, fitness)


def tournament_select(fitness: np.ndarray, count: int,
                      rng: np.random.Generator) -> np.ndarray:
    """Indices of `count` winners of binary tournaments without replacement.

    Repeated pairing passes: each pass shuffles the population into
    disjoint pairs and takes the fitter member of each (ties decided by a
    fair coin). A partial final pass takes the first pairs of a fresh
    shuffle, so every member plays exactly twice per two full passes.
    """
    if count < 2 or count % 2:
        raise ValueError("count must be even and >= 2")
    n = fitness.shape[0]
    winners = []
    have = 0
    while have < count:
        perm = rng.permutation(n).astype(np.int64)
        tie = rng.random(n // 2)
        w = kernels.tournament_pass(fitness, perm, tie)
        winners.append(w[: count - have])
        have += winners[-1].shape[0]
    return np.concatenate(winners)


def shuffle_crossover(configs: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Apply an independent uniform random permutation to every partition.

    Conserves the multiset of configurations within each partition exactly.
    """
    keys = rng.integers(0, 2**32, size=configs.shape, dtype=np.uint32)
    return kernels.shuffle_columns(configs, keys)


def _check_size(n: int):
    if n < 4 or n % 2:
        raise ValueError(f"population size must be even and >= 4, got {n}")


def _update_status(status: np.ndarray, counts: np.ndarray, n: int) -> np.ndarray:
    won = counts == n
    lost = counts == 0
    if status is not None:
        if (won & (status == LOST)).any() or (lost & (status == WON)).any() \
                or ((status == WON) & ~won).any() or ((status == LOST) & ~lost).any():
            raise RuntimeError("absorbing-state invariant violated")
    new = np.full(counts.shape[0], OPEN, dtype=np.int8)
    new[won] = WON
    new[lost] = LOST
    return new


def step_generation(state: RunState, next_n: int) -> RunState:
    """Advance one generation with full replacement at size next_n."""
    _check_size(next_n)
    pop = state.population
    idx = tournament_select(pop.fitness, next_n, state.rng)
    children = shuffle_crossover(pop.configs[idx], state.rng)
    fitness = state.archive.evaluate_batch(children, state.problem.table)
    state.population = Population(children, fitness)
    state.generation += 1
    state.size_history.append((state.generation, next_n))
    state.last_bb_counts = state.bb_counts()
    state.partition_status = _update_status(
        state.partition_status, state.last_bb_counts, next_n)
    return state


def run_ga(problem: ProblemSpec, strategy: SizingStrategy, seed: int,
           max_generations: int | None = None, on_generation=None) -> RunRecord:
    """One complete run: initialize, resize each generation per the
    strategy, stop when every partition is won or lost.

    `on_generation(state)` is invoked after every generation (including
    generation 0) and is meant for trajectory inspection in tests.
    """
    if max_generations is None:
        max_generations = 10 * problem.length
    rng = np.random.default_rng(seed)
    n0 = strategy.initial_size()
    archive = Archive(compact_keys=2**problem.k <= 256)
    state = RunState(problem=problem,
                     population=init_population(problem, n0, rng, archive),
                     archive=archive, rng=rng)
    state.size_history.append((0, n0))
    state.last_bb_counts = state.bb_counts()
    state.partition_status = _update_status(None, state.last_bb_counts, n0)
    if on_generation is not None:
        on_generation(state)

    while not state.all_converged():
        if state.generation >= max_generations:
            state.truncated = True
            break
        pop = state.population
        obs = SizingObservation(fitness_variance=float(pop.fitness.var()),
                                bb_counts=state.last_bb_counts, current_n=pop.n)
        state = step_generation(state, strategy.next_size(obs))
        if on_generation is not None:
            on_generation(state)

    quality = float(np.count_nonzero(state.partition_status == WON)) / problem.m
    return RunRecord(evaluations=state.evaluations, quality=quality,
                     generations=state.generation,
                     size_history=tuple(state.size_history),
                     seed=seed, truncated=state.truncated)
