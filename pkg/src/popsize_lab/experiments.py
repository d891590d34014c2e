"""Batch experiments: cell runs, bisection for the minimal fixed
population size, speedup ratios, and plot-ready CSV emission.
"""

from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .engine import RunRecord, run_ga
from .problems import ProblemSpec, onemax, trap4
from .strategies import SizingStrategy
from .theory import TheoryParams, size_static

log = logging.getLogger("popsize_lab")

STRATEGY_TOKENS = {"static": "static", "varfit": "varfit",
                   "varfit_supply": "varfit-supply"}

# seed-stream tags so cell runs, probe runs and fresh measurement runs
# never collide
_STREAM_CELLS, _STREAM_PROBE, _STREAM_FRESH = 0, 1, 2

HARD_SIZE_LIMIT = 2**20


class UnattainableTargetError(RuntimeError):
    """Bisection doubling hit the hard size limit without reaching the target."""


def derive_seed(master_seed: int, *key: int) -> int:
    """Deterministic, order-independent per-run seed."""
    ss = np.random.SeedSequence(entropy=master_seed, spawn_key=tuple(key))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


@dataclass(frozen=True)
class CellSummary:
    mean_evaluations: float
    mean_quality: float
    std_evaluations: float
    std_quality: float
    truncated_runs: int
    runs: int

    @property
    def sem_evaluations(self) -> float:
        return self.std_evaluations / math.sqrt(self.runs)

    @property
    def sem_quality(self) -> float:
        return self.std_quality / math.sqrt(self.runs)


def summarize(records: list[RunRecord]) -> CellSummary:
    evals = np.array([r.evaluations for r in records], dtype=float)
    quality = np.array([r.quality for r in records])
    ddof = 1 if len(records) > 1 else 0
    return CellSummary(mean_evaluations=float(evals.mean()),
                       mean_quality=float(quality.mean()),
                       std_evaluations=float(evals.std(ddof=ddof)),
                       std_quality=float(quality.std(ddof=ddof)),
                       truncated_runs=sum(r.truncated for r in records),
                       runs=len(records))


def run_cell(problem: ProblemSpec, strategy: SizingStrategy, runs: int,
             master_seed: int, seed_key: tuple = ()) -> tuple[CellSummary, list[RunRecord]]:
    """`runs` independent GA runs with derived seeds, plus their summary."""
    if runs < 1:
        raise ValueError("runs must be >= 1")
    records = [run_ga(problem, strategy, derive_seed(master_seed, *seed_key, i))
               for i in range(runs)]
    return summarize(records), records


@dataclass(frozen=True)
class BisectionConfig:
    target_quality: float
    runs_per_probe: int = 50
    repeats: int = 20
    resolution: float = 1 / 16

    def __post_init__(self):
        if not 0 < self.target_quality <= 1:
            raise ValueError("target_quality must be in (0, 1]")
        if self.resolution > 1 / 16:
            raise ValueError("resolution must be <= 1/16")


@dataclass
class BisectionResult:
    sizes: list[int]
    evals_per_repeat: list[float]
    fresh_records: list[RunRecord]
    target_quality: float

    @property
    def mean_min_size(self) -> float:
        return float(np.mean(self.sizes))

    @property
    def mean_evaluations(self) -> float:
        return float(np.mean(self.evals_per_repeat))


def bisection_search(passes, resolution: float, hard_limit: int = HARD_SIZE_LIMIT) -> int:
    """Doubling then binary search for the smallest even size with passes(n).

    `passes` must be deterministic; returns the passing upper endpoint once
    the bracket's relative width drops to `resolution` (or to one step).
    """
    if passes(4):
        return 4
    lo, hi = 4, 8
    while not passes(hi):
        lo, hi = hi, hi * 2
        if hi > hard_limit:
            raise UnattainableTargetError(
                f"no population size up to {hard_limit} reaches the target")
    while hi - lo > 2 and (hi - lo) / hi > resolution:
        mid = (lo + hi) // 2
        mid -= mid % 2
        if not lo < mid < hi:
            break
        if passes(mid):
            hi = mid
        else:
            lo = mid
    return hi


def bisect_min_popsize(problem: ProblemSpec, cfg: BisectionConfig,
                       master_seed: int, seed_key: tuple = (),
                       alpha: float = 0.05) -> BisectionResult:
    """Minimal fixed population size reaching cfg.target_quality.

    Per repeat: probe quality is the mean over runs_per_probe fixed-size
    static runs with seeds fixed for the whole repeat (making pass/fail
    deterministic in n), then evaluations at the found size are measured
    with fresh seeds to avoid selection bias from the search.
    """
    params = TheoryParams.from_problem(problem, alpha)
    sizes, evals_per_repeat, fresh_all = [], [], []
    for rep in range(cfg.repeats):
        probe_seeds = [derive_seed(master_seed, *seed_key, _STREAM_PROBE, rep, i)
                       for i in range(cfg.runs_per_probe)]

        def passes(n):
            quality = [run_ga(problem, SizingStrategy.static(params, fixed_n=n), s).quality
                       for s in probe_seeds]
            return float(np.mean(quality)) >= cfg.target_quality

        found = bisection_search(passes, cfg.resolution)
        fresh = [run_ga(problem, SizingStrategy.static(params, fixed_n=found),
                        derive_seed(master_seed, *seed_key, _STREAM_FRESH, rep, i))
                 for i in range(cfg.runs_per_probe)]
        sizes.append(found)
        evals_per_repeat.append(float(np.mean([r.evaluations for r in fresh])))
        fresh_all.extend(fresh)
        log.info("bisection %s repeat %d: min size %d", problem.name, rep, found)
    return BisectionResult(sizes=sizes, evals_per_repeat=evals_per_repeat,
                           fresh_records=fresh_all,
                           target_quality=cfg.target_quality)


def speedup(dynamic: CellSummary, optimal_fixed: CellSummary) -> float:
    """Evaluations of the optimal fixed-size GA over the dynamic GA's."""
    return optimal_fixed.mean_evaluations / dynamic.mean_evaluations


# ---------------------------------------------------------------------------
# CSV emission

CELLS_HEADER = ["problem", "param", "strategy", "run", "seed", "evaluations",
                "quality", "generations", "truncated"]
BISECTION_HEADER = ["problem", "param", "repeat", "min_popsize",
                    "evaluations_at_min", "target_quality"]
SPEEDUP_HEADER = ["problem", "param", "dynamic_evals", "optimal_fixed_evals",
                  "speedup"]
SIZE_HISTORY_HEADER = ["generation", "popsize", "static_reference",
                       "bisection_reference"]


def _fmt(value) -> str:
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, float):
        return repr(value)
    return str(value)


def emit_csv(path, header: list[str], rows) -> Path:
    path = Path(path)
    try:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(header)
            for row in rows:
                writer.writerow([_fmt(v) for v in row])
    except OSError as exc:
        raise OSError(f"cannot write CSV {path}: {exc}") from exc
    return path


def cell_rows(problem_name: str, param: int, strategy_kind: str,
              records: list[RunRecord]):
    token = STRATEGY_TOKENS[strategy_kind]
    for i, r in enumerate(records):
        yield (problem_name, param, token, i, r.seed, r.evaluations,
               r.quality, r.generations, r.truncated)


def parse_cells_csv(path) -> list[dict]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


# ---------------------------------------------------------------------------
# Full replication grid

ONEMAX_SIZES = (100, 200, 300, 400)
TRAP4_SIZES = (20, 40, 60, 80)


def reproduce_grid(master_seed: int, out_dir, runs_per_cell: int = 100,
                    runs_per_probe: int = 50, bisection_repeats: int = 20,
                    alpha: float = 0.05,
                    onemax_sizes=ONEMAX_SIZES, trap4_sizes=TRAP4_SIZES) -> dict:
    """Run the full comparison grid and emit the plot-ready CSV set.

    For every problem size: 100 runs of each strategy, a bisection search
    targeted at the varfit-supply strategy's achieved mean quality, and the
    resulting speedup ratio. Deterministic in master_seed.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    families = [("onemax", onemax, onemax_sizes, 0),
                ("trap4", trap4, trap4_sizes, 1)]
    history_targets = {("onemax", max(onemax_sizes)): "size_history_onemax400.csv",
                       ("trap4", max(trap4_sizes)): "size_history_trap4_80.csv"}
    results = {"files": []}

    for fam_name, factory, sizes, fam_id in families:
        fam = {"cells": {}, "records": {}, "bisection": {}, "speedup": {}}
        rows = []
        for param in sizes:
            problem = factory(param)
            params = TheoryParams.from_problem(problem, alpha)
            for kind_id, kind in enumerate(("static", "varfit", "varfit_supply")):
                strategy = SizingStrategy(kind, params)
                summary, records = run_cell(
                    problem, strategy, runs_per_cell, master_seed,
                    seed_key=(_STREAM_CELLS, fam_id, param, kind_id))
                fam["cells"][(param, kind)] = summary
                fam["records"][(param, kind)] = records
                rows.extend(cell_rows(fam_name, param, kind, records))
                log.info("%s %d %s: evals %.0f quality %.4f", fam_name, param,
                         kind, summary.mean_evaluations, summary.mean_quality)
            target = fam["cells"][(param, "varfit_supply")].mean_quality
            cfg = BisectionConfig(target_quality=target,
                                  runs_per_probe=runs_per_probe,
                                  repeats=bisection_repeats)
            bres = bisect_min_popsize(problem, cfg, master_seed,
                                      seed_key=(fam_id, param), alpha=alpha)
            fam["bisection"][param] = bres
            fixed = summarize(bres.fresh_records)
            dyn = fam["cells"][(param, "varfit_supply")]
            fam["speedup"][param] = (dyn.mean_evaluations,
                                     fixed.mean_evaluations,
                                     speedup(dyn, fixed))
            log.info("%s %d: min size %.1f speedup %.3f", fam_name, param,
                     bres.mean_min_size, fam["speedup"][param][2])
        results[fam_name] = fam
        results["files"].append(
            emit_csv(out_dir / f"{fam_name}_cells.csv", CELLS_HEADER, rows))

    for fam_name, factory, sizes, fam_id in families:
        fam = results[fam_name]
        for (name, param), filename in history_targets.items():
            if name != fam_name:
                continue
            problem = factory(param)
            params = TheoryParams.from_problem(problem, alpha)
            record = fam["records"][(param, "varfit_supply")][0]
            static_ref = size_static(params)
            bisect_ref = fam["bisection"][param].mean_min_size
            hist_rows = [(g, n, static_ref, bisect_ref)
                         for g, n in record.size_history]
            results["files"].append(
                emit_csv(out_dir / filename, SIZE_HISTORY_HEADER, hist_rows))

    bisect_rows = []
    speedup_rows = []
    for fam_name, _, sizes, _ in families:
        fam = results[fam_name]
        for param in sizes:
            bres = fam["bisection"][param]
            for rep, (size, ev) in enumerate(zip(bres.sizes, bres.evals_per_repeat)):
                bisect_rows.append((fam_name, param, rep, size, ev,
                                    bres.target_quality))
            speedup_rows.append((fam_name, param) + fam["speedup"][param])
    results["files"].append(
        emit_csv(out_dir / "bisection.csv", BISECTION_HEADER, bisect_rows))
    results["files"].append(
        emit_csv(out_dir / "speedup.csv", SPEEDUP_HEADER, speedup_rows))
    return results
