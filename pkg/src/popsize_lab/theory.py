"""Closed-form population sizing calculators and a random-walk oracle.

Implements the decision model (probability of choosing a building block
over its toughest competitor), the gambler's ruin success probability,
the static and probability-parameterized sizing equations, and an exact
Monte-Carlo simulator of the absorbing walk used to cross-check the
closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .problems import ProblemSpec


class InvalidParameterError(ValueError):
    """A sizing-model parameter is outside its valid domain."""


@dataclass(frozen=True)
class TheoryParams:
    """Problem constants feeding the sizing equations."""

    k: int
    m: int
    d: float
    sigma_bb: float
    alpha: float

    def __post_init__(self):
        if self.k < 1 or self.m < 1:
            raise InvalidParameterError("k and m must be positive")
        if self.d <= 0 or self.sigma_bb <= 0:
            raise InvalidParameterError("d and sigma_bb must be positive")
        if not 0 < self.alpha < 1:
            raise InvalidParameterError("alpha must be strictly inside (0, 1)")

    @classmethod
    def from_problem(cls, problem: ProblemSpec, alpha: float) -> "TheoryParams":
        stats = problem.stats
        return cls(k=problem.k, m=problem.m, d=stats.d,
                   sigma_bb=stats.sigma_bb, alpha=alpha)


@dataclass(frozen=True)
class WalkSpec:
    """Absorbing random walk between 0 (lost) and n (fully propagated)."""

    n: int
    x0: float
    p: float

    def __post_init__(self):
        if self.n < 2:
            raise InvalidParameterError("n must be >= 2")
        if not 0 < self.x0 < self.n:
            raise InvalidParameterError("x0 must lie strictly between 0 and n")
        if not 0 < self.p <= 1:
            raise InvalidParameterError("p must be in (0, 1]")


def std_normal_cdf(z: float) -> float:
    """Standard normal CDF via the complementary error function."""
    return 0.5 * math.erfc(-z / math.sqrt(2.0))


_VARIANCE_EPS = 1e-12
_P_SATURATED = 1.0 - 1e-12


def p_decide_model(params: TheoryParams) -> float:
    """Model probability of a correct BB-vs-competitor decision.

    Uses the collateral-noise variance (m-1) * sigma_bb^2 of the other
    partitions; requires m >= 2.
    """
    if params.m < 2:
        raise InvalidParameterError("decision model needs m >= 2")
    z = params.d / (math.sqrt(2.0 * (params.m - 1)) * params.sigma_bb)
    return std_normal_cdf(z)


def p_decide_from_variance(d: float, sigma_m_sq: float) -> float:
    """Decision probability from a measured decision variance.

    A (near-)zero variance saturates at 1 - 1e-12: a converged population
    decides perfectly, and downstream logarithms stay finite.
    """
    if d <= 0:
        raise InvalidParameterError("d must be positive")
    if sigma_m_sq <= _VARIANCE_EPS:
        return _P_SATURATED
    return std_normal_cdf(d / math.sqrt(2.0 * sigma_m_sq))


def gr_success(walk: WalkSpec) -> float:
    """Probability the walk is absorbed at n rather than 0.

    (1 - (q/p)^x0) / (1 - (q/p)^n), with the symmetric-walk limit x0/n
    when |p - 0.5| < 1e-12. Evaluated via expm1 for stability at large n.
    """
    p, n, x0 = walk.p, walk.n, walk.x0
    if p == 1.0:
        return 1.0
    if abs(p - 0.5) < 1e-12:
        return x0 / n
    log_ratio = math.log1p(-p) - math.log(p)  # log(q/p)
    num_exp = x0 * log_ratio
    den_exp = n * log_ratio
    if den_exp > 700.0:
        # q > p and (q/p)^n overflows; expm1(den) ~ exp(den), so
        # result ~ exp(num - den) - exp(-den), each factor representable
        return math.exp(num_exp - den_exp) - math.exp(-den_exp)
    return math.expm1(num_exp) / math.expm1(den_exp)


def round_up_even(x: float) -> int:
    """Smallest even integer >= x."""
    n = math.ceil(x)
    return n if n % 2 == 0 else n + 1


MIN_POPULATION = 4


def _clamp(n: int, cap: int | None) -> int:
    n = max(MIN_POPULATION, n)
    if cap is not None:
        n = min(n, cap)
    return n


def size_static_real(params: TheoryParams) -> float:
    """The static sizing equation before rounding."""
    if params.m < 2:
        raise InvalidParameterError("static sizing needs m >= 2")
    return (-(2.0 ** (params.k - 1)) * math.log(params.alpha)
            * params.sigma_bb * math.sqrt(math.pi * (params.m - 1)) / params.d)


def size_static(params: TheoryParams) -> int:
    """Static population size: rounded up to even, floored at 4."""
    return _clamp(round_up_even(size_static_real(params)), None)


def size_from_p(k: int, alpha: float, p: float, supply_fraction: float,
                cap: int | None = None) -> int:
    """Population size from a decision probability and a BB supply fraction.

    n = ln(alpha) / (supply_fraction * ln((1-p)/p)); with
    supply_fraction = 1/2^k this is the per-generation sizing equation.
    Rounded up to even, clamped to [4, cap].
    """
    if not 0 < alpha < 1:
        raise InvalidParameterError("alpha must be in (0, 1)")
    if not 0.5 < p < 1.0 + 1e-15:
        raise InvalidParameterError("p must exceed 0.5 (and be below 1)")
    p = min(p, _P_SATURATED)
    if supply_fraction < 1.0 / 2**k:
        raise InvalidParameterError("supply fraction below the random-init level")
    log_ratio = math.log1p(-p) - math.log(p)  # negative
    n_real = math.log(alpha) / (supply_fraction * log_ratio)
    return _clamp(round_up_even(n_real), cap)


_MAX_TABLE_SPAN = 1024


def _binomial_cdf_table(p: float, max_n: int) -> np.ndarray:
    """Rows: cumulative distribution of Binomial(v, p), padded with 1.

    Requires p <= 0.5 so the pmf recurrence starting from (1-p)^v cannot
    underflow for max_n <= 1024.
    """
    table = np.ones((max_n + 1, max_n + 1))
    q = 1.0 - p
    for v in range(max_n + 1):
        if v == 0 or p == 0.0:
            continue
        j = np.arange(v, dtype=np.float64)
        pmf = np.empty(v + 1)
        pmf[0] = q**v
        pmf[1:] = pmf[0] * np.cumprod((v - j) / (j + 1) * (p / q))
        table[v, : v + 1] = np.minimum(np.cumsum(pmf), 1.0)
    return table


def simulate_walk(walk: WalkSpec, trials: int, seed: int) -> float:
    """Empirical absorption-at-n fraction over independent walks.

    Exact block sampling: while the particle is L = min(x, n-x) steps from
    the nearest barrier, no barrier can be touched in fewer than L steps,
    so the position after L steps is x + 2*Binomial(L, p) - L with the
    same distribution as stepping one unit at a time. Block movements are
    drawn by inverse CDF from a per-span table (built for min(p, 1-p) and
    mirrored when p > 0.5); for n beyond the table limit the generator's
    own binomial sampler covers the wide spans.
    """
    if trials < 1:
        raise InvalidParameterError("trials must be >= 1")
    x0 = int(round(walk.x0))
    if abs(x0 - walk.x0) > 1e-9:
        raise InvalidParameterError("x0 must be integer-valued for simulation")
    rng = np.random.default_rng(seed)
    n, p = walk.n, walk.p
    mirrored = p > 0.5
    max_span = min(_MAX_TABLE_SPAN, n // 2)
    cdf = _binomial_cdf_table(min(p, 1.0 - p), max_span)
    x = np.full(trials, x0, dtype=np.int64)
    successes = 0
    if n // 2 <= _MAX_TABLE_SPAN:
        count = trials
        while count:
            u = rng.random(count)
            count, won = kernels.walk_round(x, count, n, cdf, mirrored, u)
            successes += won
        return successes / trials
    # wide problems: same scheme, table for narrow spans only
    while x.size:
        span = np.minimum(x, n - x)
        steps = np.empty_like(span)
        small = span <= max_span
        if small.any():
            u = rng.random(int(np.count_nonzero(small)))
            drawn = kernels.binomial_small_cdf(cdf, span[small], u)
            steps[small] = span[small] - drawn if mirrored else drawn
        if not small.all():
            big = ~small
            steps[big] = rng.binomial(span[big], p)
        x = x + 2 * steps - span
        won = x == n
        successes += int(np.count_nonzero(won))
        x = x[~(won | (x == 0))]
    return successes / trials
