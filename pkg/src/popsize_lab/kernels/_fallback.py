"""Pure numpy implementations of the hot per-generation kernels.

These are the reference versions; the compiled extension in ``_core.pyx``
must produce bit-identical results for the same inputs (all randomness is
drawn by the caller and passed in).
"""

import numpy as np


def evaluate_configs(table, configs):
    """Sum the lookup-table values of every partition configuration, per row.

    Accumulates partition by partition (left to right) so the rounding
    order matches the compiled kernel exactly even for non-integer tables.
    """
    out = np.zeros(configs.shape[0])
    for j in range(configs.shape[1]):
        out += table[configs[:, j]]
    return out


def bb_counts(configs, bb_index):
    """Number of rows carrying the building-block configuration, per partition."""
    return (configs == bb_index).sum(axis=0, dtype=np.int64)


def tournament_pass(fitness, perm, tie):
    """One pairing pass of binary tournaments over a shuffled population.

    ``perm`` pairs up members (perm[0] vs perm[1], perm[2] vs perm[3], ...);
    ties go to the first member when tie[j] < 0.5.
    """
    a = perm[0::2]
    b = perm[1::2]
    fa = fitness[a]
    fb = fitness[b]
    winners = np.where(fa > fb, a, b)
    equal = fa == fb
    if equal.any():
        winners = np.where(equal & (tie < 0.5), a, winners)
    return winners.astype(np.int64, copy=False)


def binomial_small_cdf(cdf, spans, u):
    """Inverse-CDF binomial sampling for small trial counts.

    cdf[v, j] = P(Binomial(v, p) <= j), padded with 1 beyond j = v; the
    sample for (spans[i], u[i]) is the count of cdf entries <= u[i].
    Chunked to bound the broadcast temporary.
    """
    out = np.empty(spans.shape[0], dtype=np.int64)
    chunk = 1 << 15
    for lo in range(0, spans.shape[0], chunk):
        hi = lo + chunk
        out[lo:hi] = (cdf[spans[lo:hi]] <= u[lo:hi, None]).sum(axis=1)
    return out


def walk_round(x, count, n, cdf, mirrored, u):
    """One synchronous block step of the absorbing walks in x[:count].

    Each active particle takes a block of span = min(x, n - x) unit steps
    at once; the net movement is sampled from the binomial CDF table (rows
    indexed by span; `mirrored` means the table holds 1 - p and the sample
    is span - value). Survivors are compacted to the front of x.
    Returns (surviving count, newly succeeded count).
    """
    xa = x[:count]
    span = np.minimum(xa, n - xa)
    steps = binomial_small_cdf(cdf, span, u)
    if mirrored:
        steps = span - steps
    xa = xa + 2 * steps - span
    succeeded = int(np.count_nonzero(xa == n))
    keep = xa[(xa != n) & (xa != 0)]
    x[: keep.size] = keep
    return keep.size, succeeded


def shuffle_columns(configs, keys):
    """Independently permute every column of ``configs``.

    The permutation of column j sorts the uint32 keys[:, j] ascending,
    ties broken by row index (stable sort).
    """
    order = np.argsort(keys, axis=0, kind="stable")
    return np.take_along_axis(configs, order, axis=0)
