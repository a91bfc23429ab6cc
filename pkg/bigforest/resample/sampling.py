#-------------------------------------------------------------------------------
# bigforest: resample/sampling.py
#
# Sampling primitives: standard bootstrap, bag of little bootstraps weights,
# contiguous chunk partitions and Poisson replication counts
#
# This code is in the public domain
#-------------------------------------------------------------------------------
import numpy as np

from ..common.utils import plan_assert, as_generator, sample_without_replacement
from ..tree.rows import rows_from_counts


# Up to this many throws, multinomial weights are drawn by counting n uniform
# throws; above it by numpy's conditional binomial sampler.
MULTINOMIAL_THROW_LIMIT = 1 << 20


def bootstrap_standard(n, seed):
    """ n uniform draws with replacement out of range(n), as WeightedRows of
        the distinct indices drawn with their multiplicities (summing to n).
    """
    plan_assert(n >= 1, 'bootstrap needs n >= 1, got %d' % n)
    rng = as_generator(seed)
    counts = np.bincount(rng.integers(0, n, size=n), minlength=n)
    return rows_from_counts(np.arange(n), counts)


def blb_weights(m, n, seed):
    """ One multinomial(n; 1/m, ..., 1/m) draw: an int64 vector of m
        non-negative weights summing exactly to n.
    """
    plan_assert(1 <= m <= n, 'blb weights need 1 <= m <= n (m=%d, n=%d)' % (
        m, n))
    rng = as_generator(seed)
    if n <= MULTINOMIAL_THROW_LIMIT:
        return np.bincount(rng.integers(0, m, size=n),
                           minlength=m).astype(np.int64)
    return rng.multinomial(n, np.full(m, 1.0 / m)).astype(np.int64)


def partition_chunks(n, K):
    """ Split range(n) into K contiguous ranges in file order. The first
        n % K ranges hold ceil(n/K) indices, the others floor(n/K).
    """
    plan_assert(1 <= K <= n, 'cannot split %d rows into %d chunks' % (n, K))
    size, extra = divmod(n, K)
    chunks = []
    start = 0
    for k in range(K):
        stop = start + size + (1 if k < extra else 0)
        chunks.append(range(start, stop))
        start = stop
    return chunks


def poisson_count(lam, rng):
    """ One Poisson(lam) draw from the Generator rng.
    """
    plan_assert(lam > 0, 'Poisson rate must be positive, got %r' % (lam,))
    return int(rng.poisson(lam))


def poisson_weights(n, lam, seed):
    """ Batch analogue of online bagging: an independent Poisson(lam) count
        per row of range(n), as WeightedRows (rows drawn 0 times dropped).
    """
    plan_assert(lam > 0, 'Poisson rate must be positive, got %r' % (lam,))
    rng = as_generator(seed)
    return rows_from_counts(np.arange(n), rng.poisson(lam, size=n))


def subsample_rows(n, m, seed):
    """ m distinct rows out of range(n) drawn without replacement, sorted.
    """
    plan_assert(0 <= m <= n, 'cannot subsample %d of %d rows' % (m, n))
    return np.sort(sample_without_replacement(n, m, as_generator(seed)))
