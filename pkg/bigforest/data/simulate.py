#-------------------------------------------------------------------------------
# bigforest: data/simulate.py
#
# The two-submodel Gaussian simulation model and its biased row orderings
# ("unbalanced" and "x-biases")
#
# This code is in the public domain
#-------------------------------------------------------------------------------
from collections import namedtuple

import numpy as np
from joblib import Parallel, delayed

from ..common.utils import data_assert, as_generator, derive_generator
from .dataset import Dataset


# A simulation request.
#
# n: number of rows
# seed: 64-bit master seed
# class_balance: P(Y = +1)
# submodel1_prob: probability that a row comes from submodel 1
# standardize: center every column and scale it to unit (population) variance
#
SimulationSpec = namedtuple('SimulationSpec',
    'n seed class_balance submodel1_prob standardize',
    defaults=(0, 0.5, 0.7, True))

N_SIMULATED_FEATURES = 7

# Rows are generated in fixed blocks, each with its own derived generator, so
# the output does not depend on how blocks are scheduled.
BLOCK_ROWS = 1 << 16

# Y = -1 is class 0 and Y = +1 is class 1.
SIMULATED_CLASS_NAMES = ('0', '1')


def simulate_weston(spec, workers=1):
    """ Generate spec.n rows of the simulation model:

          - Y = +1 with probability class_balance, -1 otherwise
          - with probability submodel1_prob (submodel 1):
                X^j ~ N(j*Y, 1) for j in 1..3, X^j ~ N(0, 1) for j in 4..6
          - otherwise (submodel 2):
                X^j ~ N(0, 1) for j in 1..3, X^j ~ N((j-3)*Y, 1) for j in 4..6
          - X^7 ~ N(0, 1)

        The returned Dataset has submodel tags set. Generation is
        bit-reproducible for a fixed (n, seed) whatever the value of workers.
    """
    _check_spec(spec)
    n = int(spec.n)
    starts = list(range(0, n, BLOCK_ROWS))
    if workers > 1 and len(starts) > 1:
        blocks = Parallel(n_jobs=workers)(
            delayed(_simulate_block)(spec, i, start, min(start + BLOCK_ROWS, n))
            for i, start in enumerate(starts))
    else:
        blocks = [_simulate_block(spec, i, start, min(start + BLOCK_ROWS, n))
                  for i, start in enumerate(starts)]

    if blocks:
        features = np.concatenate([b[0] for b in blocks])
        labels = np.concatenate([b[1] for b in blocks])
        tags = np.concatenate([b[2] for b in blocks])
    else:
        features = np.empty((0, N_SIMULATED_FEATURES))
        labels = np.empty(0, dtype=np.int64)
        tags = np.empty(0, dtype=np.int8)

    if spec.standardize and n > 0:
        features = standardize(features)

    return Dataset(features, labels, n_classes=2, submodel_tags=tags,
                   column_names=['X%d' % (j + 1)
                                 for j in range(N_SIMULATED_FEATURES)],
                   class_names=SIMULATED_CLASS_NAMES)


def standardize(features):
    """ Center each column and scale it to unit population variance. Constant
        columns are only centered.
    """
    mean = features.mean(axis=0)
    std = features.std(axis=0)
    std[std == 0] = 1.0
    return (features - mean) / std


def permute_unbalanced(ds, p, seed=0):
    """ Reorder the rows of a two-class dataset so that the first floor(n/2)
        rows contain a proportion p of class 1 and the remaining rows hold
        everything else (a proportion p of class 0 when the classes are
        balanced).

        The per-class counts of the first half are drawn uniformly without
        replacement from the class pools, then both halves are shuffled.
    """
    data_assert(0 < p < 1, 'the proportion p must lie in (0, 1), got %r' % p)
    data_assert(ds.n_classes == 2,
        'unbalanced ordering needs a two-class dataset')
    n = len(ds)
    half = n // 2
    n1_first = int(np.floor(p * half + 1e-9))
    n0_first = half - n1_first

    ones = np.flatnonzero(ds.labels == 1)
    zeros = np.flatnonzero(ds.labels == 0)
    data_assert(n1_first <= len(ones) and n0_first <= len(zeros),
        'infeasible composition: first half needs %d rows of class 1 and %d '
        'of class 0, dataset has %d and %d' % (
            n1_first, n0_first, len(ones), len(zeros)))

    rng = as_generator(seed)
    ones = rng.permutation(ones)
    zeros = rng.permutation(zeros)
    first = rng.permutation(np.concatenate((ones[:n1_first],
                                            zeros[:n0_first])))
    rest = rng.permutation(np.concatenate((ones[n1_first:],
                                           zeros[n0_first:])))
    return ds.take(np.concatenate((first, rest)))


def permute_xbiases(ds, parts):
    """ Reorder the rows into `parts` contiguous blocks alternating between
        submodel-1 and submodel-2 rows, starting with submodel 1. The
        submodel-1 rows are spread evenly over the ceil(parts/2) odd blocks
        and the submodel-2 rows over the floor(parts/2) even ones, so the
        global submodel proportion is kept.

        With parts = 1 or 2 every submodel-1 row precedes every submodel-2
        row: contiguous chunks of the result are then pure except at most
        the one straddling the boundary. Rows keep their relative order
        inside each submodel pool.
    """
    data_assert(ds.submodel_tags is not None,
        'x-biases ordering needs submodel tags')
    data_assert(parts >= 1, 'number of parts must be >= 1, got %r' % parts)
    sub1 = np.flatnonzero(ds.submodel_tags == 1)
    sub2 = np.flatnonzero(ds.submodel_tags == 2)
    blocks1 = np.array_split(sub1, (parts + 1) // 2)
    blocks2 = np.array_split(sub2, max(parts // 2, 1))

    order = []
    for k in range(len(blocks1)):
        order.append(blocks1[k])
        if k < len(blocks2):
            order.append(blocks2[k])
    return ds.take(np.concatenate(order).astype(np.int64))


#------------------------- PRIVATE -------------------------

def _check_spec(spec):
    data_assert(spec.n >= 0, 'n must be >= 0, got %r' % (spec.n,))
    data_assert(0 < spec.class_balance < 1,
        'class_balance must lie in (0, 1), got %r' % (spec.class_balance,))
    data_assert(0 <= spec.submodel1_prob <= 1,
        'submodel1_prob must lie in [0, 1], got %r' % (spec.submodel1_prob,))


def _simulate_block(spec, block, start, stop):
    rng = derive_generator(spec.seed, block)
    size = stop - start
    y = np.where(rng.random(size) < spec.class_balance, 1.0, -1.0)
    tags = np.where(rng.random(size) < spec.submodel1_prob, 1, 2).astype(np.int8)
    noise = rng.standard_normal((size, N_SIMULATED_FEATURES))

    means = np.zeros((size, N_SIMULATED_FEATURES))
    scale = np.array([1.0, 2.0, 3.0])
    sub1 = tags == 1
    means[sub1, 0:3] = y[sub1, None] * scale
    means[~sub1, 3:6] = y[~sub1, None] * scale
    return means + noise, (y > 0).astype(np.int64), tags
