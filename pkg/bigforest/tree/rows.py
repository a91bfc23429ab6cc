#-------------------------------------------------------------------------------
# bigforest: tree/rows.py
#
# WeightedRows - the weighted multiset of rows a tree is grown on
#
# This code is in the public domain
#-------------------------------------------------------------------------------
from collections import namedtuple

import numpy as np

from ..common.utils import tree_assert


# indices: distinct row ids into a Dataset (int64 array)
# weights: positive float64 weights, one per index (bootstrap multiplicities
#          or multinomial weights)
#
WeightedRows = namedtuple('WeightedRows', 'indices weights')


def make_weighted_rows(indices, weights=None):
    """ Build WeightedRows, checking its invariants. Weights default to 1.
    """
    indices = np.asarray(indices, dtype=np.int64)
    if weights is None:
        weights = np.ones(len(indices))
    weights = np.asarray(weights, dtype=np.float64)
    tree_assert(indices.shape == weights.shape,
        'got %d indices but %d weights' % (len(indices), len(weights)))
    tree_assert(np.all(weights > 0), 'weights must be positive')
    tree_assert(len(np.unique(indices)) == len(indices),
        'indices must be distinct')
    return WeightedRows(indices, weights)


def rows_from_counts(indices, counts):
    """ WeightedRows from per-index counts (or weights), dropping the indices
        whose count is zero.
    """
    indices = np.asarray(indices, dtype=np.int64)
    counts = np.asarray(counts, dtype=np.float64)
    nonzero = counts > 0
    return WeightedRows(indices[nonzero], counts[nonzero])


def replicate(rows):
    """ The explicit multiset behind integer-weighted rows: every index
        repeated weight times, as WeightedRows over a list of row ids that
        may contain duplicates, together with unit weights.

        Returns (row_ids, unit_weights) arrays; used to check that growing on
        weights equals growing on the replicated sample.
    """
    reps = np.round(rows.weights).astype(np.int64)
    tree_assert(np.array_equal(reps, rows.weights), 'weights are not integral')
    row_ids = np.repeat(rows.indices, reps)
    return row_ids, np.ones(len(row_ids))
