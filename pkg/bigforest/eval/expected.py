#-------------------------------------------------------------------------------
# bigforest: eval/expected.py
#
# Expected numbers of distinct observations in the training multisets of each
# resampling scheme, and structural diagnostics of grown forests
#
# This code is in the public domain
#-------------------------------------------------------------------------------
import math

import numpy as np

from ..common.utils import plan_assert


# Rounded display forms of expected_unique, one per scheme.
EXPECTED_UNIQUE_DISPLAY = dict(
    standard='0.63n',
    subsample='0.63m',
    moon='m',
    blb='m[1-((m-1)/m)^n]',
    dac='0.63n/K',
    poisson='n(1-exp(-lam))',
)


def distinct_fraction(draws, cells):
    """ Expected share of cells hit by `draws` uniform throws into `cells`
        cells: 1 - (1 - 1/cells)^draws.
    """
    if cells <= 1:
        return 1.0 if draws > 0 else 0.0
    return -math.expm1(draws * math.log1p(-1.0 / cells))


def expected_unique(scheme, n, m=None, K=None, lam=1.0):
    """ Expected number of distinct rows in one tree's training multiset.
        Exact formulas; the rounded forms are in EXPECTED_UNIQUE_DISPLAY.
    """
    plan_assert(n >= 1, 'need n >= 1')
    if scheme == 'standard':
        return n * distinct_fraction(n, n)
    if scheme in ('subsample', 'moon', 'blb'):
        plan_assert(m is not None and 1 <= m <= n,
            '%s scheme needs 1 <= m <= n' % scheme)
        if scheme == 'subsample':
            return m * distinct_fraction(m, m)
        if scheme == 'moon':
            return float(m)
        return m * distinct_fraction(n, m)
    if scheme == 'dac':
        plan_assert(K is not None and 1 <= K <= n, 'dac scheme needs 1 <= K <= n')
        chunk = n / float(K)
        return chunk * distinct_fraction(chunk, chunk)
    if scheme == 'poisson':
        plan_assert(lam > 0, 'Poisson rate must be positive')
        return n * -math.expm1(-lam)
    plan_assert(False, 'unknown scheme %r' % (scheme,))


def describe_expected_unique(scheme):
    plan_assert(scheme in EXPECTED_UNIQUE_DISPLAY,
        'unknown scheme %r' % (scheme,))
    return EXPECTED_UNIQUE_DISPLAY[scheme]


def expected_oob_predictions(scheme, n, m=None, K=None, lam=1.0):
    """ Approximate number of out-of-bag rows of one tree, i.e. the
        predictions per tree a full errForest over all n rows needs.
    """
    return n - expected_unique(scheme, n, m, K, lam)


def mean_leaf_gini(forest):
    """ Unweighted mean Gini index over all leaves of all trees.
    """
    ginis = [tree.leaf_gini() for tree in forest.trees]
    if not ginis:
        return 0.0
    return float(np.mean(np.concatenate(ginis)))
