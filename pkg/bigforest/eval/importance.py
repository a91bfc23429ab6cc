#-------------------------------------------------------------------------------
# bigforest: eval/importance.py
#
# Permutation variable importance and per-tree out-of-bag errors
#
# This code is in the public domain
#-------------------------------------------------------------------------------
from collections import namedtuple
import logging

import numpy as np
from joblib import Parallel, delayed

from ..common.exceptions import EstimateUnavailableError
from ..common.utils import derive_generator
from .oob import oob_mask


log = logging.getLogger('bigforest.eval')


# vi: float64 array, one importance per feature
# tree_errors: float64 array, the out-of-bag error of every tree (nan for
#              trees with no out-of-bag row)
# n_skipped: trees left out for having no out-of-bag row
#
VariableImportance = namedtuple('VariableImportance',
    'vi tree_errors n_skipped')


def tree_oob_errors(forest, ds):
    """ errTree_t of every tree: its misclassification rate on its own
        out-of-bag rows (nan when it has none).
    """
    errors = np.full(len(forest.trees), np.nan)
    for t, tree in enumerate(forest.trees):
        mask = oob_mask(forest, t, len(ds))
        if mask.any():
            predicted = tree.predict_batch(ds.features[mask])
            errors[t] = np.mean(predicted != ds.labels[mask])
    return errors


def variable_importance(forest, ds, seed, workers=1, permutation=None):
    """ Permutation importance of every feature: for each tree, the increase
        of its out-of-bag error after permuting the feature's values among
        its out-of-bag rows, averaged over the trees.

        The permutation of (tree, feature) is drawn from a generator derived
        from (seed, plan tree id, feature), so results do not depend on the
        order trees are processed in. permutation(rng, size), when given,
        replaces rng.permutation. Features a tree never splits on contribute
        exactly 0 for that tree. Trees without out-of-bag rows are skipped
        and the average is over the remaining ones.
    """
    if permutation is None:
        permutation = _default_permutation
    positions = range(len(forest.trees))
    if workers > 1:
        results = Parallel(n_jobs=workers, prefer='threads')(
            delayed(_tree_importance)(forest, ds, t, seed, permutation)
            for t in positions)
    else:
        results = [_tree_importance(forest, ds, t, seed, permutation)
                   for t in positions]

    tree_errors = np.array([r[0] for r in results], dtype=np.float64)
    used = [r[1] for r in results if r[1] is not None]
    n_skipped = len(results) - len(used)
    if n_skipped:
        log.info('variable importance: skipped %d trees without '
                 'out-of-bag rows', n_skipped)
    if not used:
        raise EstimateUnavailableError(
            'variable importance unavailable: no tree has out-of-bag rows')
    vi = np.sum(used, axis=0) / len(used)
    return VariableImportance(vi, tree_errors, n_skipped)


#------------------------- PRIVATE -------------------------

def _default_permutation(rng, size):
    return rng.permutation(size)


def _tree_importance(forest, ds, t, seed, permutation):
    """ (errTree_t, per-feature error increase) of the tree at position t,
        or (nan, None) when it has no out-of-bag row.
    """
    tree = forest.trees[t]
    mask = oob_mask(forest, t, len(ds))
    if not mask.any():
        return np.nan, None
    X = ds.features[mask]
    y = ds.labels[mask]
    base = np.mean(tree.predict_batch(X) != y)
    increase = np.zeros(ds.n_features)
    tree_id = int(forest.tree_ids[t])
    for j in tree.used_features():
        rng = derive_generator(seed, tree_id, int(j))
        permuted = X.copy()
        permuted[:, j] = X[permutation(rng, len(X)), j]
        increase[j] = np.mean(tree.predict_batch(permuted) != y) - base
    return base, increase
