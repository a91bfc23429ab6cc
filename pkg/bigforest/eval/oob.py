#-------------------------------------------------------------------------------
# bigforest: eval/oob.py
#
# Out-of-bag error of a forest (errForest), its cheap per-scheme
# approximations (BDerrForest) and the test error
#
# This code is in the public domain
#-------------------------------------------------------------------------------
import numpy as np

from ..common.exceptions import EstimateUnavailableError
from ..common.utils import forest_assert, vote_argmax
from .estimate import make_estimate


def oob_mask(forest, tree_index, n):
    """ Boolean array over range(n): the rows out of the bag of the tree at
        position tree_index.
    """
    mask = np.ones(n, dtype=bool)
    mask[forest.inbag[tree_index].indices] = False
    return mask


def oob_votes(forest, ds, rows=None, tree_positions=None):
    """ Out-of-bag vote matrix over `rows` (all rows of ds by default): row i
        collects the votes of the trees among tree_positions (all by
        default) whose inbag excludes rows[i]. Returns (votes, n_predictions).
    """
    n = len(ds)
    if rows is None:
        rows = np.arange(n)
    rows = np.asarray(rows, dtype=np.int64)
    if tree_positions is None:
        tree_positions = range(len(forest.trees))
    position_of = np.full(n, -1, dtype=np.int64)
    position_of[rows] = np.arange(len(rows))
    votes = np.zeros((len(rows), forest.n_classes), dtype=np.int64)
    n_predictions = 0
    for t in tree_positions:
        targets = rows[oob_mask(forest, t, n)[rows]]
        if not targets.size:
            continue
        predicted = forest.trees[t].predict_batch(ds.features[targets])
        np.add.at(votes, (position_of[targets], predicted), 1)
        n_predictions += targets.size
    return votes, n_predictions


def err_forest(forest, ds, rows=None, tree_positions=None,
               what='out-of-bag error'):
    """ errForest: every row is predicted by the majority vote of the trees
        whose inbag excludes it, and the estimate is the share of wrong
        votes. Rows out of the bag of no tree are left out and counted in
        n_excluded. Raises EstimateUnavailableError when no row is left.
    """
    _check_shape(forest, ds)
    if rows is None:
        rows = np.arange(len(ds))
    rows = np.asarray(rows, dtype=np.int64)
    votes, n_predictions = oob_votes(forest, ds, rows, tree_positions)
    voted = votes.sum(axis=1) > 0
    predicted = vote_argmax(votes[voted])
    n_errors = int(np.count_nonzero(predicted != ds.labels[rows[voted]]))
    return make_estimate(n_errors, int(voted.sum()),
                         n_excluded=int((~voted).sum()),
                         n_predictions=n_predictions, what=what)


def bd_err_samp_dac(forest, ds):
    """ BDerrForest of subsample and dac forests: the out-of-bag error of
        every group computed within its own subforest and its own rows,
        averaged with weights equal to the group sizes. Groups without any
        out-of-bag row are left out of the average.
    """
    _check_shape(forest, ds)
    forest_assert(forest.plan.scheme in ('subsample', 'dac'),
        'this estimate needs a subsample or dac forest, not %s' % (
            forest.plan.scheme,))
    weighted_rate = 0.0
    total_size = n_evaluated = n_excluded = n_predictions = 0
    for g in forest.groups:
        try:
            part = err_forest(forest, ds, rows=g.rows,
                              tree_positions=range(g.tree_start, g.tree_stop))
        except EstimateUnavailableError:
            n_excluded += len(g.rows)
            continue
        weighted_rate += part.rate * len(g.rows)
        total_size += len(g.rows)
        n_evaluated += part.n_evaluated
        n_excluded += part.n_excluded
        n_predictions += part.n_predictions
    estimate = make_estimate(0, n_evaluated, n_excluded, n_predictions,
                             what='group out-of-bag error')
    return estimate._replace(rate=weighted_rate / total_size)


def bd_err_blb(forest, ds):
    """ BDerrForest of blb forests: every row of subsample l is predicted by
        the trees of all other subforests, and the estimate is the share of
        wrong votes over all K*m subsampled rows.
    """
    _check_shape(forest, ds)
    forest_assert(forest.plan.scheme == 'blb',
        'this estimate needs a blb forest, not %s' % (forest.plan.scheme,))
    forest_assert(len(forest.groups) >= 2,
        'this estimate needs K >= 2 subforests')
    n_errors = n_evaluated = n_excluded = n_predictions = 0
    for g in forest.groups:
        others = [t for t in range(len(forest.trees))
                  if not g.tree_start <= t < g.tree_stop]
        predictions = forest.tree_predictions(ds.features[g.rows], others)
        n_predictions += predictions.size
        votes = np.zeros((len(g.rows), forest.n_classes), dtype=np.int64)
        rows = np.arange(len(g.rows))
        for row_predictions in predictions:
            np.add.at(votes, (rows, row_predictions), 1)
        n_errors += int(np.count_nonzero(
            vote_argmax(votes) != ds.labels[g.rows]))
        n_evaluated += len(g.rows)
    return make_estimate(n_errors, n_evaluated, n_excluded, n_predictions,
                         what='blb out-of-bag error')


def bd_err_moon(forest, ds):
    """ BDerrForest of moon forests: errForest restricted to the union of
        the subsamples, every row counted once.
    """
    _check_shape(forest, ds)
    forest_assert(forest.plan.scheme == 'moon',
        'this estimate needs a moon forest, not %s' % (forest.plan.scheme,))
    union = np.unique(np.concatenate([g.rows for g in forest.groups])) \
            if forest.groups else np.empty(0, dtype=np.int64)
    return err_forest(forest, ds, rows=union,
                      what='moon out-of-bag error')


def bd_err_forest(forest, ds):
    """ The BDerrForest estimate matching the forest's scheme; errForest
        itself for standard and poisson forests. Single-subforest blb
        forests have no such estimate.
    """
    scheme = forest.plan.scheme
    if scheme in ('subsample', 'dac'):
        return bd_err_samp_dac(forest, ds)
    if scheme == 'blb':
        if len(forest.groups) < 2:
            raise EstimateUnavailableError(
                'blb out-of-bag error unavailable with a single subforest')
        return bd_err_blb(forest, ds)
    if scheme == 'moon':
        return bd_err_moon(forest, ds)
    return err_forest(forest, ds)


def err_test(predictor, test_ds, workers=1):
    """ Misclassification rate of predictor.predict_batch on test_ds.
    """
    predicted = predictor.predict_batch(test_ds.features, workers=workers)
    n_errors = int(np.count_nonzero(predicted != test_ds.labels))
    return make_estimate(n_errors, len(test_ds),
                         n_predictions=len(test_ds) * len(predictor),
                         what='test error')


#------------------------- PRIVATE -------------------------

def _check_shape(forest, ds):
    forest_assert(ds.n_features == forest.n_features,
        'forest expects %d features, the dataset has %d' % (
            forest.n_features, ds.n_features))
