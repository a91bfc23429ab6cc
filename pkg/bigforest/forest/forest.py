#-------------------------------------------------------------------------------
# bigforest: forest/forest.py
#
# Forest - an ensemble of trees aggregated by majority vote, and its training
# for every resampling scheme (seqRF/parRF, sampRF, moonRF, blbRF, dacRF)
#
# This code is in the public domain
#-------------------------------------------------------------------------------
import logging
import time

import numpy as np
from joblib import Parallel, delayed

from ..common.utils import forest_assert, plan_assert, derive_seed, vote_argmax
from ..resample.plan import (
    validate_plan, plan_groups, plan_tree_input, TreeGroup, STREAM_TREE)
from ..tree.tree import grow_tree, resolve_tree_params, dump_tree


log = logging.getLogger('bigforest.forest')


class Forest(object):
    """ An immutable ensemble of classification trees.

        Accessible attributes:

            trees:
                list of Tree, in tree order

            inbag:
                list of WeightedRows, the multiset each tree was grown on;
                row ids index the training Dataset

            plan:
                the ResamplePlan the trees were resampled with

            tree_params:
                TreeParams shared by all trees (mtry resolved; the seed
                field is unused since every tree gets its own derived seed)

            groups:
                list of TreeGroup partitioning the trees into subforests
                (one per subsample or chunk)

            tree_ids:
                int64 array; the plan tree id of every tree

            n_features, n_classes, feature_names, class_names:
                shape of the training data

            train_seconds:
                wall-clock seconds spent growing the trees, or None for
                forests loaded from a file
    """
    def __init__(self, trees, inbag, plan, tree_params, groups,
                 n_features, n_classes, feature_names=None, class_names=None,
                 tree_ids=None, train_seconds=None):
        forest_assert(len(trees) == len(inbag),
            '%d trees but %d inbag records' % (len(trees), len(inbag)))
        self.trees = list(trees)
        self.inbag = list(inbag)
        self.plan = plan
        self.tree_params = tree_params
        self.groups = list(groups)
        self.n_features = int(n_features)
        self.n_classes = int(n_classes)
        self.feature_names = tuple(feature_names if feature_names is not None
            else ('X%d' % (j + 1) for j in range(self.n_features)))
        self.class_names = tuple(class_names if class_names is not None
            else (str(c) for c in range(self.n_classes)))
        self.tree_ids = np.asarray(
            tree_ids if tree_ids is not None else np.arange(len(trees)),
            dtype=np.int64)
        self.train_seconds = train_seconds

    def __len__(self):
        return len(self.trees)

    @property
    def subforest_boundaries(self):
        """ (tree_start, tree_stop) of every group, in tree order.
        """
        return [(g.tree_start, g.tree_stop) for g in self.groups]

    def inbag_derivable(self):
        """ Whether the inbag records can be recomputed from the plan alone:
            the forest holds exactly the trees of its plan, in order.
        """
        return (self.plan is not None and
                np.array_equal(self.tree_ids, np.arange(self.plan.Q)))

    def n_leaves(self):
        return sum(t.n_leaves for t in self.trees)

    def mean_distinct_inbag(self):
        """ Mean number of distinct rows per tree training multiset.
        """
        if not self.inbag:
            return 0.0
        return float(np.mean([len(rows.indices) for rows in self.inbag]))

    def tree_predictions(self, X, tree_ids=None):
        """ Matrix of shape (n_trees, n_rows): the class every tree (or the
            trees listed in tree_ids, by position) predicts for every row.
        """
        X = self._check_matrix(X)
        positions = range(len(self.trees)) if tree_ids is None else tree_ids
        out = np.empty((len(positions), X.shape[0]), dtype=np.int64)
        for i, t in enumerate(positions):
            out[i] = self.trees[t].predict_batch(X)
        return out

    def votes(self, X, tree_ids=None):
        """ Vote matrix of shape (n_rows, n_classes).
        """
        predictions = self.tree_predictions(X, tree_ids)
        return vote_counts(predictions, self.n_classes)

    def predict(self, x):
        """ Majority vote of all trees for the single row x; ties go to the
            lowest class id.
        """
        forest_assert(self.trees, 'cannot predict with an empty forest')
        x = np.asarray(x, dtype=np.float64)
        forest_assert(x.shape == (self.n_features,),
            'expected %d features, got shape %s' % (self.n_features, x.shape))
        votes = np.zeros(self.n_classes, dtype=np.int64)
        for tree in self.trees:
            votes[tree.predict(x)] += 1
        return int(vote_argmax(votes))

    def predict_batch(self, X, workers=1):
        """ predict for every row of X, parallel over row chunks.
        """
        forest_assert(self.trees, 'cannot predict with an empty forest')
        X = self._check_matrix(X)
        if X.shape[0] == 0:
            return np.empty(0, dtype=np.int64)
        if workers <= 1 or X.shape[0] < 2 * workers:
            return vote_argmax(self.votes(X)).astype(np.int64)
        chunks = np.array_split(np.arange(X.shape[0]), workers)
        parts = Parallel(n_jobs=workers, prefer='threads')(
            delayed(self.votes)(X[chunk]) for chunk in chunks)
        return vote_argmax(np.concatenate(parts)).astype(np.int64)

    def _check_matrix(self, X):
        X = np.asarray(X, dtype=np.float64)
        if X.ndim == 1 and X.size == 0:
            X = X.reshape(0, self.n_features)
        forest_assert(X.ndim == 2 and X.shape[1] == self.n_features,
            'expected a matrix with %d columns, got shape %s' % (
                self.n_features, X.shape))
        return X


def vote_counts(predictions, n_classes):
    """ Turn a (n_trees, n_rows) prediction matrix into a (n_rows, n_classes)
        vote matrix.
    """
    n_rows = predictions.shape[1]
    votes = np.zeros((n_rows, n_classes), dtype=np.int64)
    rows = np.arange(n_rows)
    for row_predictions in predictions:
        np.add.at(votes, (rows, row_predictions), 1)
    return votes


def tree_seed(plan, tree_id):
    """ The growth seed of tree tree_id of plan.
    """
    return derive_seed(plan.master_seed, STREAM_TREE, tree_id)


def train(ds, plan, tree_params, workers=1):
    """ Resample and grow every tree of plan on ds.

        Every tree's rows and growth seed derive from (plan.master_seed,
        tree id) only, so the result is the same for any value of workers.
    """
    return _train_trees(ds, plan, tree_params, None, workers)


def train_group(ds, plan, tree_params, group, workers=1):
    """ Grow only the trees of one group of plan (one chunk of a dac plan, one
        subsample of a blb plan). merge() of all groups in order equals
        train() with the same plan.
    """
    validate_plan(plan)
    groups = plan_groups(plan)
    plan_assert(0 <= group < len(groups),
        'group %d out of range(%d)' % (group, len(groups)))
    return _train_trees(ds, plan, tree_params, [group], workers)


def merge(forests):
    """ Aggregate forests into one whose trees are all of theirs.

        Forests must agree on the number of features and classes. When all
        of them hold disjoint parts of the same plan and together cover it,
        the result is the forest train() would have built with that plan.
        Otherwise every forest's groups become subforests of the result.
    """
    forest_assert(forests, 'nothing to merge')
    first = forests[0]
    for f in forests[1:]:
        forest_assert(f.n_features == first.n_features and
                      f.n_classes == first.n_classes,
            'cannot merge a forest over %d features and %d classes into one '
            'over %d features and %d classes' % (
                f.n_features, f.n_classes, first.n_features, first.n_classes))

    trees, inbag, groups, tree_ids = [], [], [], []
    for f in forests:
        offset = len(trees)
        for g in f.groups:
            groups.append(TreeGroup(len(groups), g.tree_start + offset,
                                    g.tree_stop + offset, g.rows))
        trees.extend(f.trees)
        inbag.extend(f.inbag)
        tree_ids.extend(f.tree_ids)
    tree_ids = np.asarray(tree_ids, dtype=np.int64)
    seconds = [f.train_seconds for f in forests]
    train_seconds = sum(seconds) if None not in seconds else None

    same_plan = all(f.plan == first.plan and f.tree_params == first.tree_params
                    for f in forests)
    if (same_plan and first.plan is not None and
            np.array_equal(np.sort(tree_ids), np.arange(first.plan.Q))):
        order = np.argsort(tree_ids, kind='stable')
        return Forest([trees[i] for i in order], [inbag[i] for i in order],
                      first.plan, first.tree_params, plan_groups(first.plan),
                      first.n_features, first.n_classes, first.feature_names,
                      first.class_names, tree_ids[order], train_seconds)

    return Forest(trees, inbag, first.plan, first.tree_params, groups,
                  first.n_features, first.n_classes, first.feature_names,
                  first.class_names, tree_ids, train_seconds)


def dump_forest(forest):
    """ Text dump of every tree of forest, with a header per tree.
    """
    parts = []
    for i, tree in enumerate(forest.trees):
        parts.append('Tree %d (plan tree id %d): %d nodes, %d leaves, '
                     'depth %d' % (i, forest.tree_ids[i], tree.n_nodes,
                                   tree.n_leaves, tree.depth))
        parts.append(dump_tree(tree, forest.feature_names,
                               forest.class_names))
    return '\n'.join(parts)


#------------------------- PRIVATE -------------------------

def _train_trees(ds, plan, tree_params, group_ids, workers):
    validate_plan(plan)
    plan_assert(len(ds) == plan.n,
        'plan is for %d rows but the dataset has %d' % (plan.n, len(ds)))
    forest_assert(workers >= 1, 'workers must be >= 1, got %r' % (workers,))
    params = resolve_tree_params(tree_params, ds.n_features)._replace(seed=0)
    all_groups = plan_groups(plan)
    groups = all_groups
    if group_ids is not None:
        groups = [all_groups[g] for g in group_ids]
    tree_ids = [t for g in groups for t in range(g.tree_start, g.tree_stop)]

    log.info('training %d trees (%s scheme, n=%d) with %d workers',
             len(tree_ids), plan.scheme, plan.n, workers)
    started = time.perf_counter()
    if workers > 1:
        results = Parallel(n_jobs=workers, prefer='threads')(
            delayed(_grow_one)(ds, plan, all_groups, params, t)
            for t in tree_ids)
    else:
        results = [_grow_one(ds, plan, all_groups, params, t)
                   for t in tree_ids]
    seconds = time.perf_counter() - started
    log.info('trained %d trees in %.3f seconds', len(results), seconds)

    # Group bounds are relative to the trees actually held
    held_groups = groups
    if group_ids is not None:
        held_groups = []
        offset = 0
        for g in groups:
            size = g.tree_stop - g.tree_start
            held_groups.append(TreeGroup(g.group_id, offset, offset + size,
                                         g.rows))
            offset += size

    return Forest([r[0] for r in results], [r[1] for r in results],
                  plan, params, held_groups, ds.n_features, ds.n_classes,
                  ds.column_names, ds.class_names, tree_ids, seconds)


def _grow_one(ds, plan, groups, params, tree_id):
    tree_input = plan_tree_input(plan, groups, tree_id)
    tree = grow_tree(ds, tree_input.rows,
                     params._replace(seed=tree_seed(plan, tree_id)))
    return tree, tree_input.rows
