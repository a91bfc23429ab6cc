#-------------------------------------------------------------------------------
# bigforest: online/forest.py
#
# OnlineForest - an ensemble of online ERT trees updated one observation at a
# time with Poisson bootstrap replication, or in two-stream mode
#
# This code is in the public domain
#-------------------------------------------------------------------------------
from collections import namedtuple
import logging

import numpy as np

from ..common.utils import (
    forest_assert, config_assert, data_assert, derive_generator, vote_argmax)
from ..eval.estimate import make_estimate
from ..resample.sampling import poisson_count
from .tree import OnlineTree


log = logging.getLogger('bigforest.online')


# Parameters of an online forest.
#
# Q: number of trees
# S: candidate splits drawn per leaf
# lam: Poisson rate of the online bootstrap
# max_depth: leaves at this depth never split
# alpha: minimum structure count a leaf accumulates before it may split
# beta: minimum Gini decrease of the committed split
# rho: None for Poisson bagging; otherwise the probability of routing an
#      observation of a tree to its structure stream (two-stream mode, no
#      online bootstrap)
# seed: 64-bit seed; tree t draws from its own generator derived from (seed, t)
#
OnlineForestParams = namedtuple('OnlineForestParams',
    'Q S lam max_depth alpha beta rho seed',
    defaults=(10, 1.0, 15, 50.0, 0.01, None, 0))

# Online out-of-bag bookkeeping, see OnlineForest.oob_summary.
OnlineOOBSummary = namedtuple('OnlineOOBSummary',
    'n_updates n_draws n_zero_draws zero_draw_fraction oob_events oob_errors '
    'tree_oob_errors')


def validate_online_params(params):
    config_assert(params.Q >= 1, 'online forest needs Q >= 1')
    config_assert(params.S >= 1, 'online forest needs S >= 1')
    config_assert(params.lam > 0, 'Poisson rate must be positive')
    config_assert(params.max_depth >= 0, 'max_depth must be >= 0')
    config_assert(params.alpha >= 2, 'split trigger needs alpha >= 2')
    config_assert(params.beta >= 0, 'split trigger needs beta >= 0')
    config_assert(params.rho is None or 0 < params.rho < 1,
        'two-stream probability must lie in (0, 1), got %r' % (params.rho,))
    return params


class OnlineForest(object):
    """ Accessible attributes:

            params:
                OnlineForestParams

            trees:
                list of Q OnlineTree

            rngs:
                one numpy Generator per tree

            range_lo, range_hi:
                declared per-feature ranges

            n_classes, n_features:
                shape of the stream

            n_updates, n_draws, n_zero_draws:
                observations seen, Poisson draws made, draws equal to 0

            oob_events, oob_errors:
                observations that were out-of-bag for at least one tree at
                arrival, and how many of them the out-of-bag vote got wrong

            tree_oob_events, tree_oob_errors:
                int64 arrays; the same per tree

        Updates are strictly serial. A node is replaced by its split only
        after both children exist, so a concurrent reader sees every tree
        either before or after an update.
    """
    def __init__(self, params, n_classes, range_lo, range_hi, trees, rngs):
        self.params = params
        self.n_classes = n_classes
        self.range_lo = np.asarray(range_lo, dtype=np.float64)
        self.range_hi = np.asarray(range_hi, dtype=np.float64)
        self.n_features = len(self.range_lo)
        self.trees = trees
        self.rngs = rngs
        self.n_updates = 0
        self.n_draws = 0
        self.n_zero_draws = 0
        self.oob_events = 0
        self.oob_errors = 0
        self.tree_oob_events = np.zeros(params.Q, dtype=np.int64)
        self.tree_oob_errors = np.zeros(params.Q, dtype=np.int64)

    def __len__(self):
        return len(self.trees)

    @property
    def two_stream(self):
        return self.params.rho is not None

    def update(self, x, y, counts=None):
        onrf_update(self, x, y, counts)

    def predict(self, x):
        return onrf_predict(self, x)

    def predict_batch(self, X, workers=1):
        """ onrf_predict for every row of X. workers is accepted for
            interface parity with Forest; prediction here is serial.
        """
        X = np.asarray(X, dtype=np.float64)
        return np.array([onrf_predict(self, x) for x in X], dtype=np.int64)

    def oob_estimate(self):
        return onrf_oob_estimate(self)

    def oob_summary(self):
        """ OnlineOOBSummary of the run so far. tree_oob_errors holds the
            out-of-bag error rate of every tree (nan for trees that never
            had an out-of-bag observation).
        """
        with np.errstate(invalid='ignore', divide='ignore'):
            per_tree = np.where(self.tree_oob_events > 0,
                                self.tree_oob_errors / np.maximum(
                                    self.tree_oob_events, 1),
                                np.nan)
        fraction = (self.n_zero_draws / self.n_draws if self.n_draws
                    else float('nan'))
        return OnlineOOBSummary(self.n_updates, self.n_draws,
                                self.n_zero_draws, fraction, self.oob_events,
                                self.oob_errors, per_tree)

    def max_depth(self):
        return max(tree.depth() for tree in self.trees)

    def n_leaves(self):
        return sum(tree.n_leaves() for tree in self.trees)


def onrf_init(params, feature_ranges, n_classes=2):
    """ A fresh OnlineForest: Q root leaves, each with S candidate splits
        drawn from feature_ranges, a sequence of per-feature (min, max).
    """
    validate_online_params(params)
    ranges = np.asarray(feature_ranges, dtype=np.float64)
    data_assert(ranges.ndim == 2 and ranges.shape[1] == 2 and len(ranges),
        'feature ranges must be a sequence of (min, max) pairs')
    data_assert(np.all(np.isfinite(ranges)), 'feature ranges must be finite')
    data_assert(np.all(ranges[:, 0] < ranges[:, 1]),
        'every feature range needs min < max')
    data_assert(n_classes >= 1, 'need at least one class')
    lo, hi = ranges[:, 0].copy(), ranges[:, 1].copy()
    rngs = [derive_generator(params.seed, t) for t in range(params.Q)]
    trees = [OnlineTree.new(n_classes, lo, hi, params.S, rng) for rng in rngs]
    log.debug('initialized online forest: %d trees, %d features, S=%d',
              params.Q, len(lo), params.S)
    return OnlineForest(params, n_classes, lo, hi, trees, rngs)


def onrf_update(forest, x, y, counts=None):
    """ Feed the observation (x, y) to every tree.

        Poisson mode: tree t applies it k_t ~ Poisson(lam) times (or
        counts[t] times when counts is given). Before any update, the trees
        with k_t = 0 vote on x and the result is recorded as an out-of-bag
        event. Two-stream mode: every tree applies it once, to its structure
        stream with probability rho and to its estimation stream otherwise.
    """
    x = np.asarray(x, dtype=np.float64)
    data_assert(x.shape == (forest.n_features,),
        'expected %d features, got shape %s' % (forest.n_features, x.shape))
    data_assert(0 <= y < forest.n_classes,
        'label %r out of range(%d)' % (y, forest.n_classes))
    y = int(y)
    p = forest.params
    trigger = (p.alpha, p.beta, p.max_depth)
    forest.n_updates += 1

    if forest.two_stream:
        for tree, rng in zip(forest.trees, forest.rngs):
            structure = bool(rng.random() < p.rho)
            tree.update(x, y, 1.0, structure, not structure, trigger, p.S,
                        rng)
        return

    if counts is None:
        ks = [poisson_count(p.lam, rng) for rng in forest.rngs]
    else:
        data_assert(len(counts) == len(forest.trees),
            'need one count per tree, got %d' % len(counts))
        ks = [int(k) for k in counts]
        data_assert(min(ks) >= 0, 'replication counts must be >= 0')
    forest.n_draws += len(ks)

    oob = [t for t, k in enumerate(ks) if k == 0]
    forest.n_zero_draws += len(oob)
    if oob:
        votes = np.zeros(forest.n_classes, dtype=np.int64)
        for t in oob:
            predicted = forest.trees[t].predict(x)
            votes[predicted] += 1
            forest.tree_oob_events[t] += 1
            forest.tree_oob_errors[t] += predicted != y
        forest.oob_events += 1
        forest.oob_errors += int(vote_argmax(votes)) != y

    for tree, rng, k in zip(forest.trees, forest.rngs, ks):
        for _ in range(k):
            tree.update(x, y, 1.0, True, True, trigger, p.S, rng)


def onrf_predict(forest, x):
    """ Majority vote of the trees' leaf predictions; ties and empty leaves
        go to the lowest class id.
    """
    forest_assert(forest.trees, 'cannot predict with an empty forest')
    x = np.asarray(x, dtype=np.float64)
    votes = np.zeros(forest.n_classes, dtype=np.int64)
    for tree in forest.trees:
        votes[tree.predict(x)] += 1
    return int(vote_argmax(votes))


def onrf_oob_estimate(forest):
    """ Running out-of-bag error: the share of out-of-bag events whose vote
        was wrong at arrival time. Raises EstimateUnavailableError when no
        event was recorded (always so in two-stream mode).
    """
    return make_estimate(forest.oob_errors, forest.oob_events,
                         n_excluded=forest.n_updates - forest.oob_events,
                         n_predictions=int(forest.tree_oob_events.sum()),
                         what='online out-of-bag error')
