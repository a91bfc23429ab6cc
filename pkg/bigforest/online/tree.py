#-------------------------------------------------------------------------------
# bigforest: online/tree.py
#
# OnlineTree - an extremely randomized tree grown one observation at a time
#
# This code is in the public domain
#-------------------------------------------------------------------------------
import numpy as np

from ..common.utils import vote_argmax
from ..tree.splitter import (
    gini_impurity, split_decrease, MIN_IMPURITY_DECREASE)


class OnlineLeaf(object):
    """ A growing leaf.

        Accessible attributes:

            depth:
                depth of the leaf (the root has depth 0)

            counts:
                float64 class counts the leaf predicts from (estimation
                statistics)

            structure_counts:
                float64 class counts of the observations that drive split
                choice; equal to counts unless the forest uses two streams

            lo, hi:
                float64 per-feature range of the structure observations seen
                by this leaf (+inf / -inf before any)

            features, thresholds:
                the S candidate splits, x[feature] <= threshold going left

            left_counts, right_counts:
                float64 arrays (S, n_classes); class counts of the candidate
                children, accumulated since the candidates were drawn
    """
    def __init__(self, depth, counts, structure_counts, features, thresholds,
                 lo, hi, left_counts=None, right_counts=None):
        n_classes = len(counts)
        S = len(features)
        self.depth = depth
        self.counts = np.array(counts, dtype=np.float64)
        self.structure_counts = np.array(structure_counts, dtype=np.float64)
        self.features = np.array(features, dtype=np.int64)
        self.thresholds = np.array(thresholds, dtype=np.float64)
        self.lo = np.array(lo, dtype=np.float64)
        self.hi = np.array(hi, dtype=np.float64)
        if left_counts is None:
            left_counts = np.zeros((S, n_classes))
        if right_counts is None:
            right_counts = np.zeros((S, n_classes))
        self.left_counts = np.array(left_counts, dtype=np.float64)
        self.right_counts = np.array(right_counts, dtype=np.float64)

    is_leaf = True

    def accumulated(self):
        """ Class counts of the structure observations seen since the
            candidates were drawn.
        """
        return self.left_counts[0] + self.right_counts[0]

    def observe_structure(self, x, y, weight):
        goes_left = x[self.features] <= self.thresholds
        self.left_counts[goes_left, y] += weight
        self.right_counts[~goes_left, y] += weight
        self.structure_counts[y] += weight
        np.minimum(self.lo, x, out=self.lo)
        np.maximum(self.hi, x, out=self.hi)

    def observe_estimation(self, y, weight):
        self.counts[y] += weight

    def best_candidate(self):
        """ (index, Gini decrease) of the best candidate split; ties go to
            the lowest candidate index.
        """
        decreases = split_decrease(self.accumulated(), self.left_counts)
        best = int(np.argmax(decreases))
        return best, float(decreases[best])

    def prediction(self):
        return int(vote_argmax(self.counts))


class OnlineSplit(object):
    """ A committed split: x[feature] <= threshold goes to left. Never
        revised once created.
    """
    def __init__(self, depth, feature, threshold, left, right):
        self.depth = depth
        self.feature = int(feature)
        self.threshold = float(threshold)
        self.left = int(left)
        self.right = int(right)

    is_leaf = False


class OnlineTree(object):
    """ An online ERT: a node list whose entry 0 is the root. Leaves hold
        candidate splits and grow into OnlineSplit nodes when the split
        trigger fires.

        Accessible attributes:

            nodes:
                list of OnlineLeaf and OnlineSplit objects

            n_classes, n_features:
                shape of the data

            range_lo, range_hi:
                declared per-feature ranges candidate thresholds fall back to
    """
    def __init__(self, nodes, n_classes, range_lo, range_hi):
        self.nodes = nodes
        self.n_classes = n_classes
        self.range_lo = np.asarray(range_lo, dtype=np.float64)
        self.range_hi = np.asarray(range_hi, dtype=np.float64)
        self.n_features = len(self.range_lo)

    @classmethod
    def new(cls, n_classes, range_lo, range_hi, S, rng):
        """ A tree holding a single root leaf with S candidates drawn from
            the declared ranges.
        """
        tree = cls([], n_classes, range_lo, range_hi)
        zeros = np.zeros(n_classes)
        tree.nodes.append(tree._make_leaf(0, zeros, zeros, tree.range_lo,
                                          tree.range_hi, S, rng))
        return tree

    def find_leaf(self, x):
        """ Id of the leaf x is routed to.
        """
        node_id = 0
        node = self.nodes[0]
        while not node.is_leaf:
            node_id = node.left if x[node.feature] <= node.threshold \
                      else node.right
            node = self.nodes[node_id]
        return node_id

    def predict(self, x):
        return self.nodes[self.find_leaf(x)].prediction()

    def depth(self):
        return max(node.depth for node in self.nodes)

    def n_leaves(self):
        return sum(1 for node in self.nodes if node.is_leaf)

    def leaf_gini(self):
        """ Gini index of the estimation counts of every leaf.
        """
        return gini_impurity([node.counts for node in self.nodes
                              if node.is_leaf])

    def update(self, x, y, weight, structure, estimation, trigger, S, rng):
        """ Apply one copy of (x, y) to the leaf it reaches, then commit the
            leaf's best candidate if trigger = (alpha, beta, max_depth)
            allows it. structure and estimation select which statistics the
            observation feeds.
        """
        leaf_id = self.find_leaf(x)
        leaf = self.nodes[leaf_id]
        if estimation:
            leaf.observe_estimation(y, weight)
        if structure:
            leaf.observe_structure(x, y, weight)
            self._maybe_split(leaf_id, leaf, trigger, S, rng, estimation)

    #-------------------------------- PRIVATE --------------------------------#

    def _maybe_split(self, leaf_id, leaf, trigger, S, rng, seed_estimation):
        alpha, beta, max_depth = trigger
        if leaf.depth >= max_depth:
            return
        if leaf.accumulated().sum() < alpha:
            return
        best, decrease = leaf.best_candidate()
        if decrease <= MIN_IMPURITY_DECREASE or decrease < beta:
            return

        feature = leaf.features[best]
        threshold = leaf.thresholds[best]
        left_lo, left_hi = self._child_ranges(leaf, feature, threshold, True)
        right_lo, right_hi = self._child_ranges(leaf, feature, threshold,
                                                False)
        zeros = np.zeros(self.n_classes)
        left_counts = leaf.left_counts[best]
        right_counts = leaf.right_counts[best]
        left = self._make_leaf(
            leaf.depth + 1, left_counts if seed_estimation else zeros,
            left_counts, left_lo, left_hi, S, rng)
        right = self._make_leaf(
            leaf.depth + 1, right_counts if seed_estimation else zeros,
            right_counts, right_lo, right_hi, S, rng)
        # Children first, so readers never reach a split without children
        left_id = len(self.nodes)
        self.nodes.append(left)
        self.nodes.append(right)
        self.nodes[leaf_id] = OnlineSplit(leaf.depth, feature, threshold,
                                          left_id, left_id + 1)

    def _child_ranges(self, leaf, feature, threshold, left):
        """ Threshold ranges for a child's candidates: the parent's observed
            ranges clipped by the split, or the declared range of a feature
            whose observed range is empty.
        """
        lo = leaf.lo.copy()
        hi = leaf.hi.copy()
        if left:
            hi[feature] = min(hi[feature], threshold)
        else:
            lo[feature] = max(lo[feature], threshold)
        empty = ~(lo < hi)
        lo[empty] = self.range_lo[empty]
        hi[empty] = self.range_hi[empty]
        return lo, hi

    def _make_leaf(self, depth, counts, structure_counts, lo, hi, S, rng):
        features = rng.integers(self.n_features, size=S)
        u = rng.random(S)
        thresholds = lo[features] + u * (hi[features] - lo[features])
        return OnlineLeaf(depth, counts, structure_counts, features,
                          thresholds, np.full(self.n_features, np.inf),
                          np.full(self.n_features, -np.inf))
