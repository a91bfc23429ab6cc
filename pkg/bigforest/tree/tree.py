#-------------------------------------------------------------------------------
# bigforest: tree/tree.py
#
# Tree - a binary classification tree, its best-first growth under a leaf
# budget, prediction, serialization and text dump
#
# This code is in the public domain
#-------------------------------------------------------------------------------
from collections import namedtuple
from io import BytesIO
import heapq
import math

import numpy as np

from ..common.structs import get_structs, identify, TREE_MAGIC, FORMAT_VERSION
from ..common.utils import (
    tree_assert, format_assert, vote_argmax, struct_parse)
from .splitter import node_split_exhaustive, node_split_ert, gini_impurity


# Growth parameters of one tree.
#
# mtry: candidate features per node; None means floor(sqrt(p))
# max_leaves: leaf budget, 0 = unlimited (fully developed tree)
# max_depth: depth budget, 0 = unlimited
# min_node_weight: nodes with less total weight become leaves
# split_mode: 'gini' (exhaustive search over mtry features) or 'ert'
# S: candidate splits per node in 'ert' mode
# seed: 64-bit seed of the tree's generator
#
TreeParams = namedtuple('TreeParams',
    'mtry max_leaves max_depth min_node_weight split_mode S seed',
    defaults=(None, 0, 0, 2.0, 'gini', 1, 0))

SPLIT_MODES = ('gini', 'ert')


def default_mtry(n_features):
    return max(1, int(math.floor(math.sqrt(n_features))))


def resolve_tree_params(params, n_features):
    """ params with mtry filled in, after checking every field.
    """
    mtry = params.mtry if params.mtry is not None else default_mtry(n_features)
    tree_assert(1 <= mtry <= max(n_features, 1),
        'mtry must lie in [1, %d], got %r' % (n_features, mtry))
    tree_assert(params.max_leaves >= 0, 'max_leaves must be >= 0')
    tree_assert(params.max_depth >= 0, 'max_depth must be >= 0')
    tree_assert(params.min_node_weight >= 0, 'min_node_weight must be >= 0')
    tree_assert(params.split_mode in SPLIT_MODES,
        'unknown split mode %r' % (params.split_mode,))
    tree_assert(params.split_mode != 'ert' or params.S >= 1,
        'ert split mode needs S >= 1')
    return params._replace(mtry=int(mtry))


class Tree(object):
    """ A grown classification tree, stored as parallel node arrays. Node 0 is
        the root; children always have larger ids than their parent.

        Accessible attributes:

            feature:
                int32 per node; the split column, -1 for leaves

            threshold:
                float64 per node; x[feature] <= threshold routes left (0.0
                for leaves)

            left, right:
                int32 child ids per node (-1 for leaves)

            prediction:
                int32 per node; argmax of class_counts, lowest class id on
                ties

            class_counts:
                float64 array (n_nodes, n_classes) of weighted class counts

            depth:
                maximal depth reached (the root has depth 0)

        A Tree is never modified after growth.
    """
    def __init__(self, feature, threshold, left, right, class_counts,
                 n_features, depth):
        self.feature = np.asarray(feature, dtype=np.int32)
        self.threshold = np.asarray(threshold, dtype=np.float64)
        self.left = np.asarray(left, dtype=np.int32)
        self.right = np.asarray(right, dtype=np.int32)
        self.class_counts = np.asarray(class_counts, dtype=np.float64)
        self.prediction = vote_argmax(self.class_counts).astype(np.int32)
        self.n_features = int(n_features)
        self.depth = int(depth)
        for a in (self.feature, self.threshold, self.left, self.right,
                  self.class_counts, self.prediction):
            a.flags.writeable = False

    @property
    def n_nodes(self):
        return len(self.feature)

    @property
    def n_classes(self):
        return self.class_counts.shape[1]

    @property
    def n_leaves(self):
        return int(np.count_nonzero(self.feature < 0))

    def leaf_ids(self):
        return np.flatnonzero(self.feature < 0)

    def used_features(self):
        """ Sorted array of the columns some split of this tree tests.
        """
        return np.unique(self.feature[self.feature >= 0])

    def apply(self, X):
        """ Leaf id reached by every row of X.
        """
        X = np.asarray(X, dtype=np.float64)
        node = np.zeros(X.shape[0], dtype=np.int64)
        active = np.arange(X.shape[0])
        while active.size:
            f = self.feature[node[active]]
            internal = f >= 0
            active = active[internal]
            if not active.size:
                break
            f = f[internal]
            current = node[active]
            go_left = X[active, f] <= self.threshold[current]
            node[active] = np.where(go_left, self.left[current],
                                    self.right[current])
        return node

    def predict(self, x):
        return predict_tree(self, x)

    def predict_batch(self, X):
        """ Class id for every row of X.
        """
        return self.prediction[self.apply(X)].astype(np.int64)

    def leaf_gini(self):
        """ Gini index of every leaf.
        """
        return gini_impurity(self.class_counts[self.leaf_ids()])

    def serialize(self, little_endian=True):
        """ The versioned binary blob of this tree (see README for the byte
            layout).
        """
        s = get_structs(little_endian)
        return s.BF_Tree.build(dict(
            ident=dict(magic=TREE_MAGIC,
                       byte_order='BFDATA2LSB' if little_endian
                                  else 'BFDATA2MSB',
                       version=FORMAT_VERSION),
            n_classes=self.n_classes,
            n_features=self.n_features,
            depth=self.depth,
            n_nodes=self.n_nodes,
            feature=self.feature.astype(s.dtype_int32).tobytes(),
            threshold=self.threshold.astype(s.dtype_float64).tobytes(),
            left=self.left.astype(s.dtype_int32).tobytes(),
            right=self.right.astype(s.dtype_int32).tobytes(),
            prediction=self.prediction.astype(s.dtype_int32).tobytes(),
            class_counts=self.class_counts.astype(s.dtype_float64).tobytes()))

    @classmethod
    def parse(cls, data):
        """ Rebuild a Tree from a blob made by serialize().
        """
        s = identify(data, TREE_MAGIC)
        c = struct_parse(s.BF_Tree, BytesIO(data))
        n_nodes = c.n_nodes
        counts = np.frombuffer(c.class_counts, dtype=s.dtype_float64)
        tree = cls(
            np.frombuffer(c.feature, dtype=s.dtype_int32),
            np.frombuffer(c.threshold, dtype=s.dtype_float64),
            np.frombuffer(c.left, dtype=s.dtype_int32),
            np.frombuffer(c.right, dtype=s.dtype_int32),
            counts.reshape(n_nodes, c.n_classes),
            c.n_features, c.depth)
        stored = np.frombuffer(c.prediction, dtype=s.dtype_int32)
        format_assert(np.array_equal(stored, tree.prediction),
            'leaf predictions do not match class counts')
        return tree

    def __eq__(self, other):
        return isinstance(other, Tree) and self.serialize() == other.serialize()

    def __ne__(self, other):
        return not self == other

    __hash__ = None


def grow_tree(ds, rows, params):
    """ Grow a tree on the weighted multiset `rows` of ds.

        Growth is best-first: every leaf that can still be split carries its
        best split, and the leaf whose split removes the most weighted
        impurity (node weight times Gini decrease) is expanded next, until
        the leaf budget is spent or no leaf can be split. Ties go to the
        lowest node id. Growing on integer weights gives the same tree as
        growing on the replicated rows with the same seed.
    """
    tree_assert(len(rows.indices) > 0, 'cannot grow a tree on empty rows')
    params = resolve_tree_params(params, ds.n_features)
    X = ds.features[rows.indices]
    y = ds.labels[rows.indices]
    w = np.asarray(rows.weights, dtype=np.float64)
    return _TreeBuilder(X, y, w, ds.n_classes, params).build()


def predict_tree(tree, x):
    """ Route x from the root (left when x[feature] <= threshold) and return
        the class id of the leaf reached.
    """
    node = 0
    while tree.feature[node] >= 0:
        if x[tree.feature[node]] <= tree.threshold[node]:
            node = tree.left[node]
        else:
            node = tree.right[node]
    return int(tree.prediction[node])


def dump_tree(tree, column_names=None, class_names=None):
    """ Human-readable, indented dump of tree, one node per line in preorder.
    """
    lines = []
    stack = [(0, 0)]
    while stack:
        node, indent = stack.pop()
        counts = ' '.join('%g' % c for c in tree.class_counts[node])
        pad = '  ' * indent
        if tree.feature[node] < 0:
            label = tree.prediction[node]
            if class_names is not None:
                label = class_names[label]
            lines.append('%s[%d] leaf -> %s  (counts %s)' % (
                pad, node, label, counts))
            continue
        f = tree.feature[node]
        name = column_names[f] if column_names is not None else 'X%d' % (f + 1)
        lines.append('%s[%d] %s <= %.6g  (counts %s)' % (
            pad, node, name, tree.threshold[node], counts))
        stack.append((tree.right[node], indent + 1))
        stack.append((tree.left[node], indent + 1))
    return '\n'.join(lines)


#------------------------- PRIVATE -------------------------

class _TreeBuilder(object):
    """ Best-first growth state: node arrays under construction and a heap of
        expandable leaves keyed by (-weighted decrease, node id).
    """
    def __init__(self, X, y, w, n_classes, params):
        self.X = X
        self.y = y
        self.w = w
        self.n_classes = n_classes
        self.params = params
        self.rng = np.random.default_rng(params.seed)
        self.all_features = np.arange(X.shape[1])

        self.feature = []
        self.threshold = []
        self.left = []
        self.right = []
        self.counts = []
        self.depths = []
        self.frontier = []

    def build(self):
        self._add_node(np.arange(len(self.y)), 0)
        n_leaves = 1
        max_leaves = self.params.max_leaves
        while self.frontier and (max_leaves == 0 or n_leaves < max_leaves):
            _, node_id, candidate, members = heapq.heappop(self.frontier)
            go_left = self.X[members, candidate.feature] <= candidate.threshold
            self.feature[node_id] = candidate.feature
            self.threshold[node_id] = candidate.threshold
            depth = self.depths[node_id] + 1
            self.left[node_id] = self._add_node(members[go_left], depth)
            self.right[node_id] = self._add_node(members[~go_left], depth)
            n_leaves += 1
        return Tree(self.feature, self.threshold, self.left, self.right,
                    np.array(self.counts).reshape(-1, self.n_classes),
                    self.X.shape[1], max(self.depths))

    def _add_node(self, members, depth):
        counts = np.bincount(self.y[members], weights=self.w[members],
                             minlength=self.n_classes)
        node_id = len(self.feature)
        self.feature.append(-1)
        self.threshold.append(0.0)
        self.left.append(-1)
        self.right.append(-1)
        self.counts.append(counts)
        self.depths.append(depth)

        if self._expandable(counts, depth):
            candidate = self._find_split(members)
            if candidate is not None:
                priority = counts.sum() * candidate.impurity_decrease
                heapq.heappush(self.frontier,
                               (-priority, node_id, candidate, members))
        return node_id

    def _expandable(self, counts, depth):
        p = self.params
        if counts.sum() < p.min_node_weight:
            return False
        if np.count_nonzero(counts) < 2:
            return False
        return p.max_depth == 0 or depth < p.max_depth

    def _find_split(self, members):
        X = self.X[members]
        y = self.y[members]
        w = self.w[members]
        if self.params.split_mode == 'ert':
            return node_split_ert(X, y, w, self.n_classes, self.all_features,
                                  self.params.S, self.rng)
        subset = np.sort(self.rng.choice(len(self.all_features),
                                         size=self.params.mtry, replace=False))
        return node_split_exhaustive(X, y, w, self.n_classes, subset)
