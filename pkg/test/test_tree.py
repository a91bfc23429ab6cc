#-------------------------------------------------------------------------------
# bigforest tests
#
# This code is in the public domain
#-------------------------------------------------------------------------------
import unittest

import numpy as np

from bigforest.common.exceptions import TreeError, FormatError
from bigforest.data.dataset import Dataset
from bigforest.data.simulate import SimulationSpec, simulate_weston
from bigforest.tree.rows import (
    WeightedRows, make_weighted_rows, rows_from_counts, replicate)
from bigforest.tree.splitter import (
    gini_impurity, split_decrease, best_split_exhaustive, best_split_ert,
    MIN_IMPURITY_DECREASE)
from bigforest.tree.tree import (
    Tree, TreeParams, grow_tree, predict_tree, dump_tree, default_mtry)


def brute_force_split(ds, rows, features):
    """ Best split by plain enumeration: every feature, every midpoint between
        consecutive distinct values, class counts recomputed from scratch.
    """
    X = ds.features[rows.indices]
    y = ds.labels[rows.indices]
    w = rows.weights
    parent = np.array([w[y == c].sum() for c in range(ds.n_classes)])
    best = None
    for f in sorted(features):
        values = np.unique(X[:, f])
        for lo, hi in zip(values[:-1], values[1:]):
            threshold = (lo + hi) / 2.0
            if not threshold < hi:
                threshold = lo
            left = X[:, f] <= threshold
            left_counts = np.array([w[left & (y == c)].sum()
                                    for c in range(ds.n_classes)])
            d = float(split_decrease(parent, left_counts))
            if d <= MIN_IMPURITY_DECREASE:
                continue
            if best is None or d > best[2]:
                best = (f, threshold, d)
    return best


def small_dataset(seed, n=None, p=None, n_classes=2):
    rng = np.random.default_rng(seed)
    n = n if n is not None else int(rng.integers(2, 120))
    p = p if p is not None else int(rng.integers(1, 8))
    # few distinct values, so ties and duplicates are common
    X = rng.integers(0, 6, size=(n, p)).astype(float) / 2.0
    y = rng.integers(0, n_classes, size=n)
    return Dataset(X, y, n_classes=n_classes)


class TestGini(unittest.TestCase):
    def test_values(self):
        self.assertEqual(float(gini_impurity([5, 0])), 0.0)
        self.assertAlmostEqual(float(gini_impurity([1, 1])), 0.5)
        self.assertAlmostEqual(float(gini_impurity([1, 3])), 2 * 0.25 * 0.75)
        self.assertEqual(float(gini_impurity([0, 0])), 0.0)

    def test_decrease(self):
        self.assertAlmostEqual(float(split_decrease([2, 2], [2, 0])), 0.5)
        self.assertAlmostEqual(float(split_decrease([2, 2], [1, 1])), 0.0)


class TestRows(unittest.TestCase):
    def test_make_and_replicate(self):
        rows = make_weighted_rows([3, 1], [2, 1])
        ids, unit = replicate(rows)
        self.assertEqual(list(ids), [3, 3, 1])
        self.assertEqual(list(unit), [1.0, 1.0, 1.0])
        with self.assertRaises(TreeError):
            make_weighted_rows([1, 1])
        with self.assertRaises(TreeError):
            make_weighted_rows([1], [0])

    def test_rows_from_counts(self):
        rows = rows_from_counts(np.arange(4), [0, 2, 0, 1])
        self.assertEqual(list(rows.indices), [1, 3])
        self.assertEqual(list(rows.weights), [2.0, 1.0])


class TestExhaustiveSplit(unittest.TestCase):
    def test_matches_enumeration(self):
        for seed in range(200):
            ds = small_dataset(seed)
            rng = np.random.default_rng(1000 + seed)
            weights = rng.integers(1, 4, size=len(ds)).astype(float)
            rows = WeightedRows(np.arange(len(ds)), weights)
            features = list(range(ds.n_features))
            found = best_split_exhaustive(ds, rows, features)
            expected = brute_force_split(ds, rows, features)
            if expected is None:
                self.assertIsNone(found, 'seed %d' % seed)
                continue
            self.assertEqual(found.feature, expected[0], 'seed %d' % seed)
            self.assertEqual(found.threshold, expected[1], 'seed %d' % seed)
            self.assertAlmostEqual(found.impurity_decrease, expected[2],
                                   places=12)

    def test_pure_node(self):
        ds = Dataset([[1.0], [2.0]], [1, 1], n_classes=2)
        rows = WeightedRows(np.arange(2), np.ones(2))
        self.assertIsNone(best_split_exhaustive(ds, rows, [0]))

    def test_separable(self):
        ds = Dataset([[0.0, 5.0], [1.0, 5.0], [2.0, 5.0], [3.0, 5.0]],
                     [0, 0, 1, 1])
        rows = WeightedRows(np.arange(4), np.ones(4))
        split = best_split_exhaustive(ds, rows, [0, 1])
        self.assertEqual((split.feature, split.threshold), (0, 1.5))
        self.assertAlmostEqual(split.impurity_decrease, 0.5)


class TestERTSplit(unittest.TestCase):
    def test_thresholds_within_node_range(self):
        ds = small_dataset(3, n=80, p=4)
        rows = WeightedRows(np.arange(len(ds)), np.ones(len(ds)))
        for seed in range(20):
            split = best_split_ert(ds, rows, 5, np.random.default_rng(seed))
            if split is None:
                continue
            column = ds.features[:, split.feature]
            self.assertTrue(column.min() <= split.threshold <= column.max())
            self.assertGreater(split.impurity_decrease, 0)

    def test_pure_node_returns_none(self):
        ds = Dataset([[1.0], [2.0]], [0, 0], n_classes=2)
        rows = WeightedRows(np.arange(2), np.ones(2))
        self.assertIsNone(best_split_ert(ds, rows, 3,
                                         np.random.default_rng(0)))

    def four_rows(self):
        ds = Dataset([[0.1], [0.2], [0.8], [0.9]], [0, 0, 1, 1], n_classes=2)
        return ds, WeightedRows(np.arange(4), np.ones(4))

    def test_single_candidate_is_the_drawn_pair(self):
        ds, rows = self.four_rows()
        for seed in range(50):
            # same draws as the splitter: feature pick, then uniform position
            rng = np.random.default_rng(seed)
            rng.integers(1, size=1)
            threshold = 0.1 + rng.random(1)[0] * (0.9 - 0.1)
            split = best_split_ert(ds, rows, 1, np.random.default_rng(seed))
            self.assertEqual(split.feature, 0)
            self.assertAlmostEqual(split.threshold, threshold, places=12)
            n_left = int(np.sum(ds.features[:, 0] <= threshold))
            left = [min(n_left, 2), max(n_left - 2, 0)]
            self.assertAlmostEqual(split.impurity_decrease,
                                   float(split_decrease([2, 2], left)))

    def test_many_candidates_reach_exhaustive_optimum(self):
        ds, rows = self.four_rows()
        best = best_split_exhaustive(ds, rows, [0])
        self.assertEqual(best.impurity_decrease, 0.5)
        for seed in range(100):
            split = best_split_ert(ds, rows, 1000,
                                   np.random.default_rng(seed))
            self.assertAlmostEqual(split.impurity_decrease,
                                   best.impurity_decrease, delta=1e-9)
            self.assertTrue(0.2 <= split.threshold < 0.8)


class TestGrowTree(unittest.TestCase):
    def setUp(self):
        self.ds = simulate_weston(SimulationSpec(n=600, seed=11))
        self.all_rows = WeightedRows(np.arange(len(self.ds)),
                                     np.ones(len(self.ds)))

    def test_pure_data_gives_single_leaf(self):
        ds = Dataset([[1.0], [2.0], [3.0]], [1, 1, 1], n_classes=2)
        tree = grow_tree(ds, WeightedRows(np.arange(3), np.ones(3)),
                         TreeParams())
        self.assertEqual(tree.n_nodes, 1)
        self.assertEqual(tree.n_leaves, 1)
        self.assertEqual(predict_tree(tree, np.array([9.0])), 1)

    def test_empty_rows(self):
        with self.assertRaises(TreeError):
            grow_tree(self.ds, WeightedRows(np.empty(0, np.int64),
                                            np.empty(0)), TreeParams())

    def test_invalid_params(self):
        with self.assertRaises(TreeError):
            grow_tree(self.ds, self.all_rows, TreeParams(mtry=8))
        with self.assertRaises(TreeError):
            grow_tree(self.ds, self.all_rows, TreeParams(split_mode='cart'))

    def test_leaf_budget(self):
        for max_leaves in (1, 2, 7, 30):
            tree = grow_tree(self.ds, self.all_rows,
                             TreeParams(max_leaves=max_leaves, seed=1))
            self.assertLessEqual(tree.n_leaves, max_leaves)
            self.assertEqual(tree.n_nodes, 2 * tree.n_leaves - 1)
        # the second leaf comes from the best root split
        tree = grow_tree(self.ds, self.all_rows,
                         TreeParams(mtry=7, max_leaves=2))
        root = best_split_exhaustive(self.ds, self.all_rows, range(7))
        self.assertEqual((tree.feature[0], tree.threshold[0]),
                         (root.feature, root.threshold))

    def test_depth_budget(self):
        tree = grow_tree(self.ds, self.all_rows, TreeParams(max_depth=3))
        self.assertLessEqual(tree.depth, 3)

    def test_fully_developed_tree_fits_training_data(self):
        tree = grow_tree(self.ds, self.all_rows, TreeParams(mtry=7,
                                                            min_node_weight=0))
        predicted = tree.predict_batch(self.ds.features)
        # only rows with identical features but different labels can fail
        self.assertTrue(np.array_equal(predicted, self.ds.labels))

    def test_weights_equal_replication(self):
        rng = np.random.default_rng(5)
        counts = np.bincount(rng.integers(0, len(self.ds), len(self.ds)),
                             minlength=len(self.ds))
        rows = rows_from_counts(np.arange(len(self.ds)), counts)
        ids, unit = replicate(rows)
        replicated = self.ds.take(ids)
        for params in (TreeParams(max_leaves=20, seed=3),
                       TreeParams(split_mode='ert', S=5, seed=3)):
            weighted_tree = grow_tree(self.ds, rows, params)
            replicated_tree = grow_tree(
                replicated, WeightedRows(np.arange(len(ids)), unit), params)
            self.assertEqual(weighted_tree, replicated_tree)

    def test_same_seed_same_tree(self):
        params = TreeParams(max_leaves=50, seed=99)
        self.assertEqual(grow_tree(self.ds, self.all_rows, params),
                         grow_tree(self.ds, self.all_rows, params))

    def test_predict_batch_matches_predict(self):
        tree = grow_tree(self.ds, self.all_rows, TreeParams(max_leaves=40))
        batch = tree.predict_batch(self.ds.features)
        single = [predict_tree(tree, x) for x in self.ds.features]
        self.assertEqual(list(batch), single)
        self.assertEqual(len(tree.predict_batch(np.empty((0, 7)))), 0)

    def test_used_features(self):
        tree = grow_tree(self.ds, self.all_rows, TreeParams(max_leaves=4))
        used = set(tree.used_features())
        self.assertEqual(used, set(tree.feature[tree.feature >= 0]))

    def test_default_mtry(self):
        self.assertEqual(default_mtry(7), 2)
        self.assertEqual(default_mtry(1), 1)
        self.assertEqual(default_mtry(16), 4)


class TestTreeSerialization(unittest.TestCase):
    def setUp(self):
        ds = simulate_weston(SimulationSpec(n=300, seed=12))
        self.tree = grow_tree(ds, WeightedRows(np.arange(300), np.ones(300)),
                              TreeParams(max_leaves=25, seed=4))

    def test_round_trip_both_byte_orders(self):
        for little_endian in (True, False):
            blob = self.tree.serialize(little_endian)
            self.assertEqual(blob[:4], b'BFTR')
            tree = Tree.parse(blob)
            self.assertEqual(tree, self.tree)
            self.assertTrue(np.array_equal(tree.threshold,
                                           self.tree.threshold))

    def test_corrupt_blob(self):
        blob = self.tree.serialize()
        with self.assertRaises(FormatError):
            Tree.parse(blob[:40])
        with self.assertRaises(FormatError):
            Tree.parse(b'XXXX' + blob[4:])

    def test_dump(self):
        text = dump_tree(self.tree, ['a%d' % j for j in range(7)])
        lines = text.splitlines()
        self.assertEqual(len(lines), self.tree.n_nodes)
        self.assertTrue(lines[0].startswith('[0] a'))
        self.assertEqual(sum('leaf ->' in line for line in lines),
                         self.tree.n_leaves)


if __name__ == '__main__':
    unittest.main()
