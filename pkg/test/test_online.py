#-------------------------------------------------------------------------------
# bigforest tests
#
# This code is in the public domain
#-------------------------------------------------------------------------------
import io
import os
import tempfile
import unittest

import numpy as np

from bigforest.common.exceptions import (
    ConfigError, DataError, EstimateUnavailableError, FormatError)
from bigforest.online.forest import (
    OnlineForestParams, onrf_init, onrf_update, onrf_predict,
    onrf_oob_estimate)
from bigforest.online.checkpoint import (
    read_checkpoint, checkpoint_to_bytes, save_checkpoint, load_checkpoint)


RANGES = [(-1.0, 1.0), (-1.0, 1.0)]


def separable_stream(n, seed):
    """ Points uniform in [-1, 1]^2, labelled by the sign of the first
        coordinate.
    """
    rng = np.random.default_rng(seed)
    X = rng.uniform(-1, 1, size=(n, 2))
    return X, (X[:, 0] > 0).astype(np.int64)


def feed(forest, X, y):
    for x, label in zip(X, y):
        onrf_update(forest, x, label)


def iter_leaves(forest):
    for tree in forest.trees:
        for node in tree.nodes:
            if node.is_leaf:
                yield node


class TestOnlineInit(unittest.TestCase):
    def test_fresh_forest(self):
        f = onrf_init(OnlineForestParams(Q=4, S=6, seed=1), RANGES)
        self.assertEqual(len(f), 4)
        self.assertEqual(f.n_leaves(), 4)
        self.assertEqual(f.max_depth(), 0)
        for leaf in iter_leaves(f):
            self.assertEqual(len(leaf.features), 6)
            self.assertTrue(np.all((leaf.features >= 0) &
                                   (leaf.features < 2)))
            self.assertTrue(np.all((leaf.thresholds >= -1) &
                                   (leaf.thresholds <= 1)))
        # empty leaves predict the lowest class
        self.assertEqual(onrf_predict(f, [0.5, 0.5]), 0)
        with self.assertRaises(EstimateUnavailableError):
            onrf_oob_estimate(f)

    def test_seeded(self):
        X, y = separable_stream(300, 0)
        a = onrf_init(OnlineForestParams(Q=3, seed=7), RANGES)
        b = onrf_init(OnlineForestParams(Q=3, seed=7), RANGES)
        feed(a, X, y)
        feed(b, X, y)
        self.assertEqual(checkpoint_to_bytes(a), checkpoint_to_bytes(b))

    def test_validation(self):
        with self.assertRaises(ConfigError):
            onrf_init(OnlineForestParams(Q=2, alpha=1.0), RANGES)
        with self.assertRaises(ConfigError):
            onrf_init(OnlineForestParams(Q=2, rho=1.0), RANGES)
        with self.assertRaises(ConfigError):
            onrf_init(OnlineForestParams(Q=0), RANGES)
        with self.assertRaises(DataError):
            onrf_init(OnlineForestParams(Q=2), [(1.0, 1.0)])
        with self.assertRaises(DataError):
            onrf_init(OnlineForestParams(Q=2), [])
        f = onrf_init(OnlineForestParams(Q=2), RANGES)
        with self.assertRaises(DataError):
            onrf_update(f, [0.0, 0.0], 2)
        with self.assertRaises(DataError):
            onrf_update(f, [0.0], 0)
        with self.assertRaises(DataError):
            onrf_update(f, [0.0, 0.0], 0, counts=[1, -1])
        with self.assertRaises(DataError):
            onrf_update(f, [0.0, 0.0], 0, counts=[1])


class TestOnlineUpdate(unittest.TestCase):
    def test_zero_counts_leave_trees_unchanged(self):
        f = onrf_init(OnlineForestParams(Q=3, seed=2), RANGES)
        before = [checkpoint_to_bytes(f)]
        onrf_update(f, [0.2, 0.3], 1, counts=[0, 0, 0])
        for leaf in iter_leaves(f):
            self.assertEqual(leaf.counts.sum(), 0)
            self.assertEqual(leaf.structure_counts.sum(), 0)
        self.assertEqual(f.n_updates, 1)
        self.assertEqual(f.n_zero_draws, 3)
        self.assertEqual(f.oob_events, 1)
        # fresh trees vote 0, the label is 1
        self.assertEqual(f.oob_errors, 1)
        self.assertNotEqual(before[0], checkpoint_to_bytes(f))

    def test_repeated_point_never_splits(self):
        f = onrf_init(OnlineForestParams(Q=3, alpha=2.0, beta=0.0, seed=3),
                      RANGES)
        for _ in range(300):
            onrf_update(f, [0.1, -0.4], 1)
        self.assertEqual(f.n_leaves(), 3)
        self.assertEqual(onrf_predict(f, [0.1, -0.4]), 1)

    def test_separable_stream(self):
        params = OnlineForestParams(Q=10, S=10, max_depth=10, alpha=20.0,
                                    beta=0.01, seed=4)
        f = onrf_init(params, RANGES)
        X, y = separable_stream(3000, 5)
        feed(f, X, y)
        self.assertGreater(f.n_leaves(), 10)
        self.assertLessEqual(f.max_depth(), 10)
        Xt, yt = separable_stream(500, 6)
        accuracy = np.mean(f.predict_batch(Xt) == yt)
        self.assertGreater(accuracy, 0.8)

        estimate = onrf_oob_estimate(f)
        self.assertGreater(estimate.n_evaluated, 0)
        self.assertEqual(estimate.n_evaluated + estimate.n_excluded, 3000)
        self.assertTrue(0.0 <= estimate.rate <= 1.0)
        summary = f.oob_summary()
        self.assertEqual(summary.n_draws, 30000)
        self.assertAlmostEqual(summary.zero_draw_fraction, np.exp(-1),
                               delta=0.03)

    def test_candidate_statistics(self):
        f = onrf_init(OnlineForestParams(Q=4, S=5, max_depth=4, alpha=10.0,
                                         seed=8), RANGES)
        X, y = separable_stream(800, 9)
        feed(f, X, y)
        for leaf in iter_leaves(f):
            totals = leaf.left_counts + leaf.right_counts
            self.assertTrue(np.all(totals == totals[0]))
            self.assertTrue(np.all(leaf.structure_counts >=
                                   leaf.accumulated()))
            self.assertTrue(np.array_equal(leaf.counts,
                                           leaf.structure_counts))

    def test_depth_limit(self):
        X, y = separable_stream(1000, 10)
        f = onrf_init(OnlineForestParams(Q=3, max_depth=2, alpha=5.0,
                                         seed=11), RANGES)
        feed(f, X, y)
        self.assertLessEqual(f.max_depth(), 2)
        f = onrf_init(OnlineForestParams(Q=3, max_depth=0, alpha=5.0,
                                         seed=11), RANGES)
        feed(f, X, y)
        self.assertEqual(f.n_leaves(), 3)

    def test_no_oob_events(self):
        f = onrf_init(OnlineForestParams(Q=2), RANGES)
        for _ in range(10):
            onrf_update(f, [0.0, 0.0], 0, counts=[1, 2])
        with self.assertRaises(EstimateUnavailableError):
            onrf_oob_estimate(f)

    def test_single_tree_always_oob(self):
        f = onrf_init(OnlineForestParams(Q=1), RANGES)
        for _ in range(5):
            onrf_update(f, [0.5, 0.5], 1, counts=[0])
        estimate = onrf_oob_estimate(f)
        self.assertEqual(estimate.rate, 1.0)
        self.assertEqual(estimate.n_evaluated, 5)
        self.assertEqual(estimate.n_predictions, 5)


class TestTwoStream(unittest.TestCase):
    def test_streams_are_separate(self):
        f = onrf_init(OnlineForestParams(Q=3, rho=0.5, seed=12), RANGES)
        for _ in range(200):
            onrf_update(f, [0.3, 0.3], 0)
        self.assertEqual(f.n_draws, 0)
        for tree in f.trees:
            (root,) = tree.nodes
            self.assertEqual(root.counts[0] + root.structure_counts[0], 200)
            self.assertGreater(root.counts[0], 0)
            self.assertGreater(root.structure_counts[0], 0)
        with self.assertRaises(EstimateUnavailableError):
            onrf_oob_estimate(f)

    def test_children_start_without_estimation_counts(self):
        f = onrf_init(OnlineForestParams(Q=1, rho=0.5, alpha=10.0,
                                         seed=13), RANGES)
        tree = f.trees[0]
        X, y = separable_stream(400, 14)
        for x, label in zip(X, y):
            onrf_update(f, x, label)
            if not tree.nodes[0].is_leaf:
                break
        self.assertFalse(tree.nodes[0].is_leaf)
        for child in tree.nodes[1:]:
            self.assertEqual(child.counts.sum(), 0)
            self.assertEqual(child.accumulated().sum(), 0)
        seeded = sum(child.structure_counts.sum() for child in tree.nodes[1:])
        self.assertGreaterEqual(seeded, 10)


class TestCheckpoint(unittest.TestCase):
    def _continue_identically(self, params, little_endian=True):
        X, y = separable_stream(600, 20)
        f = onrf_init(params, RANGES)
        feed(f, X[:300], y[:300])
        data = checkpoint_to_bytes(f, little_endian)
        restored = read_checkpoint(io.BytesIO(data))
        self.assertEqual(restored.params, f.params)
        feed(f, X[300:], y[300:])
        feed(restored, X[300:], y[300:])
        self.assertEqual(checkpoint_to_bytes(restored),
                         checkpoint_to_bytes(f))

    def test_poisson_mode(self):
        self._continue_identically(OnlineForestParams(Q=4, alpha=10.0,
                                                      seed=21))

    def test_two_stream_mode(self):
        self._continue_identically(OnlineForestParams(Q=3, alpha=10.0,
                                                      rho=0.3, seed=22))

    def test_big_endian(self):
        self._continue_identically(OnlineForestParams(Q=2, alpha=10.0,
                                                      seed=23),
                                   little_endian=False)

    def test_path_and_corruption(self):
        f = onrf_init(OnlineForestParams(Q=2, seed=24), RANGES)
        feed(f, *separable_stream(100, 25))
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'online.bfon')
            save_checkpoint(f, path)
            restored = load_checkpoint(path)
        self.assertEqual(checkpoint_to_bytes(restored),
                         checkpoint_to_bytes(f))
        data = checkpoint_to_bytes(f)
        with self.assertRaises(FormatError):
            read_checkpoint(io.BytesIO(b'BFRF' + data[4:]))
        with self.assertRaises(FormatError):
            read_checkpoint(io.BytesIO(data[:len(data) - 3]))


if __name__ == '__main__':
    unittest.main()
