#-------------------------------------------------------------------------------
# bigforest: tree/splitter.py
#
# Node split search: exhaustive weighted-Gini search over a feature subset,
# and the randomized (extremely randomized trees) search over S candidates
#
# This code is in the public domain
#-------------------------------------------------------------------------------
from collections import namedtuple

import numpy as np

# feature: column index
# threshold: rows with x[feature] <= threshold go left
# impurity_decrease: Gini(node) - sum over children of weight share * Gini
#
SplitCandidate = namedtuple('SplitCandidate',
    'feature threshold impurity_decrease')

# Decreases at or below this are treated as zero (floating noise).
MIN_IMPURITY_DECREASE = 1e-12


def gini_impurity(counts):
    """ Gini index 1 - sum_c p_c^2 of (weighted) class counts along the last
        axis; 2p(1-p) for two classes. Empty count vectors have impurity 0.
    """
    counts = np.asarray(counts, dtype=np.float64)
    total = counts.sum(axis=-1)
    safe = np.where(total > 0, total, 1.0)
    p = counts / safe[..., None]
    return np.where(total > 0, 1.0 - np.sum(p * p, axis=-1), 0.0)


def split_decrease(parent_counts, left_counts):
    """ Weighted Gini decrease of splitting parent_counts into left_counts and
        the rest. left_counts may carry leading axes (one row per candidate).
    """
    parent_counts = np.asarray(parent_counts, dtype=np.float64)
    left_counts = np.asarray(left_counts, dtype=np.float64)
    right_counts = np.maximum(parent_counts - left_counts, 0.0)
    total = parent_counts.sum()
    if total <= 0:
        return np.zeros(left_counts.shape[:-1])
    wl = left_counts.sum(axis=-1)
    wr = right_counts.sum(axis=-1)
    return (gini_impurity(parent_counts)
            - (wl / total) * gini_impurity(left_counts)
            - (wr / total) * gini_impurity(right_counts))


def best_split_exhaustive(ds, rows, feature_subset):
    """ Best split of the node holding `rows` (WeightedRows into ds) among
        all midpoints between consecutive distinct values of the features in
        feature_subset. Returns a SplitCandidate or None when no split has a
        positive decrease. Ties go to the lowest feature, then the lowest
        threshold.
    """
    X = ds.features[rows.indices]
    y = ds.labels[rows.indices]
    return node_split_exhaustive(X, y, rows.weights, ds.n_classes,
                                 feature_subset)


def best_split_ert(ds, rows, S, rng, features=None):
    """ Best of S randomly drawn (feature, threshold) pairs for the node
        holding `rows`: the feature is uniform over `features` (all columns
        by default), the threshold uniform over that feature's [min, max] in
        the node. Returns a SplitCandidate or None when every drawn pair has
        zero decrease.
    """
    X = ds.features[rows.indices]
    y = ds.labels[rows.indices]
    if features is None:
        features = np.arange(ds.n_features)
    return node_split_ert(X, y, rows.weights, ds.n_classes, features, S, rng)


def node_split_exhaustive(X, y, w, n_classes, features):
    """ best_split_exhaustive on node-local arrays: X holds the node rows,
        y their labels and w their weights.
    """
    weighted = _class_weights(y, w, n_classes)
    parent = weighted.sum(axis=0)
    if np.count_nonzero(parent) < 2:
        return None

    best = None
    for f in sorted(int(f) for f in features):
        x = X[:, f]
        order = np.argsort(x, kind='mergesort')
        xs = x[order]
        boundaries = np.flatnonzero(xs[:-1] < xs[1:])
        if not boundaries.size:
            continue
        left = np.cumsum(weighted[order], axis=0)[boundaries]
        decrease = split_decrease(parent, left)
        # argmax returns the first maximum: the lowest threshold
        i = int(np.argmax(decrease))
        if decrease[i] <= MIN_IMPURITY_DECREASE:
            continue
        if best is None or decrease[i] > best.impurity_decrease:
            lo, hi = xs[boundaries[i]], xs[boundaries[i] + 1]
            threshold = (lo + hi) / 2.0
            if not threshold < hi:
                threshold = lo
            best = SplitCandidate(f, float(threshold), float(decrease[i]))
    return best


def node_split_ert(X, y, w, n_classes, features, S, rng):
    """ best_split_ert on node-local arrays.
    """
    features = np.asarray(features, dtype=np.int64)
    weighted = _class_weights(y, w, n_classes)
    parent = weighted.sum(axis=0)
    # draws happen even for pure nodes, so the generator advances the same
    # way whatever the node content
    picks = rng.integers(len(features), size=S)
    u = rng.random(S)
    if np.count_nonzero(parent) < 2:
        return None

    lo = X[:, features].min(axis=0)
    hi = X[:, features].max(axis=0)
    chosen = features[picks]
    thresholds = lo[picks] + u * (hi[picks] - lo[picks])
    goes_left = X[:, chosen] <= thresholds
    left = goes_left.T.astype(np.float64) @ weighted
    decrease = split_decrease(parent, left)
    decrease[hi[picks] <= lo[picks]] = 0.0

    best = None
    for s in range(S):
        d = decrease[s]
        if d <= MIN_IMPURITY_DECREASE:
            continue
        key = (-d, int(chosen[s]), thresholds[s])
        if best is None or key < best[0]:
            best = (key, SplitCandidate(int(chosen[s]), float(thresholds[s]),
                                        float(d)))
    return None if best is None else best[1]


#------------------------- PRIVATE -------------------------

def _class_weights(y, w, n_classes):
    """ (m, n_classes) matrix holding each row's weight in its class column.
    """
    weighted = np.zeros((len(y), n_classes))
    weighted[np.arange(len(y)), y] = w
    return weighted
