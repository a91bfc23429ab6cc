#-------------------------------------------------------------------------------
# bigforest: data/dataset.py
#
# Dataset - an immutable, in-memory learning set
#
# This code is in the public domain
#-------------------------------------------------------------------------------
import numpy as np

from ..common.utils import (
    data_assert, as_generator, sample_without_replacement)


class Dataset(object):
    """ A learning set L = {(x_1, y_1), ..., (x_n, y_n)} held in memory.

        All arrays are copied on construction and made read-only, so a
        Dataset can be shared freely between concurrent workers.

        Accessible attributes:

            features:
                float64 array of shape (n, p); all values are finite

            labels:
                int64 array of n class ids in range(n_classes)

            n_classes:
                number of classes C

            submodel_tags:
                None, or an int8 array of n tags in {1, 2} recording the
                simulation submodel that generated each row

            column_names:
                tuple of p strings

            class_names:
                tuple of C strings naming the class ids
    """
    def __init__(self, features, labels, n_classes=None, submodel_tags=None,
                 column_names=None, class_names=None):
        features = np.array(features, dtype=np.float64)
        if features.ndim == 1 and features.size == 0:
            features = features.reshape(0, 0)
        data_assert(features.ndim == 2,
            'features must be a matrix, got %d dimensions' % features.ndim)
        labels = np.array(labels, dtype=np.int64).reshape(-1)
        n, p = features.shape
        data_assert(len(labels) == n,
            'features have %d rows but there are %d labels' % (n, len(labels)))
        data_assert(np.all(np.isfinite(features)),
            'features contain non-finite values')

        if n_classes is None:
            n_classes = int(labels.max()) + 1 if n else 1
        data_assert(n == 0 or (labels.min() >= 0 and labels.max() < n_classes),
            'labels must lie in range(%d)' % n_classes)

        if submodel_tags is not None:
            submodel_tags = np.array(submodel_tags, dtype=np.int8).reshape(-1)
            data_assert(len(submodel_tags) == n,
                'expected %d submodel tags, got %d' % (n, len(submodel_tags)))
            data_assert(np.all((submodel_tags == 1) | (submodel_tags == 2)),
                'submodel tags must be 1 or 2')
            submodel_tags.flags.writeable = False

        if column_names is None:
            column_names = ['X%d' % (j + 1) for j in range(p)]
        column_names = tuple(str(c) for c in column_names)
        data_assert(len(column_names) == p,
            'expected %d column names, got %d' % (p, len(column_names)))

        if class_names is None:
            class_names = [str(c) for c in range(n_classes)]
        class_names = tuple(str(c) for c in class_names)
        data_assert(len(class_names) == n_classes,
            'expected %d class names, got %d' % (n_classes, len(class_names)))

        features.flags.writeable = False
        labels.flags.writeable = False
        self.features = features
        self.labels = labels
        self.n_classes = int(n_classes)
        self.submodel_tags = submodel_tags
        self.column_names = column_names
        self.class_names = class_names

    def __len__(self):
        return self.features.shape[0]

    @property
    def n_features(self):
        return self.features.shape[1]

    def take(self, indices):
        """ A new Dataset made of the given rows, in the given order.
        """
        indices = np.asarray(indices, dtype=np.int64)
        tags = None
        if self.submodel_tags is not None:
            tags = self.submodel_tags[indices]
        return Dataset(
            self.features[indices], self.labels[indices],
            n_classes=self.n_classes,
            submodel_tags=tags,
            column_names=self.column_names,
            class_names=self.class_names)

    def equals(self, other):
        """ True if other holds exactly the same rows, tags and names.
        """
        if self.column_names != other.column_names:
            return False
        if (self.n_classes, self.class_names) != (
                other.n_classes, other.class_names):
            return False
        if (self.submodel_tags is None) != (other.submodel_tags is None):
            return False
        if self.submodel_tags is not None and not np.array_equal(
                self.submodel_tags, other.submodel_tags):
            return False
        return (np.array_equal(self.features, other.features) and
                np.array_equal(self.labels, other.labels))

    def class_frequencies(self):
        """ Fraction of rows in each class, as an array of n_classes floats.
        """
        if len(self) == 0:
            return np.zeros(self.n_classes)
        return np.bincount(self.labels, minlength=self.n_classes) / len(self)

    def feature_ranges(self):
        """ Per-feature observed (min, max) as two arrays.
        """
        data_assert(len(self) > 0, 'an empty dataset has no feature ranges')
        return self.features.min(axis=0), self.features.max(axis=0)


def subsample(ds, m, seed):
    """ Draw m distinct row indices out of the n rows of ds, uniformly without
        replacement. Deterministic for a fixed seed (an int or a Generator).
    """
    n = len(ds)
    data_assert(0 <= m <= n,
        'cannot subsample %d rows out of %d without replacement' % (m, n))
    return sample_without_replacement(n, m, as_generator(seed))
