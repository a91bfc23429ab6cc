#-------------------------------------------------------------------------------
# bigforest: common/utils.py
#
# Miscellaneous utilities for bigforest
#
# This code is in the public domain
#-------------------------------------------------------------------------------
import numbers

import numpy as np
from construct import ConstructError

from .exceptions import (
    ForestError, DataError, PlanError, TreeError, FormatError, ConfigError)


def struct_parse(struct, stream, stream_pos=None):
    """ Convenience function for using the given struct to parse a stream.
        If stream_pos is provided, the stream is seeked to this position before
        the parsing is done. Otherwise, the current position of the stream is
        used.
        Wraps the error thrown by construct with FormatError.
    """
    try:
        if stream_pos is not None:
            stream.seek(stream_pos)
        return struct.parse_stream(stream)
    except ConstructError as e:
        raise FormatError(str(e))


def struct_build(struct, obj, stream):
    """ Build obj with the given struct directly into stream. Wraps the error
        thrown by construct with FormatError.
    """
    try:
        struct.build_stream(obj, stream)
    except ConstructError as e:
        raise FormatError(str(e))


def data_assert(cond, msg=''):
    """ Assert that cond is True, otherwise raise DataError(msg)
    """
    _assert_with_exception(cond, msg, DataError)


def plan_assert(cond, msg=''):
    """ Assert that cond is True, otherwise raise PlanError(msg)
    """
    _assert_with_exception(cond, msg, PlanError)


def tree_assert(cond, msg=''):
    """ Assert that cond is True, otherwise raise TreeError(msg)
    """
    _assert_with_exception(cond, msg, TreeError)


def format_assert(cond, msg=''):
    """ Assert that cond is True, otherwise raise FormatError(msg)
    """
    _assert_with_exception(cond, msg, FormatError)


def config_assert(cond, msg=''):
    """ Assert that cond is True, otherwise raise ConfigError(msg)
    """
    _assert_with_exception(cond, msg, ConfigError)


def forest_assert(cond, msg=''):
    """ Assert that cond is True, otherwise raise ForestError(msg)
    """
    _assert_with_exception(cond, msg, ForestError)


def as_generator(seed):
    """ Turn seed into a numpy Generator. seed may be None, an integer, a
        SeedSequence or an existing Generator (returned unchanged).
    """
    if isinstance(seed, np.random.Generator):
        return seed
    if seed is None or isinstance(seed, (numbers.Integral,
                                         np.random.SeedSequence)):
        return np.random.default_rng(seed)
    raise ValueError('%r cannot be used to seed a Generator' % (seed,))


def derive_seed(master_seed, *keys):
    """ Deterministically derive a 64-bit seed from master_seed and a path of
        non-negative integer keys, e.g. derive_seed(seed, STREAM, tree_id).

        The derivation is numpy's SeedSequence hashing with the keys as
        spawn_key, so seeds of distinct key paths are independent and the
        result does not depend on the order in which paths are requested.
    """
    ss = np.random.SeedSequence(int(master_seed), spawn_key=tuple(
        int(k) for k in keys))
    return int(ss.generate_state(1, np.uint64)[0])


def derive_generator(master_seed, *keys):
    """ A Generator seeded with derive_seed(master_seed, *keys).
    """
    return np.random.default_rng(derive_seed(master_seed, *keys))


def sample_without_replacement(n, m, rng):
    """ m distinct indices out of range(n), uniformly, as an int64 array.
    """
    if m == 0:
        return np.empty(0, dtype=np.int64)
    return rng.choice(n, size=m, replace=False).astype(np.int64)


def vote_argmax(votes):
    """ Index of the largest entry along the last axis of votes. Ties break
        toward the lowest index (the lowest class id).
    """
    return np.argmax(votes, axis=-1)

#------------------------- PRIVATE -------------------------

def _assert_with_exception(cond, msg, exception_type):
    if not cond:
        raise exception_type(msg)
