#-------------------------------------------------------------------------------
# bigforest: online/checkpoint.py
#
# Reading and writing online forest checkpoints
#
# This code is in the public domain
#-------------------------------------------------------------------------------
import io
import json
import logging

import numpy as np

from ..common.structs import (
    BigForestStructs, identify, ONLINE_MAGIC, FORMAT_VERSION)
from ..common.utils import struct_parse, struct_build, format_assert
from .forest import OnlineForest, OnlineForestParams
from .tree import OnlineTree, OnlineLeaf, OnlineSplit


log = logging.getLogger('bigforest.online')


def write_checkpoint(forest, stream, little_endian=True):
    """ Write the complete state of forest (parameters, generator states,
        counters and every node) to stream.
    """
    s = BigForestStructs(little_endian=little_endian)
    s.create_basic_structs()
    s.create_online_structs(forest.n_classes, forest.n_features)
    p = forest.params
    struct_build(s.BF_Online_Header, dict(
        ident=dict(magic=ONLINE_MAGIC,
                   byte_order='BFDATA2LSB' if little_endian else 'BFDATA2MSB',
                   version=FORMAT_VERSION),
        n_features=forest.n_features,
        n_classes=forest.n_classes,
        params=dict(Q=p.Q, S=p.S, lam=float(p.lam), max_depth=p.max_depth,
                    alpha=float(p.alpha), beta=float(p.beta),
                    rho=float(p.rho) if p.rho is not None else 0.0,
                    seed=p.seed),
        range_lo=forest.range_lo.astype(s.dtype_float64).tobytes(),
        range_hi=forest.range_hi.astype(s.dtype_float64).tobytes(),
        rng_state=json.dumps([rng.bit_generator.state for rng in forest.rngs],
                             sort_keys=True),
        n_updates=forest.n_updates,
        n_draws=forest.n_draws,
        n_zero_draws=forest.n_zero_draws,
        oob_events=forest.oob_events,
        oob_errors=forest.oob_errors,
        tree_oob_events=forest.tree_oob_events.astype(
            s.dtype_int64).tobytes(),
        tree_oob_errors=forest.tree_oob_errors.astype(
            s.dtype_int64).tobytes()), stream)

    for tree in forest.trees:
        struct_build(s.BF_Online_Tree, dict(
            n_nodes=len(tree.nodes),
            nodes=[_node_record(s, node) for node in tree.nodes]), stream)


def read_checkpoint(stream):
    """ Rebuild the OnlineForest written by write_checkpoint. Updating the
        result continues exactly as the original forest would have.
    """
    stream.seek(0)
    basic = identify(stream.read(6), ONLINE_MAGIC)
    s = BigForestStructs(little_endian=basic.little_endian)
    s.create_basic_structs()
    header = struct_parse(s.BF_Online_Header, stream, stream_pos=0)
    s.create_online_structs(header.n_classes, header.n_features)

    hp = header.params
    params = OnlineForestParams(
        Q=hp.Q, S=hp.S, lam=hp.lam, max_depth=hp.max_depth, alpha=hp.alpha,
        beta=hp.beta, rho=hp.rho if hp.rho > 0 else None, seed=hp.seed)
    lo = np.frombuffer(header.range_lo, dtype=s.dtype_float64)
    hi = np.frombuffer(header.range_hi, dtype=s.dtype_float64)

    states = json.loads(header.rng_state)
    format_assert(len(states) == params.Q,
        'checkpoint holds %d generator states for %d trees' % (
            len(states), params.Q))
    rngs = []
    for state in states:
        rng = np.random.default_rng()
        rng.bit_generator.state = state
        rngs.append(rng)

    trees = []
    for _ in range(params.Q):
        record = struct_parse(s.BF_Online_Tree, stream)
        nodes = [_parse_node(s, header, node) for node in record.nodes]
        trees.append(OnlineTree(nodes, header.n_classes, lo, hi))

    forest = OnlineForest(params, header.n_classes, lo, hi, trees, rngs)
    forest.n_updates = header.n_updates
    forest.n_draws = header.n_draws
    forest.n_zero_draws = header.n_zero_draws
    forest.oob_events = header.oob_events
    forest.oob_errors = header.oob_errors
    forest.tree_oob_events = np.frombuffer(
        header.tree_oob_events, dtype=s.dtype_int64).astype(np.int64)
    forest.tree_oob_errors = np.frombuffer(
        header.tree_oob_errors, dtype=s.dtype_int64).astype(np.int64)
    return forest


def save_checkpoint(forest, path, little_endian=True):
    with open(path, 'wb') as f:
        write_checkpoint(forest, f, little_endian)
    log.info('checkpoint after %d updates written to %s',
             forest.n_updates, path)


def load_checkpoint(path):
    with open(path, 'rb') as f:
        return read_checkpoint(io.BytesIO(f.read()))


def checkpoint_to_bytes(forest, little_endian=True):
    stream = io.BytesIO()
    write_checkpoint(forest, stream, little_endian)
    return stream.getvalue()


#------------------------- PRIVATE -------------------------

def _node_record(s, node):
    if node.is_leaf:
        return dict(kind='leaf', depth=node.depth, body=dict(
            counts=node.counts.astype(s.dtype_float64).tobytes(),
            structure_counts=node.structure_counts.astype(
                s.dtype_float64).tobytes(),
            lo=node.lo.astype(s.dtype_float64).tobytes(),
            hi=node.hi.astype(s.dtype_float64).tobytes(),
            n_candidates=len(node.features),
            features=node.features.astype(s.dtype_int32).tobytes(),
            thresholds=node.thresholds.astype(s.dtype_float64).tobytes(),
            left_counts=node.left_counts.astype(s.dtype_float64).tobytes(),
            right_counts=node.right_counts.astype(
                s.dtype_float64).tobytes()))
    return dict(kind='split', depth=node.depth, body=dict(
        feature=node.feature, threshold=node.threshold,
        left=node.left, right=node.right))


def _parse_node(s, header, record):
    body = record.body
    if record.kind == 'split':
        return OnlineSplit(record.depth, body.feature, body.threshold,
                           body.left, body.right)
    n_classes = header.n_classes
    def doubles(raw):
        return np.frombuffer(raw, dtype=s.dtype_float64).astype(np.float64)
    return OnlineLeaf(
        record.depth, doubles(body.counts), doubles(body.structure_counts),
        np.frombuffer(body.features, dtype=s.dtype_int32).astype(np.int64),
        doubles(body.thresholds), doubles(body.lo), doubles(body.hi),
        doubles(body.left_counts).reshape(-1, n_classes),
        doubles(body.right_counts).reshape(-1, n_classes))
