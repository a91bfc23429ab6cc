#-------------------------------------------------------------------------------
# bigforest: forest/forestfile.py
#
# ForestFile - reading and writing forests in the versioned binary format
#
# This code is in the public domain
#-------------------------------------------------------------------------------
import io
import logging

import numpy as np

from ..common.structs import identify, get_structs, FOREST_MAGIC, FORMAT_VERSION
from ..common.utils import struct_parse, struct_build, format_assert
from ..resample.plan import (
    ResamplePlan, TreeGroup, validate_plan, plan_groups, plan_tree_input)
from ..tree.rows import WeightedRows
from ..tree.tree import Tree, TreeParams
from .forest import Forest


log = logging.getLogger('bigforest.forest')


class ForestFile(object):
    """ Creation: the constructor accepts a binary stream holding a forest
        file, as written by ForestFile.write.

        Accessible attributes:

            stream:
                the stream holding the file

            little_endian:
                byte order of the file

            structs:
                BigForestStructs for that byte order

            header:
                the parsed file header (shape, names, plan, tree params,
                inbag mode and counts)

        Inbag records are either stored in the file or, when the forest holds
        exactly the trees of its plan, derived from the plan on load.
    """
    def __init__(self, stream):
        self.stream = stream
        self.stream.seek(0)
        self.structs = identify(self.stream.read(6), FOREST_MAGIC)
        self.little_endian = self.structs.little_endian
        self.header = struct_parse(self.structs.BF_Forest_Header,
                                   self.stream, stream_pos=0)
        self.plan = ResamplePlan(
            scheme=str(self.header.plan.scheme),
            master_seed=self.header.plan.master_seed,
            n=self.header.plan.n,
            Q=self.header.plan.Q,
            m=self.header.plan.m,
            K=self.header.plan.K,
            q=self.header.plan.q,
            lam=self.header.plan.lam)
        tp = self.header.tree_params
        self.tree_params = TreeParams(
            mtry=tp.mtry, max_leaves=tp.max_leaves, max_depth=tp.max_depth,
            min_node_weight=tp.min_node_weight,
            split_mode=str(tp.split_mode), S=tp.S, seed=tp.seed)

        self._groups = None
        self._tree_ids = None
        self._inbag = None
        if self.header.inbag_mode == 'stored':
            self._parse_stored_inbag()
        self._trees_offset = self.stream.tell()

    @classmethod
    def load_from_path(cls, path):
        with open(path, 'rb') as f:
            return cls(io.BytesIO(f.read()))

    def num_trees(self):
        return self.header.n_trees

    def iter_trees(self):
        """ Yield every Tree of the file in order.
        """
        self.stream.seek(self._trees_offset)
        for _ in range(self.num_trees()):
            record = struct_parse(self.structs.BF_Tree_Record, self.stream)
            yield Tree.parse(record.blob)

    def get_tree(self, n):
        format_assert(0 <= n < self.num_trees(),
            'tree %d out of range(%d)' % (n, self.num_trees()))
        for i, tree in enumerate(self.iter_trees()):
            if i == n:
                return tree

    def get_forest(self):
        """ The complete Forest held by this file.
        """
        trees = list(self.iter_trees())
        if self._inbag is None:
            validate_plan(self.plan)
            format_assert(len(trees) == self.plan.Q,
                'file holds %d trees but its plan has %d' % (
                    len(trees), self.plan.Q))
            groups = plan_groups(self.plan)
            inbag = [plan_tree_input(self.plan, groups, t).rows
                     for t in range(self.plan.Q)]
            tree_ids = np.arange(self.plan.Q)
        else:
            groups, inbag, tree_ids = self._groups, self._inbag, self._tree_ids
        return Forest(trees, inbag, self.plan, self.tree_params, groups,
                      self.header.n_features, self.header.n_classes,
                      list(self.header.feature_names),
                      list(self.header.class_names),
                      tree_ids)

    @staticmethod
    def write(forest, stream, little_endian=True, inbag_mode=None):
        """ Write forest to stream. inbag_mode is 'derived' or 'stored'; by
            default inbag records are derived whenever the forest allows it.
        """
        if inbag_mode is None:
            inbag_mode = 'derived' if forest.inbag_derivable() else 'stored'
        format_assert(inbag_mode in ('derived', 'stored'),
            'unknown inbag mode %r' % (inbag_mode,))
        format_assert(inbag_mode == 'stored' or forest.inbag_derivable(),
            'inbag records of this forest cannot be derived from its plan')
        s = get_structs(little_endian)
        plan = forest.plan
        tp = forest.tree_params
        struct_build(s.BF_Forest_Header, dict(
            ident=dict(magic=FOREST_MAGIC,
                       byte_order='BFDATA2LSB' if little_endian
                                  else 'BFDATA2MSB',
                       version=FORMAT_VERSION),
            n_features=forest.n_features,
            n_classes=forest.n_classes,
            feature_names=list(forest.feature_names),
            class_names=list(forest.class_names),
            plan=dict(scheme=plan.scheme, master_seed=plan.master_seed,
                      n=plan.n, Q=plan.Q, m=plan.m, K=plan.K, q=plan.q,
                      lam=float(plan.lam)),
            tree_params=dict(mtry=tp.mtry, max_leaves=tp.max_leaves,
                             max_depth=tp.max_depth,
                             min_node_weight=float(tp.min_node_weight),
                             split_mode=tp.split_mode, S=tp.S, seed=tp.seed),
            inbag_mode=inbag_mode,
            n_groups=len(forest.groups),
            n_trees=len(forest.trees)), stream)

        if inbag_mode == 'stored':
            for g in forest.groups:
                struct_build(s.BF_Group, dict(
                    group_id=g.group_id, tree_start=g.tree_start,
                    tree_stop=g.tree_stop, n_rows=len(g.rows),
                    rows=np.asarray(g.rows).astype(s.dtype_int64).tobytes()),
                    stream)
            struct_build(s.BF_Tree_Ids, dict(
                n_trees=len(forest.tree_ids),
                ids=forest.tree_ids.astype(s.dtype_int64).tobytes()), stream)
            for rows in forest.inbag:
                struct_build(s.BF_Inbag, dict(
                    n_rows=len(rows.indices),
                    indices=rows.indices.astype(s.dtype_int64).tobytes(),
                    weights=rows.weights.astype(s.dtype_float64).tobytes()),
                    stream)

        for tree in forest.trees:
            struct_build(s.BF_Tree_Record,
                         dict(blob=tree.serialize(little_endian)), stream)

    #-------------------------------- PRIVATE --------------------------------#

    def _parse_stored_inbag(self):
        s = self.structs
        self._groups = []
        for _ in range(self.header.n_groups):
            g = struct_parse(s.BF_Group, self.stream)
            self._groups.append(TreeGroup(
                g.group_id, g.tree_start, g.tree_stop,
                np.frombuffer(g.rows, dtype=s.dtype_int64).astype(np.int64)))
        ids = struct_parse(s.BF_Tree_Ids, self.stream)
        self._tree_ids = np.frombuffer(
            ids.ids, dtype=s.dtype_int64).astype(np.int64)
        format_assert(len(self._tree_ids) == self.header.n_trees,
            'tree id table holds %d ids for %d trees' % (
                len(self._tree_ids), self.header.n_trees))
        self._inbag = []
        for _ in range(self.header.n_trees):
            r = struct_parse(s.BF_Inbag, self.stream)
            self._inbag.append(WeightedRows(
                np.frombuffer(r.indices, dtype=s.dtype_int64).astype(np.int64),
                np.frombuffer(r.weights,
                              dtype=s.dtype_float64).astype(np.float64)))


def save_forest(forest, path, little_endian=True, inbag_mode=None):
    with open(path, 'wb') as f:
        ForestFile.write(forest, f, little_endian, inbag_mode)
    log.info('wrote %d trees to %s', len(forest), path)


def load_forest(path):
    return ForestFile.load_from_path(path).get_forest()


def forest_to_bytes(forest, little_endian=True, inbag_mode=None):
    """ The serialized file contents of forest, as bytes.
    """
    stream = io.BytesIO()
    ForestFile.write(forest, stream, little_endian, inbag_mode)
    return stream.getvalue()
