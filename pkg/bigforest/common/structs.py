#-------------------------------------------------------------------------------
# bigforest: common/structs.py
#
# Encapsulation of Construct structs for the tree, forest and online forest
# binary formats, adjusted for correct endianness.
#
# This code is in the public domain
#-------------------------------------------------------------------------------
import numpy as np
from construct import (
    Int8ul, Int16ul, Int16ub, Int32ul, Int32ub, Int32sl, Int32sb,
    Int64ul, Int64ub, Float64l, Float64b,
    Struct, Bytes, Enum, PrefixedArray, PascalString, Prefixed, GreedyBytes,
    Array, Switch, this
    )

from .utils import format_assert
from .enums import (
    ENUM_BYTE_ORDER, ENUM_SCHEME, ENUM_SPLIT_MODE, ENUM_INBAG_MODE,
    ENUM_ONLINE_NODE)


TREE_MAGIC = b'BFTR'
FOREST_MAGIC = b'BFRF'
ONLINE_MAGIC = b'BFON'

FORMAT_VERSION = 1


class BigForestStructs(object):
    """ Accessible attributes:

            BF_{byte|half|word|sword|xword|double}:
                Data chunks, adjusted for correct endianness. half, word and
                xword are unsigned 16, 32 and 64 bit integers; sword is a
                signed 32 bit integer.

            dtype_{int32|int64|float64}:
                numpy dtypes with the same endianness, for column blocks
                stored as raw bytes.

            BF_Ident:
                File identification: magic, byte order, version

            BF_Tree:
                A complete serialized tree

            BF_Forest_Header, BF_Group, BF_Tree_Ids, BF_Inbag, BF_Tree_Record:
                Pieces of a forest file

            BF_Online_Header:
                Header of an online forest checkpoint

            BF_Online_Tree:
                Node records of one online tree; only available after
                create_online_structs was called.
    """
    def __init__(self, little_endian=True):
        self.little_endian = little_endian
        self.n_classes = None
        self.n_features = None

    def create_basic_structs(self):
        """ Create the word-size related structs and everything that does not
            depend on the shape of the data.
        """
        if self.little_endian:
            self.BF_half = Int16ul
            self.BF_word = Int32ul
            self.BF_sword = Int32sl
            self.BF_xword = Int64ul
            self.BF_double = Float64l
            order = '<'
        else:
            self.BF_half = Int16ub
            self.BF_word = Int32ub
            self.BF_sword = Int32sb
            self.BF_xword = Int64ub
            self.BF_double = Float64b
            order = '>'
        self.BF_byte = Int8ul
        self.dtype_int32 = np.dtype(order + 'i4')
        self.dtype_int64 = np.dtype(order + 'i8')
        self.dtype_float64 = np.dtype(order + 'f8')

        self._create_ident()
        self._create_tree()
        self._create_forest()
        self._create_online_header()

    def create_online_structs(self, n_classes, n_features):
        """ Create the online tree node structs. Node records embed fixed
            size class count and range vectors, so they depend on the data
            shape read from the checkpoint header.
        """
        self.n_classes = n_classes
        self.n_features = n_features
        self._create_online_tree()

    #-------------------------------- PRIVATE --------------------------------#

    def _create_ident(self):
        self.BF_Ident = Struct(
            'magic' / Bytes(4),
            'byte_order' / Enum(self.BF_byte, **ENUM_BYTE_ORDER),
            'version' / self.BF_byte,
        )

    def _create_tree(self):
        self.BF_Tree = Struct(
            'ident' / self.BF_Ident,
            'n_classes' / self.BF_half,
            'n_features' / self.BF_word,
            'depth' / self.BF_word,
            'n_nodes' / self.BF_word,
            'feature' / Bytes(this.n_nodes * 4),
            'threshold' / Bytes(this.n_nodes * 8),
            'left' / Bytes(this.n_nodes * 4),
            'right' / Bytes(this.n_nodes * 4),
            'prediction' / Bytes(this.n_nodes * 4),
            'class_counts' / Bytes(this.n_nodes * this.n_classes * 8),
        )

    def _create_forest(self):
        self.BF_Plan = Struct(
            'scheme' / Enum(self.BF_byte, **ENUM_SCHEME),
            'master_seed' / self.BF_xword,
            'n' / self.BF_xword,
            'Q' / self.BF_word,
            'm' / self.BF_xword,
            'K' / self.BF_word,
            'q' / self.BF_word,
            'lam' / self.BF_double,
        )
        self.BF_Tree_Params = Struct(
            'mtry' / self.BF_word,
            'max_leaves' / self.BF_word,
            'max_depth' / self.BF_word,
            'min_node_weight' / self.BF_double,
            'split_mode' / Enum(self.BF_byte, **ENUM_SPLIT_MODE),
            'S' / self.BF_word,
            'seed' / self.BF_xword,
        )
        self.BF_Forest_Header = Struct(
            'ident' / self.BF_Ident,
            'n_features' / self.BF_word,
            'n_classes' / self.BF_half,
            'feature_names' / PrefixedArray(
                self.BF_word, PascalString(self.BF_half, 'utf8')),
            'class_names' / PrefixedArray(
                self.BF_half, PascalString(self.BF_half, 'utf8')),
            'plan' / self.BF_Plan,
            'tree_params' / self.BF_Tree_Params,
            'inbag_mode' / Enum(self.BF_byte, **ENUM_INBAG_MODE),
            'n_groups' / self.BF_word,
            'n_trees' / self.BF_word,
        )
        self.BF_Group = Struct(
            'group_id' / self.BF_word,
            'tree_start' / self.BF_word,
            'tree_stop' / self.BF_word,
            'n_rows' / self.BF_xword,
            'rows' / Bytes(this.n_rows * 8),
        )
        self.BF_Tree_Ids = Struct(
            'n_trees' / self.BF_word,
            'ids' / Bytes(this.n_trees * 8),
        )
        self.BF_Inbag = Struct(
            'n_rows' / self.BF_xword,
            'indices' / Bytes(this.n_rows * 8),
            'weights' / Bytes(this.n_rows * 8),
        )
        self.BF_Tree_Record = Struct(
            'blob' / Prefixed(self.BF_xword, GreedyBytes),
        )

    def _create_online_header(self):
        self.BF_Online_Params = Struct(
            'Q' / self.BF_word,
            'S' / self.BF_word,
            'lam' / self.BF_double,
            'max_depth' / self.BF_word,
            'alpha' / self.BF_double,
            'beta' / self.BF_double,
            'rho' / self.BF_double,
            'seed' / self.BF_xword,
        )
        self.BF_Online_Header = Struct(
            'ident' / self.BF_Ident,
            'n_features' / self.BF_word,
            'n_classes' / self.BF_half,
            'params' / self.BF_Online_Params,
            'range_lo' / Bytes(this.n_features * 8),
            'range_hi' / Bytes(this.n_features * 8),
            'rng_state' / PascalString(self.BF_word, 'utf8'),
            'n_updates' / self.BF_xword,
            'n_draws' / self.BF_xword,
            'n_zero_draws' / self.BF_xword,
            'oob_events' / self.BF_xword,
            'oob_errors' / self.BF_xword,
            'tree_oob_events' / Bytes(this.params.Q * 8),
            'tree_oob_errors' / Bytes(this.params.Q * 8),
        )

    def _create_online_tree(self):
        count_size = self.n_classes * 8
        range_size = self.n_features * 8
        self.BF_Online_Split = Struct(
            'feature' / self.BF_word,
            'threshold' / self.BF_double,
            'left' / self.BF_word,
            'right' / self.BF_word,
        )
        self.BF_Online_Leaf = Struct(
            'counts' / Bytes(count_size),
            'structure_counts' / Bytes(count_size),
            'lo' / Bytes(range_size),
            'hi' / Bytes(range_size),
            'n_candidates' / self.BF_word,
            'features' / Bytes(this.n_candidates * 4),
            'thresholds' / Bytes(this.n_candidates * 8),
            'left_counts' / Bytes(this.n_candidates * count_size),
            'right_counts' / Bytes(this.n_candidates * count_size),
        )
        self.BF_Online_Node = Struct(
            'kind' / Enum(self.BF_byte, **ENUM_ONLINE_NODE),
            'depth' / self.BF_word,
            'body' / Switch(this.kind, {
                'leaf': self.BF_Online_Leaf,
                'split': self.BF_Online_Split,
            }),
        )
        self.BF_Online_Tree = Struct(
            'n_nodes' / self.BF_word,
            'nodes' / Array(this.n_nodes, self.BF_Online_Node),
        )


_structs_cache = {}

def get_structs(little_endian=True):
    """ A shared BigForestStructs with its basic structs created.
    """
    structs = _structs_cache.get(little_endian)
    if structs is None:
        structs = BigForestStructs(little_endian=little_endian)
        structs.create_basic_structs()
        _structs_cache[little_endian] = structs
    return structs


def identify(data, expected_magic):
    """ Parse the identification header at the start of data (bytes) and
        return the matching BigForestStructs. The magic and byte-order fields
        are single bytes, so any struct set can read them.
    """
    format_assert(len(data) >= 6, 'truncated header')
    ident = get_structs().BF_Ident.parse(data[:6])
    format_assert(ident.magic == expected_magic,
        'bad magic %r, expected %r' % (ident.magic, expected_magic))
    format_assert(ident.version == FORMAT_VERSION,
        'unsupported format version %d' % ident.version)
    return get_structs(ident.byte_order == 'BFDATA2LSB')
