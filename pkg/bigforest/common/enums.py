#-------------------------------------------------------------------------------
# bigforest: common/enums.py
#
# Mappings of enum names to values, as stored in binary files
#
# This code is in the public domain
#-------------------------------------------------------------------------------

# byte_order in every file identification header
ENUM_BYTE_ORDER = dict(
    BFDATA2LSB=1,
    BFDATA2MSB=2,
)

# ResamplePlan.scheme
ENUM_SCHEME = dict(
    standard=0,
    subsample=1,
    moon=2,
    blb=3,
    dac=4,
    poisson=5,
)

# TreeParams.split_mode
ENUM_SPLIT_MODE = dict(
    gini=0,
    ert=1,
)

# How a forest file records the in-bag multisets of its trees
ENUM_INBAG_MODE = dict(
    derived=0,
    stored=1,
)

# Online tree node kinds
ENUM_ONLINE_NODE = dict(
    leaf=0,
    split=1,
)
