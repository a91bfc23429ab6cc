#-------------------------------------------------------------------------------
# bigforest
#
# Random forests for large classification datasets
#
# This code is in the public domain
#-------------------------------------------------------------------------------
__version__ = '0.1'
