#-------------------------------------------------------------------------------
# test/utils.py
#
# Some common utils for test runners
#
# This code is in the public domain
#-------------------------------------------------------------------------------
import os


def is_in_rootdir():
    """ Check whether the current dir is the root dir of bigforest
    """
    return os.path.isdir('test') and os.path.isdir('bigforest')
