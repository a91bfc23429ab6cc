#-------------------------------------------------------------------------------
# bigforest: common/exceptions.py
#
# Exception classes for bigforest
#
# This code is in the public domain
#-------------------------------------------------------------------------------
class ForestError(Exception):
    pass

class DataError(ForestError):
    pass

class PlanError(ForestError):
    pass

class TreeError(ForestError):
    pass

class FormatError(ForestError):
    pass

class ConfigError(ForestError):
    pass

class EstimateUnavailableError(ForestError):
    """ Raised by OOB-type estimates when no observation can be evaluated.
        This is a result ("unavailable"), not a malfunction.
    """
    pass
