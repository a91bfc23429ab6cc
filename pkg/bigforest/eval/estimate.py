#-------------------------------------------------------------------------------
# bigforest: eval/estimate.py
#
# ErrorEstimate - the result of every error-rate estimate
#
# This code is in the public domain
#-------------------------------------------------------------------------------
from collections import namedtuple

from ..common.exceptions import EstimateUnavailableError


# rate: misclassification rate in [0, 1]
# n_evaluated: observations that entered the rate
# n_excluded: observations left out (no tree could predict them)
# n_predictions: individual tree predictions the estimate needed
#
ErrorEstimate = namedtuple('ErrorEstimate',
    'rate n_evaluated n_excluded n_predictions')


def make_estimate(n_errors, n_evaluated, n_excluded=0, n_predictions=0,
                  what='error estimate'):
    """ ErrorEstimate from raw counts; raises EstimateUnavailableError when
        nothing was evaluated.
    """
    if n_evaluated == 0:
        raise EstimateUnavailableError(
            '%s unavailable: no observation could be evaluated' % what)
    return ErrorEstimate(float(n_errors) / n_evaluated, int(n_evaluated),
                         int(n_excluded), int(n_predictions))
