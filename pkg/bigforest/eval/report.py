#-------------------------------------------------------------------------------
# bigforest: eval/report.py
#
# EvalReport - everything measured about one trained forest, as a
# machine-readable record and a human-readable table
#
# This code is in the public domain
#-------------------------------------------------------------------------------
from collections import namedtuple, OrderedDict
import logging
import time

from ..common.exceptions import EstimateUnavailableError
from .expected import mean_leaf_gini
from .importance import variable_importance
from .oob import err_forest, bd_err_forest, err_test


log = logging.getLogger('bigforest.eval')


# err_forest, bd_err_forest, err_test: ErrorEstimate, or None when not
#     computed or unavailable
# vi: VariableImportance or None
# mean_leaf_gini: mean Gini index over all leaves
# train_seconds, eval_seconds: wall-clock durations (None when unknown)
# n_trees, n_leaves: forest size
# distinct_inbag: mean number of distinct rows per tree training multiset
#     (None for online forests, which keep no in-bag sets)
#
EvalReport = namedtuple('EvalReport',
    'err_forest bd_err_forest err_test vi mean_leaf_gini train_seconds '
    'eval_seconds n_trees n_leaves distinct_inbag')

# Result columns of a report record, in output order. Records start with
# the resolved configuration columns.
RESULT_COLUMNS = (
    'n_trees', 'n_leaves', 'mean_leaves', 'distinct_inbag',
    'err_forest', 'err_forest_excluded', 'bd_err_forest', 'err_test',
    'mean_leaf_gini', 'vi', 'train_seconds', 'eval_seconds')

# Columns that differ between otherwise identical runs.
TIMING_COLUMNS = ('train_seconds', 'eval_seconds')


def evaluate(forest, ds, test_ds=None, with_err_forest=True, with_vi=False,
             vi_seed=0, workers=1):
    """ Build the EvalReport of forest trained on ds. Estimates that are
        unavailable are reported as None.
    """
    started = time.perf_counter()
    oob = _optional(err_forest, forest, ds) if with_err_forest else None
    bd = _optional(bd_err_forest, forest, ds)
    test = (_optional(err_test, forest, test_ds, workers)
            if test_ds is not None else None)
    vi = (_optional(variable_importance, forest, ds, vi_seed, workers)
          if with_vi else None)
    seconds = time.perf_counter() - started
    log.info('evaluated %d trees in %.3f seconds', len(forest), seconds)
    return EvalReport(oob, bd, test, vi, mean_leaf_gini(forest),
                      forest.train_seconds, seconds, len(forest),
                      forest.n_leaves(), forest.mean_distinct_inbag())


def evaluate_online(forest, test_ds=None, train_seconds=None, workers=1):
    """ The EvalReport of an OnlineForest. err_forest is the running
        out-of-bag estimate; the batch-only fields (bd_err_forest, vi,
        distinct_inbag) are None.
    """
    started = time.perf_counter()
    oob = _optional(forest.oob_estimate)
    test = (_optional(err_test, forest, test_ds, workers)
            if test_ds is not None else None)
    seconds = time.perf_counter() - started
    return EvalReport(oob, None, test, None, mean_leaf_gini(forest),
                      train_seconds, seconds, len(forest), forest.n_leaves(),
                      None)


def report_record(report, config_items=()):
    """ OrderedDict of one report record: the (name, value) pairs of
        config_items followed by RESULT_COLUMNS. Absent values are ''.
    """
    record = OrderedDict(config_items)
    record['n_trees'] = report.n_trees
    record['n_leaves'] = report.n_leaves
    record['mean_leaves'] = _number(float(report.n_leaves) / report.n_trees
                                    if report.n_trees else None)
    record['distinct_inbag'] = _number(report.distinct_inbag)
    record['err_forest'] = _rate(report.err_forest)
    record['err_forest_excluded'] = (report.err_forest.n_excluded
                                     if report.err_forest else '')
    record['bd_err_forest'] = _rate(report.bd_err_forest)
    record['err_test'] = _rate(report.err_test)
    record['mean_leaf_gini'] = _number(report.mean_leaf_gini)
    record['vi'] = (';'.join('%.6g' % v for v in report.vi.vi)
                    if report.vi is not None else '')
    record['train_seconds'] = _number(report.train_seconds)
    record['eval_seconds'] = _number(report.eval_seconds)
    return record


def format_table(report, feature_names=None):
    """ Human-readable summary of report.
    """
    def rate(estimate):
        if estimate is None:
            return 'unavailable'
        return '%.6f  (%d rows, %d excluded)' % (
            estimate.rate, estimate.n_evaluated, estimate.n_excluded)
    lines = [
        '  trees:            %d' % report.n_trees,
        '  leaves:           %d' % report.n_leaves,
    ]
    if report.distinct_inbag is not None:
        lines.append('  distinct in-bag:  %.1f per tree' %
                     report.distinct_inbag)
    lines += [
        '  errForest:        %s' % rate(report.err_forest),
        '  BDerrForest:      %s' % rate(report.bd_err_forest),
        '  errTest:          %s' % rate(report.err_test),
        '  mean leaf Gini:   %.6f' % report.mean_leaf_gini,
    ]
    if report.train_seconds is not None:
        lines.append('  train seconds:    %.3f' % report.train_seconds)
    lines.append('  eval seconds:     %.3f' % report.eval_seconds)
    if report.vi is not None:
        lines.append('  variable importance:')
        for j, v in enumerate(report.vi.vi):
            name = feature_names[j] if feature_names else 'X%d' % (j + 1)
            lines.append('    %-12s %.6f' % (name, v))
        if report.vi.n_skipped:
            lines.append('    (%d trees skipped)' % report.vi.n_skipped)
    return '\n'.join(lines)


#------------------------- PRIVATE -------------------------

def _optional(estimator, *args):
    try:
        return estimator(*args)
    except EstimateUnavailableError as e:
        log.info('%s', e)
        return None


def _rate(estimate):
    return '%.6g' % estimate.rate if estimate is not None else ''


def _number(value):
    return '%.6g' % value if value is not None else ''
