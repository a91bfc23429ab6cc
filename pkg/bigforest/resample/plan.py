#-------------------------------------------------------------------------------
# bigforest: resample/plan.py
#
# ResamplePlan - how every tree of a forest gets its training multiset, and
# the scheme-specific wiring from a plan to per-tree WeightedRows
#
# This code is in the public domain
#-------------------------------------------------------------------------------
from collections import namedtuple

import numpy as np

from ..common.enums import ENUM_SCHEME
from ..common.utils import plan_assert, derive_generator
from ..tree.rows import WeightedRows, rows_from_counts
from .sampling import (
    bootstrap_standard, blb_weights, partition_chunks, poisson_weights,
    subsample_rows)


# Resampling plan of a forest.
#
# scheme: one of SCHEMES
# master_seed: 64-bit seed every draw of the forest derives from
# n: population size (rows of the training Dataset)
# Q: total number of trees
# m: subsample size (subsample, moon and blb schemes)
# K: number of subsamples (blb) or chunks (dac)
# q: trees per subsample or chunk (blb and dac); K * q == Q
# lam: Poisson rate (poisson scheme)
#
ResamplePlan = namedtuple('ResamplePlan',
    'scheme master_seed n Q m K q lam',
    defaults=(0, 1, 1, 1.0))

SCHEMES = tuple(sorted(ENUM_SCHEME, key=ENUM_SCHEME.get))

# Schemes whose trees are grouped into K subforests of q trees.
GROUPED_SCHEMES = ('blb', 'dac')

# Keys of the independent random streams derived from master_seed. A tree's
# draws only depend on (master_seed, stream, tree id or group id).
STREAM_RESAMPLE = 0
STREAM_TREE = 1
STREAM_SUBSAMPLE = 2


# One group of consecutive trees sharing a subsample or chunk.
#
# group_id: index of the group
# tree_start, tree_stop: the group's trees are range(tree_start, tree_stop)
# rows: sorted int64 array of the dataset rows the group's trees draw from
#
TreeGroup = namedtuple('TreeGroup', 'group_id tree_start tree_stop rows')

# Training input of one tree: its id, its group and its weighted rows.
TreeInput = namedtuple('TreeInput', 'tree_id group_id rows')


def validate_plan(plan):
    """ Check plan against its scheme's constraints, raising PlanError.
    """
    plan_assert(plan.scheme in SCHEMES,
        'unknown scheme %r (expected one of %s)' % (
            plan.scheme, ', '.join(SCHEMES)))
    plan_assert(plan.n >= 1, 'plan needs n >= 1, got %d' % plan.n)
    plan_assert(plan.Q >= 1, 'plan needs Q >= 1, got %d' % plan.Q)
    plan_assert(0 <= plan.master_seed < 1 << 64,
        'master seed must be a 64-bit unsigned integer')
    if plan.scheme in ('subsample', 'moon', 'blb'):
        plan_assert(1 <= plan.m <= plan.n,
            '%s scheme needs 1 <= m <= n (m=%d, n=%d)' % (
                plan.scheme, plan.m, plan.n))
    if plan.scheme in GROUPED_SCHEMES:
        plan_assert(plan.K >= 1 and plan.q >= 1,
            '%s scheme needs K >= 1 and q >= 1' % plan.scheme)
        plan_assert(plan.K * plan.q == plan.Q,
            '%s scheme needs K * q == Q (K=%d, q=%d, Q=%d)' % (
                plan.scheme, plan.K, plan.q, plan.Q))
    if plan.scheme == 'dac':
        plan_assert(plan.K <= plan.n,
            'cannot split %d rows into %d chunks' % (plan.n, plan.K))
    if plan.scheme == 'poisson':
        plan_assert(plan.lam > 0,
            'Poisson rate must be positive, got %r' % (plan.lam,))
    return plan


def plan_groups(plan):
    """ The TreeGroups of plan, in tree order. standard, subsample and
        poisson plans form one group; moon plans one group per tree (its
        subsample); blb and dac plans K groups of q trees.
    """
    validate_plan(plan)
    s = plan.scheme
    n = plan.n
    if s in ('standard', 'poisson'):
        return [TreeGroup(0, 0, plan.Q, np.arange(n, dtype=np.int64))]
    if s == 'subsample':
        return [TreeGroup(0, 0, plan.Q, _group_subsample(plan, 0))]
    if s == 'moon':
        return [TreeGroup(t, t, t + 1, _group_subsample(plan, t))
                for t in range(plan.Q)]
    if s == 'blb':
        return [TreeGroup(l, l * plan.q, (l + 1) * plan.q,
                          _group_subsample(plan, l))
                for l in range(plan.K)]
    chunks = partition_chunks(n, plan.K)
    return [TreeGroup(l, l * plan.q, (l + 1) * plan.q,
                      np.arange(chunk.start, chunk.stop, dtype=np.int64))
            for l, chunk in enumerate(chunks)]


def group_of_tree(plan, tree_id):
    if plan.scheme in GROUPED_SCHEMES:
        return tree_id // plan.q
    if plan.scheme == 'moon':
        return tree_id
    return 0


def plan_tree_input(plan, groups, tree_id):
    """ The TreeInput of one tree, given the plan's groups. Depends only on
        (plan, tree_id), so trees can be resampled in any order.
    """
    plan_assert(0 <= tree_id < plan.Q,
        'tree id %d out of range(%d)' % (tree_id, plan.Q))
    group = groups[group_of_tree(plan, tree_id)]
    rng = derive_generator(plan.master_seed, STREAM_RESAMPLE, tree_id)
    s = plan.scheme
    if s == 'standard':
        rows = bootstrap_standard(plan.n, rng)
    elif s == 'poisson':
        rows = poisson_weights(plan.n, plan.lam, rng)
        # conditioned on at least one row: redraw from the same stream
        while not len(rows.indices):
            rows = poisson_weights(plan.n, plan.lam, rng)
    elif s == 'moon':
        rows = WeightedRows(group.rows.copy(), np.ones(len(group.rows)))
    elif s == 'blb':
        weights = blb_weights(len(group.rows), plan.n, rng)
        rows = rows_from_counts(group.rows, weights)
    else:
        # subsample and dac: a bootstrap of the group's own size within it
        inner = bootstrap_standard(len(group.rows), rng)
        rows = WeightedRows(group.rows[inner.indices], inner.weights)
    return TreeInput(tree_id, group.group_id, rows)


def plan_tree_inputs(plan, ds=None):
    """ TreeInputs of every tree of plan, in tree id order. When ds is given
        it must hold plan.n rows.
    """
    validate_plan(plan)
    if ds is not None:
        plan_assert(len(ds) == plan.n,
            'plan is for %d rows but the dataset has %d' % (plan.n, len(ds)))
    groups = plan_groups(plan)
    return [plan_tree_input(plan, groups, t) for t in range(plan.Q)]


def nominal_weight(plan, group):
    """ Sum of weights every tree input of group is expected to carry (the
        scheme's nominal bootstrap size). None for the poisson scheme, whose
        totals are random.
    """
    s = plan.scheme
    if s in ('standard', 'blb'):
        return plan.n
    if s in ('subsample', 'moon', 'dac'):
        return len(group.rows)
    return None


#------------------------- PRIVATE -------------------------

def _group_subsample(plan, group_id):
    rng = derive_generator(plan.master_seed, STREAM_SUBSAMPLE, group_id)
    return subsample_rows(plan.n, plan.m, rng)
