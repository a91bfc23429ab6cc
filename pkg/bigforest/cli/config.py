#-------------------------------------------------------------------------------
# bigforest: cli/config.py
#
# ExperimentConfig - one experiment's settings, read from a key=value file and
# command-line flags, and the plans and parameters derived from it
#
# This code is in the public domain
#-------------------------------------------------------------------------------
from collections import namedtuple, OrderedDict
import math

from ..common.exceptions import ConfigError
from ..common.utils import config_assert
from ..online.forest import OnlineForestParams
from ..resample.plan import ResamplePlan
from ..tree.tree import TreeParams


# Every setting: (name, type, default, help). Defaults are the resolved
# values when nothing else is given; 0 marks values derived by
# resolve_config.
CONFIG_FIELDS = (
    ('source', str, 'simulate', 'simulate, or the path of a CSV file'),
    ('schema', str, '', 'schema file of the CSV source (default: inferred)'),
    ('test', str, '', 'CSV file of the test set'),
    ('n', int, 100000, 'rows to simulate'),
    ('test_n', int, 0, 'rows of the simulated test set'),
    ('seed', int, 0, 'master seed'),
    ('bias', str, 'none', 'row ordering: none, unbalanced or xbiases'),
    ('bias_p', float, 0.01, 'class 1 proportion of the unbalanced first half'),
    ('parts', int, 2, 'number of x-biases parts'),
    ('variant', str, 'seq',
        'seq, par, samp, moon, blb, dac, poisson or online'),
    ('Q', int, 0, 'number of trees (default K*q, or 100)'),
    ('K', int, 1, 'subsamples (blb) or chunks (dac)'),
    ('q', int, 0, 'trees per subsample or chunk (default Q/K)'),
    ('m', int, 0, 'subsample size'),
    ('f', float, 0.0, 'sampling fraction; sets m = floor(f*n)'),
    ('lam', float, 1.0, 'Poisson rate'),
    ('mtry', int, 0, 'features tried per node (default floor(sqrt(p)))'),
    ('max_leaves', int, 500, 'leaf budget per tree, 0 = unlimited'),
    ('max_depth', int, 0, 'depth budget, 0 = unlimited (online: 15)'),
    ('min_node_weight', float, 2.0, 'nodes lighter than this are leaves'),
    ('split_mode', str, 'gini', 'gini or ert'),
    ('S', int, 10, 'candidate splits per node (ert and online)'),
    ('alpha', float, 50.0, 'online split trigger: minimum count'),
    ('beta', float, 0.01, 'online split trigger: minimum Gini decrease'),
    ('rho', float, 0.0, 'online structure stream probability, 0 = bagging'),
    ('range_lo', float, -6.0, 'declared lower bound of every feature'),
    ('range_hi', float, 6.0, 'declared upper bound of every feature'),
    ('stream_fraction', float, 1.0, 'share of the stream fed to the forest'),
    ('checkpoint_every', int, 0, 'rows between checkpoints, 0 = at the end'),
    ('workers', int, 1, 'parallel workers'),
    ('err_forest', bool, True, 'compute the full out-of-bag error'),
    ('vi', bool, False, 'compute variable importance'),
    ('model', str, 'forest.bfrf', 'model file'),
    ('checkpoint', str, 'online.bfon', 'online checkpoint file'),
    ('output', str, 'data.csv', 'output CSV file'),
    ('report', str, '', 'CSV file report records are appended to'),
    ('sweep', str, '', 'swept setting of a bench run: K, q, Q, m, f, '
        'max_leaves, max_depth, stream_fraction or bias'),
    ('values', str, '', 'comma-separated values of the swept setting'),
    ('repeats', int, 1, 'runs per bench cell'),
)

ExperimentConfig = namedtuple('ExperimentConfig',
    [field[0] for field in CONFIG_FIELDS],
    defaults=[field[2] for field in CONFIG_FIELDS])

FIELD_TYPES = OrderedDict((field[0], field[1]) for field in CONFIG_FIELDS)

# variant -> resampling scheme
VARIANT_SCHEMES = OrderedDict((
    ('seq', 'standard'),
    ('par', 'standard'),
    ('samp', 'subsample'),
    ('moon', 'moon'),
    ('blb', 'blb'),
    ('dac', 'dac'),
    ('poisson', 'poisson'),
))

# The online forest has no resampling plan; it is run by the stream command
# and by bench.
ONLINE_VARIANT = 'online'

VARIANTS = tuple(VARIANT_SCHEMES) + (ONLINE_VARIANT,)

BIASES = ('none', 'unbalanced', 'xbiases')

SWEEPABLE = ('K', 'q', 'Q', 'm', 'f', 'max_leaves', 'max_depth',
             'stream_fraction', 'bias')

DEFAULT_TREES = 100
DEFAULT_ONLINE_DEPTH = 15

_TRUE_WORDS = ('1', 'true', 'yes', 'on')
_FALSE_WORDS = ('0', 'false', 'no', 'off')


def parse_value(name, text):
    """ Convert the text of setting name to its type, raising ConfigError.
    """
    config_assert(name in FIELD_TYPES, 'unknown setting %r' % (name,))
    kind = FIELD_TYPES[name]
    text = text.strip()
    if kind is bool:
        word = text.lower()
        config_assert(word in _TRUE_WORDS + _FALSE_WORDS,
            'setting %s expects a boolean, got %r' % (name, text))
        return word in _TRUE_WORDS
    try:
        return kind(text)
    except ValueError:
        raise ConfigError('setting %s expects %s, got %r' % (
            name, kind.__name__, text))


def read_config_file(path):
    """ Parse a key=value config file into an OrderedDict of typed values.
        Blank lines and lines starting with '#' are ignored.
    """
    values = OrderedDict()
    try:
        f = open(path, 'rt', encoding='utf-8')
    except OSError as e:
        raise ConfigError('cannot read config file %s: %s' % (path, e))
    with f:
        for lineno, line in enumerate(f, 1):
            line = line.strip()
            if not line or line.startswith('#'):
                continue
            config_assert('=' in line,
                '%s:%d: expected "key = value"' % (path, lineno))
            key, text = (s.strip() for s in line.split('=', 1))
            config_assert(key in FIELD_TYPES,
                '%s:%d: unknown setting %r' % (path, lineno, key))
            values[key] = parse_value(key, text)
    return values


def write_config_file(config, path):
    with open(path, 'wt', encoding='utf-8') as f:
        for name, value in config_items(config):
            f.write('%s = %s\n' % (name, value))


def build_config(file_values=None, flag_values=None):
    """ ExperimentConfig from defaults, overridden by file_values, overridden
        by flag_values (both mappings of setting name to typed value; None
        values in flag_values are ignored).
    """
    config = ExperimentConfig()
    for values in (file_values or {}, flag_values or {}):
        updates = dict((k, v) for k, v in values.items() if v is not None)
        unknown = [k for k in updates if k not in FIELD_TYPES]
        config_assert(not unknown, 'unknown settings %s' % unknown)
        config = config._replace(**updates)
    return config


def resolve_config(config, n=None):
    """ Check config and fill in its derived values: Q = K*q (or the default
        tree count), q = Q/K, m = floor(f*n). n is the number of training
        rows (config.n for simulated data). The online variant, like every
        variant without subsamples, takes K = 1 and q = Q.
    """
    if n is None:
        n = config.n
    config_assert(config.variant in VARIANTS,
        'unknown variant %r (expected one of %s)' % (
            config.variant, ', '.join(VARIANTS)))
    config_assert(config.bias in BIASES,
        'unknown bias %r (expected one of %s)' % (
            config.bias, ', '.join(BIASES)))
    config_assert(config.n >= 1, 'n must be >= 1')
    config_assert(config.workers >= 1, 'workers must be >= 1')
    config_assert(config.repeats >= 1, 'repeats must be >= 1')
    config_assert(0 < config.stream_fraction <= 1,
        'stream_fraction must lie in (0, 1]')
    config_assert(config.range_lo < config.range_hi,
        'range_lo must be below range_hi')
    config_assert(config.f >= 0, 'f must be >= 0')
    if config.bias == 'unbalanced':
        config_assert(0 < config.bias_p < 1, 'bias_p must lie in (0, 1)')
    if config.bias == 'xbiases':
        config_assert(config.parts >= 1, 'parts must be >= 1')

    scheme = VARIANT_SCHEMES.get(config.variant)
    Q, K, q, m = config.Q, config.K, config.q, config.m
    if scheme in ('blb', 'dac'):
        config_assert(K >= 1, 'variant %s needs K >= 1' % config.variant)
        if Q == 0 and q == 0:
            Q = DEFAULT_TREES
        if Q == 0:
            Q = K * q
        if q == 0:
            config_assert(Q % K == 0,
                'variant %s needs Q divisible by K (Q=%d, K=%d)' % (
                    config.variant, Q, K))
            q = Q // K
        config_assert(K * q == Q,
            'variant %s needs K * q == Q (K=%d, q=%d, Q=%d)' % (
                config.variant, K, q, Q))
    else:
        if Q == 0:
            Q = DEFAULT_TREES
        K, q = 1, Q

    if config.f > 0:
        config_assert(config.f <= 1, 'f must lie in (0, 1]')
        derived = int(math.floor(config.f * n))
        config_assert(m == 0 or m == derived,
            'm=%d contradicts f=%r (floor(f*n) = %d)' % (m, config.f, derived))
        m = derived
    if scheme in ('subsample', 'moon', 'blb'):
        config_assert(1 <= m <= n,
            'variant %s needs 1 <= m <= n; give m or f (m=%d, n=%d)' % (
                config.variant, m, n))
    if scheme == 'dac':
        config_assert(K <= n, 'cannot split %d rows into %d chunks' % (n, K))
    if scheme == 'poisson' or config.variant == ONLINE_VARIANT:
        config_assert(config.lam > 0, 'lam must be positive')

    config_assert(config.split_mode in ('gini', 'ert'),
        'unknown split mode %r' % (config.split_mode,))
    config_assert(config.S >= 1, 'S must be >= 1')
    config_assert(config.max_leaves >= 0, 'max_leaves must be >= 0')
    config_assert(config.max_depth >= 0, 'max_depth must be >= 0')
    config_assert(config.mtry >= 0, 'mtry must be >= 0')
    return config._replace(Q=Q, K=K, q=q, m=m)


def config_items(config):
    """ (name, value) pairs of config in field order, values as text.
    """
    items = []
    for name in FIELD_TYPES:
        value = getattr(config, name)
        if isinstance(value, bool):
            value = 'true' if value else 'false'
        items.append((name, str(value)))
    return items


def config_to_plan(config, n):
    """ ResamplePlan of a resolved config over n training rows.
    """
    config_assert(config.variant in VARIANT_SCHEMES,
        'variant %s has no resampling plan' % config.variant)
    return ResamplePlan(scheme=VARIANT_SCHEMES[config.variant],
                        master_seed=config.seed, n=n, Q=config.Q, m=config.m,
                        K=config.K, q=config.q, lam=config.lam)


def plan_to_config(plan, config=None):
    """ config (defaults when None) with the settings describing plan. The
        variant of a standard plan is 'seq'.
    """
    config = config if config is not None else ExperimentConfig()
    variant = dict((scheme, variant) for variant, scheme in
                   reversed(list(VARIANT_SCHEMES.items())))[plan.scheme]
    if config.variant in VARIANT_SCHEMES and \
            VARIANT_SCHEMES[config.variant] == plan.scheme:
        variant = config.variant
    return config._replace(variant=variant, seed=plan.master_seed, Q=plan.Q,
                           m=plan.m, K=plan.K, q=plan.q, lam=plan.lam, f=0.0)


def config_to_tree_params(config):
    return TreeParams(mtry=config.mtry or None,
                      max_leaves=config.max_leaves,
                      max_depth=config.max_depth,
                      min_node_weight=config.min_node_weight,
                      split_mode=config.split_mode,
                      S=config.S)


def config_to_online_params(config):
    return OnlineForestParams(Q=config.Q, S=config.S, lam=config.lam,
                              max_depth=config.max_depth or
                                        DEFAULT_ONLINE_DEPTH,
                              alpha=config.alpha, beta=config.beta,
                              rho=config.rho if config.rho > 0 else None,
                              seed=config.seed)
