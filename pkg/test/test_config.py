#-------------------------------------------------------------------------------
# bigforest tests
#
# This code is in the public domain
#-------------------------------------------------------------------------------
import os
import tempfile
import unittest

from bigforest.common.exceptions import ConfigError
from bigforest.cli.config import (
    ExperimentConfig, CONFIG_FIELDS, parse_value, read_config_file,
    write_config_file, build_config, resolve_config, config_items,
    config_to_plan, plan_to_config, config_to_tree_params,
    config_to_online_params, DEFAULT_TREES, DEFAULT_ONLINE_DEPTH,
    ONLINE_VARIANT, SWEEPABLE)
from bigforest.resample.plan import ResamplePlan, validate_plan


class TestParsing(unittest.TestCase):
    def test_parse_value(self):
        self.assertEqual(parse_value('K', ' 10 '), 10)
        self.assertEqual(parse_value('f', '0.01'), 0.01)
        self.assertEqual(parse_value('variant', 'blb'), 'blb')
        self.assertIs(parse_value('vi', 'Yes'), True)
        self.assertIs(parse_value('err_forest', 'off'), False)
        with self.assertRaises(ConfigError):
            parse_value('K', 'ten')
        with self.assertRaises(ConfigError):
            parse_value('vi', 'maybe')
        with self.assertRaises(ConfigError):
            parse_value('nope', '1')

    def test_file_round_trip(self):
        config = build_config(flag_values=dict(variant='dac', K=4, q=25,
                                               vi=True, seed=3))
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'run.cfg')
            write_config_file(config, path)
            values = read_config_file(path)
        self.assertEqual(list(values), [field[0] for field in CONFIG_FIELDS])
        self.assertEqual(build_config(values), config)

    def test_file_errors(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'bad.cfg')
            with open(path, 'w') as f:
                f.write('# comment\n\nK = 3\nthis line is wrong\n')
            with self.assertRaises(ConfigError) as cm:
                read_config_file(path)
            self.assertIn(':4:', str(cm.exception))
            with open(path, 'w') as f:
                f.write('colour = blue\n')
            with self.assertRaises(ConfigError):
                read_config_file(path)
            with self.assertRaises(ConfigError):
                read_config_file(os.path.join(tmp, 'missing.cfg'))

    def test_precedence(self):
        config = build_config(dict(K=2, q=5, variant='blb'),
                              dict(K=4, q=None))
        self.assertEqual((config.K, config.q, config.variant), (4, 5, 'blb'))
        with self.assertRaises(ConfigError):
            build_config(dict(colour='blue'))


class TestResolve(unittest.TestCase):
    def test_defaults(self):
        config = resolve_config(ExperimentConfig())
        self.assertEqual((config.Q, config.K, config.q),
                         (DEFAULT_TREES, 1, DEFAULT_TREES))
        plan = validate_plan(config_to_plan(config, config.n))
        self.assertEqual(plan.scheme, 'standard')

    def test_grouped_variants(self):
        config = resolve_config(ExperimentConfig(variant='blb', K=10, q=10,
                                                 f=0.01, n=10000))
        self.assertEqual((config.Q, config.m), (100, 100))
        config = resolve_config(ExperimentConfig(variant='dac', K=4, Q=100))
        self.assertEqual(config.q, 25)
        with self.assertRaises(ConfigError):
            resolve_config(ExperimentConfig(variant='dac', K=3, Q=100))
        with self.assertRaises(ConfigError):
            resolve_config(ExperimentConfig(variant='dac', K=3, q=2, Q=7))

    def test_sampling_fraction(self):
        config = resolve_config(ExperimentConfig(variant='samp', f=0.1,
                                                 n=1005))
        self.assertEqual(config.m, 100)
        with self.assertRaises(ConfigError):
            resolve_config(ExperimentConfig(variant='moon', n=100))
        with self.assertRaises(ConfigError):
            resolve_config(ExperimentConfig(variant='samp', m=50, f=0.1,
                                            n=1000))
        with self.assertRaises(ConfigError):
            resolve_config(ExperimentConfig(variant='moon', m=200, n=100))

    def test_invalid(self):
        bad = (
            dict(variant='forest'),
            dict(bias='sideways'),
            dict(workers=0),
            dict(stream_fraction=0.0),
            dict(range_lo=1.0, range_hi=1.0),
            dict(split_mode='cart'),
            dict(variant='poisson', lam=0.0),
            dict(bias='unbalanced', bias_p=1.0),
        )
        for values in bad:
            with self.assertRaises(ConfigError):
                resolve_config(ExperimentConfig(**values))

    def test_online_variant(self):
        config = resolve_config(ExperimentConfig(variant=ONLINE_VARIANT,
                                                 K=4, max_depth=5))
        self.assertEqual((config.Q, config.K, config.q),
                         (DEFAULT_TREES, 1, DEFAULT_TREES))
        self.assertEqual(config_to_online_params(config).max_depth, 5)
        with self.assertRaises(ConfigError):
            config_to_plan(config, 100)
        with self.assertRaises(ConfigError):
            resolve_config(ExperimentConfig(variant=ONLINE_VARIANT, lam=0.0))

    def test_sweepable_tree_settings(self):
        for name in ('max_leaves', 'max_depth', 'stream_fraction', 'bias'):
            self.assertIn(name, SWEEPABLE)
        self.assertNotIn('n', SWEEPABLE)

    def test_resolved_n_overrides(self):
        config = resolve_config(ExperimentConfig(variant='moon', f=0.5),
                                n=30)
        self.assertEqual(config.m, 15)


class TestConversions(unittest.TestCase):
    def test_plan_round_trip(self):
        config = resolve_config(ExperimentConfig(variant='blb', K=5, q=4,
                                                 m=50, seed=17, n=1000))
        plan = config_to_plan(config, 1000)
        self.assertEqual(plan, ResamplePlan('blb', 17, 1000, 20, m=50, K=5,
                                            q=4, lam=1.0))
        back = plan_to_config(plan, config)
        self.assertEqual(config_to_plan(back, 1000), plan)
        self.assertEqual(plan_to_config(ResamplePlan('standard', 0, 10, 2))
                         .variant, 'seq')
        par = ExperimentConfig(variant='par')
        self.assertEqual(plan_to_config(ResamplePlan('standard', 0, 10, 2),
                                        par).variant, 'par')

    def test_tree_params(self):
        params = config_to_tree_params(ExperimentConfig(mtry=0))
        self.assertIsNone(params.mtry)
        self.assertEqual(params.max_leaves, 500)
        params = config_to_tree_params(ExperimentConfig(mtry=3,
                                                        split_mode='ert'))
        self.assertEqual((params.mtry, params.split_mode), (3, 'ert'))

    def test_online_params(self):
        params = config_to_online_params(ExperimentConfig(Q=7))
        self.assertEqual(params.Q, 7)
        self.assertIsNone(params.rho)
        self.assertEqual(params.max_depth, DEFAULT_ONLINE_DEPTH)
        params = config_to_online_params(ExperimentConfig(Q=7, rho=0.2,
                                                          max_depth=4))
        self.assertEqual((params.rho, params.max_depth), (0.2, 4))

    def test_config_items(self):
        items = dict(config_items(ExperimentConfig(vi=True)))
        self.assertEqual(items['vi'], 'true')
        self.assertEqual(items['err_forest'], 'true')
        self.assertEqual(items['n'], '100000')


if __name__ == '__main__':
    unittest.main()
