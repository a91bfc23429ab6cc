#-------------------------------------------------------------------------------
# bigforest: cli/harness.py
#
# Harness - the experiment commands behind scripts/bigforest.py: dataset
# generation, training, streaming, benchmark sweeps and prediction
#
# This code is in the public domain
#-------------------------------------------------------------------------------
import logging
import os
import sys
import time

import numpy as np
import pandas as pd

from ..common.exceptions import EstimateUnavailableError
from ..common.utils import config_assert, derive_seed, derive_generator
from ..data.csvfile import (
    load_csv, read_schema, write_csv, write_schema, dataset_schema,
    infer_schema, iter_rows)
from ..data.simulate import (
    SimulationSpec, simulate_weston, permute_unbalanced, permute_xbiases)
from ..eval.report import (
    evaluate, evaluate_online, report_record, format_table)
from ..forest.forest import train
from ..forest.forestfile import save_forest, load_forest
from ..online.checkpoint import save_checkpoint
from ..online.forest import onrf_init, onrf_update
from .config import (
    resolve_config, config_items, config_to_plan, config_to_tree_params,
    config_to_online_params, parse_value, ONLINE_VARIANT, SWEEPABLE)


log = logging.getLogger('bigforest.cli')

# Keys of the random streams the harness derives from the master seed.
_TEST_SET_STREAM = 1
_BIAS_STREAM = 2
_STREAM_SUBSAMPLING = 3


class Harness(object):
    """ Runs experiment commands for one ExperimentConfig.

        Accessible attributes:

            config:
                the ExperimentConfig (resolved per command, once the number
                of training rows is known)

            output:
                text stream human-readable results are written to
    """
    def __init__(self, config, output=None):
        self.config = config
        self.output = output or sys.stdout

    def load_data(self):
        """ (train Dataset, test Dataset or None) for the configured source,
            with the configured row ordering applied to the training set.
        """
        ds, test_ds = self._load_sources()
        return self._apply_bias(ds, self.config), test_ds

    def cmd_generate(self):
        """ Write the simulated (and reordered) dataset to config.output,
            with its schema next to it.
        """
        c = resolve_config(self.config)
        config_assert(c.source == 'simulate',
            'generate needs source = simulate, got %r' % (c.source,))
        ds, _ = self.load_data()
        write_csv(ds, c.output)
        schema_path = c.schema or c.output + '.schema'
        write_schema(dataset_schema(ds), schema_path)
        size = os.path.getsize(c.output)
        self._emitline('wrote %d rows (%d bytes) to %s' % (
            len(ds), size, c.output))
        self._emitline('schema: %s' % schema_path)
        return len(ds), size

    def cmd_train(self):
        """ Train the configured variant, save the model, evaluate it and
            emit the report. Returns the EvalReport.
        """
        config_assert(self.config.variant != ONLINE_VARIANT,
            'the online variant is run by the stream command')
        ds, test_ds = self.load_data()
        report, config, forest = self._train_and_evaluate(ds, test_ds,
                                                          self.config)
        save_forest(forest, config.model)
        self._emitline('model: %s (%d trees)' % (config.model, len(forest)))
        self._emitline(format_table(report, forest.feature_names))
        self._append_records([report_record(report, config_items(config))],
                             config.report)
        return report

    def cmd_stream(self):
        """ Feed the training rows one at a time to an online forest,
            emitting the running out-of-bag estimate at every checkpoint,
            then evaluate it and append its report record. Returns the final
            OnlineForest.
        """
        ds, test_ds = self.load_data()
        report, c, forest = self._stream_and_evaluate(
            ds, test_ds, self.config._replace(variant=ONLINE_VARIANT),
            checkpoints=True)

        summary = forest.oob_summary()
        self._emitline('streamed %d of %d rows into %d trees '
                       '(max depth %d, %d leaves)' % (
                           forest.n_updates, len(ds), len(forest),
                           forest.max_depth(), forest.n_leaves()))
        self._emitline('out-of-bag error: %s' % self._online_oob_text(forest))
        if summary.n_draws:
            self._emitline('zero Poisson draws: %.4f' %
                           summary.zero_draw_fraction)
        if test_ds is not None:
            self._emitline('errTest: %s' % (
                '%.6f' % report.err_test.rate if report.err_test is not None
                else 'unavailable'))
        self._emitline('train seconds: %.3f' % report.train_seconds)
        self._emitline('checkpoint: %s' % c.checkpoint)
        self._append_records([report_record(report, config_items(c))],
                             c.report)
        return forest

    def cmd_bench(self):
        """ Train and evaluate once per value of the swept setting and per
            repeat, appending one record per run. The online variant is
            streamed instead of trained. Returns the records.
        """
        c = self.config
        config_assert(c.sweep in SWEEPABLE,
            'bench needs sweep = one of %s, got %r' % (
                ', '.join(SWEEPABLE), c.sweep))
        texts = [v for v in c.values.split(',') if v.strip()]
        config_assert(texts, 'bench needs a non-empty list of values')
        values = [parse_value(c.sweep, v) for v in texts]

        base, test_ds = self._load_sources()
        # bias -> reordered training set
        ordered = {}
        records = []
        for value in values:
            cell = c._replace(**{c.sweep: value})
            if c.sweep in ('K', 'q'):
                cell = cell._replace(Q=0)
            elif c.sweep == 'f':
                cell = cell._replace(m=0)
            elif c.sweep == 'm':
                cell = cell._replace(f=0.0)
            cell = resolve_config(cell, len(base))
            if cell.bias not in ordered:
                ordered[cell.bias] = self._apply_bias(base, cell)
            ds = ordered[cell.bias]

            for repeat in range(c.repeats):
                if cell.variant == ONLINE_VARIANT:
                    report, resolved, _ = self._stream_and_evaluate(
                        ds, test_ds, cell)
                else:
                    report, resolved, _ = self._train_and_evaluate(
                        ds, test_ds, cell)
                record = report_record(report, config_items(resolved))
                record['repeat'] = repeat
                records.append(record)
                self._emitline('%s=%s repeat %d: errForest %s, '
                               'BDerrForest %s, errTest %s, %s leaves/tree, '
                               '%s s' % (
                    c.sweep, value, repeat, record['err_forest'] or '-',
                    record['bd_err_forest'] or '-',
                    record['err_test'] or '-', record['mean_leaves'],
                    record['train_seconds']))
        self._append_records(records, c.report)
        return records

    def cmd_predict(self):
        """ Apply the model in config.model to the rows of config.source and
            write one predicted class name per row to config.output.
        """
        c = self.config
        forest = load_forest(c.model)
        ds = self._load_csv(c.source)
        config_assert(ds.n_features == forest.n_features,
            'model expects %d features, %s has %d' % (
                forest.n_features, c.source, ds.n_features))
        predicted = forest.predict_batch(ds.features, workers=c.workers)
        names = np.array(forest.class_names, dtype=object)
        pd.DataFrame({'prediction': names[predicted] if len(ds) else []}) \
            .to_csv(c.output, index=False)
        self._emitline('wrote %d predictions to %s' % (len(ds), c.output))
        return predicted

    #-------------------------------- PRIVATE --------------------------------#

    def _train_and_evaluate(self, ds, test_ds, config):
        config = resolve_config(config, len(ds))
        plan = config_to_plan(config, len(ds))
        forest = train(ds, plan, config_to_tree_params(config),
                       workers=config.workers)
        report = evaluate(forest, ds, test_ds,
                          with_err_forest=config.err_forest,
                          with_vi=config.vi, vi_seed=config.seed,
                          workers=config.workers)
        return report, config, forest

    def _stream_and_evaluate(self, ds, test_ds, config, checkpoints=False):
        """ Stream the rows of ds into a fresh online forest and evaluate it.
            train_seconds covers the updates only. With checkpoints, the
            forest is saved every checkpoint_every rows and at the end.
        """
        c = resolve_config(config, len(ds))
        ranges = np.tile([c.range_lo, c.range_hi], (ds.n_features, 1))
        forest = onrf_init(config_to_online_params(c), ranges,
                           n_classes=ds.n_classes)

        keep = np.ones(len(ds), dtype=bool)
        if c.stream_fraction < 1:
            rng = derive_generator(c.seed, _STREAM_SUBSAMPLING)
            keep = rng.random(len(ds)) < c.stream_fraction

        paused = 0.0
        started = time.perf_counter()
        for i, (x, y) in enumerate(iter_rows(ds)):
            if not keep[i]:
                continue
            onrf_update(forest, x, y)
            if checkpoints and c.checkpoint_every and \
                    forest.n_updates % c.checkpoint_every == 0:
                mark = time.perf_counter()
                save_checkpoint(forest, c.checkpoint)
                self._emitline('%d rows: out-of-bag error %s' % (
                    forest.n_updates, self._online_oob_text(forest)))
                paused += time.perf_counter() - mark
        seconds = time.perf_counter() - started - paused
        log.info('streamed %d rows into %d trees in %.3f seconds',
                 forest.n_updates, len(forest), seconds)
        if checkpoints:
            save_checkpoint(forest, c.checkpoint)

        report = evaluate_online(forest, test_ds, train_seconds=seconds,
                                 workers=c.workers)
        return report, c, forest

    def _load_sources(self):
        """ (train Dataset, test Dataset or None) as loaded, before any row
            reordering.
        """
        c = self.config
        if c.source == 'simulate':
            ds = simulate_weston(SimulationSpec(n=c.n, seed=c.seed),
                                 workers=c.workers)
        else:
            ds = self._load_csv(c.source)

        test_ds = None
        if c.test:
            test_ds = self._load_csv(c.test)
        elif c.test_n > 0:
            test_ds = simulate_weston(SimulationSpec(
                n=c.test_n, seed=derive_seed(c.seed, _TEST_SET_STREAM)),
                workers=c.workers)
        return ds, test_ds

    def _load_csv(self, path):
        schema = (read_schema(self.config.schema) if self.config.schema
                  else infer_schema(path))
        loaded = load_csv(path, schema)
        if loaded.dropped:
            log.info('%s: dropped %d rows with missing values',
                     path, loaded.dropped)
        return loaded.dataset

    def _apply_bias(self, ds, c):
        if c.bias == 'unbalanced':
            return permute_unbalanced(ds, c.bias_p,
                                      seed=derive_seed(c.seed, _BIAS_STREAM))
        if c.bias == 'xbiases':
            return permute_xbiases(ds, c.parts)
        return ds

    def _online_oob_text(self, forest):
        try:
            return '%.6f' % forest.oob_estimate().rate
        except EstimateUnavailableError:
            return 'unavailable'

    def _append_records(self, records, path):
        if not path or not records:
            return
        frame = pd.DataFrame(records)
        header = not os.path.exists(path) or os.path.getsize(path) == 0
        frame.to_csv(path, mode='a', header=header, index=False)
        log.info('appended %d records to %s', len(records), path)

    def _emitline(self, s=''):
        self.output.write(str(s).rstrip() + '\n')
