#!/usr/bin/env python
#-------------------------------------------------------------------------------
# scripts/bigforest.py
#
# Command-line harness of bigforest: generate data, train and evaluate forest
# variants, stream into online forests, run benchmark sweeps and predict
#
# This code is in the public domain
#-------------------------------------------------------------------------------
import argparse
import logging
import sys
import traceback

# For running from development directory. It should take precedence over the
# installed bigforest.
sys.path.insert(0, '.')


from bigforest import __version__
from bigforest.common.exceptions import ForestError
from bigforest.cli.config import (
    CONFIG_FIELDS, read_config_file, build_config, parse_value)
from bigforest.cli.harness import Harness


SCRIPT_DESCRIPTION = 'Random forests for big data: resampling variants, ' \
                     'out-of-bag estimates and online forests'
VERSION_STRING = '%%(prog)s: based on bigforest %s' % __version__

COMMANDS = ('generate', 'train', 'stream', 'bench', 'predict')


def main(stream=None):
    argparser = argparse.ArgumentParser(
            usage='usage: %(prog)s <command> [options]',
            description=SCRIPT_DESCRIPTION,
            prog='bigforest.py')
    argparser.add_argument('command',
            choices=COMMANDS,
            help='One of: %s' % ', '.join(COMMANDS))
    argparser.add_argument('-v', '--version',
            action='version', version=VERSION_STRING)
    argparser.add_argument('-c', '--config',
            action='store', dest='config_file', metavar='<file>',
            help='Read settings from a key = value file; flags override it')
    argparser.add_argument('--verbose',
            action='store_true', dest='verbose',
            help='Log debugging messages')
    argparser.add_argument('--traceback',
            action='store_true', dest='show_traceback',
            help='Dump the Python traceback on ForestError exceptions from '
                 'bigforest')
    settings = argparser.add_argument_group('settings')
    for name, kind, default, help_text in CONFIG_FIELDS:
        settings.add_argument('--%s' % name,
                action='store', dest=name, default=None,
                metavar='<%s>' % kind.__name__,
                help="%s (default: %s)" % (help_text, default))

    args = argparser.parse_args()

    logger = logging.getLogger('bigforest')
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter('%(name)s: %(message)s'))
    logger.addHandler(handler)
    logger.setLevel(logging.DEBUG if args.verbose else logging.INFO)

    try:
        file_values = (read_config_file(args.config_file)
                       if args.config_file else None)
        flag_values = {}
        for name, _, _, _ in CONFIG_FIELDS:
            text = getattr(args, name)
            if text is not None:
                flag_values[name] = parse_value(name, text)
        config = build_config(file_values, flag_values)

        harness = Harness(config, stream or sys.stdout)
        getattr(harness, 'cmd_%s' % args.command)()
    except (ForestError, OSError) as ex:
        sys.stdout.flush()
        sys.stderr.write('bigforest error: %s\n' % ex)
        if args.show_traceback:
            traceback.print_exc()
        sys.exit(1)


#-------------------------------------------------------------------------------
if __name__ == '__main__':
    main()
