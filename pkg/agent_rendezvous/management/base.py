"""
Shared plumbing for the simulator's management commands.
"""

import argparse
import contextlib
import os

from django.core.management import base

from rest_framework import exceptions

from ..settings import sim_settings
from .. import corpus
from .. import graphs
from .. import schedulers
from .. import serializers
from .. import uxs

# Exit status for counterexamples and property violations
VIOLATION = 1
# Exit status for bad invocations and unreadable input
USAGE = 2


def integer_list(value):
    """
    Parse ``"1,2,3"`` into integers, for argparse ``type=``.
    """
    try:
        return [int(item) for item in value.split(',') if item.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(
            'expected comma separated integers, got {0!r}'.format(value))


class SimulationCommand(base.BaseCommand):
    """
    Run ``simulate()`` and turn domain errors into command errors.

    Subclasses return ``True`` from ``simulate()`` when a property was
    violated.
    """

    def add_arguments(self, parser):
        parser.add_argument(
            '--seed', type=int, default=None,
            help='seed for every pseudo-random choice (default: SEED)')

    def add_provider_arguments(self, parser):
        parser.add_argument(
            '--provider', default='constant1',
            help='a sequences file written by find_uxs, or a toy length '
            'shape: {0}'.format(', '.join(sorted(uxs.TOY_SHAPES))))

    def add_engine_arguments(self, parser):
        parser.add_argument(
            '--cap', type=int, default=None,
            help='maximum number of events per run (default: STEP_CAP)')
        parser.add_argument('--move-budget', type=int, default=None)
        parser.add_argument('--wake-budget', type=int, default=None)
        parser.add_argument('--fairness-budget', type=int, default=None)

    def add_scheduler_arguments(self, parser, many=False):
        if many:
            parser.add_argument(
                '--schedulers', default='all',
                help='comma separated scheduler names or "all"')
            parser.add_argument(
                '--seeds', type=int, default=1,
                help='runs per seeded scheduler')
        else:
            parser.add_argument(
                '--scheduler', default='round_robin',
                choices=schedulers.scheduler_names())

    def add_graph_arguments(self, parser):
        parser.add_argument(
            '--graph', help='a single graph file')
        parser.add_argument(
            '--corpus', help='a corpus file, with --index to pick one graph')
        parser.add_argument('--index', type=int, default=0)

    def handle(self, *args, **options):
        self.verbosity = options.get('verbosity', 1)
        try:
            violated = self.simulate(**options)
        except exceptions.ValidationError as exc:
            raise base.CommandError(
                serializers.format_errors(exc.detail), returncode=USAGE)
        except exceptions.ParseError as exc:
            raise base.CommandError(str(exc.detail), returncode=USAGE)
        except exceptions.APIException as exc:
            raise base.CommandError(str(exc.detail), returncode=VIOLATION)
        except (IOError, OSError) as exc:
            raise base.CommandError(str(exc), returncode=USAGE)
        if violated:
            raise base.CommandError(
                'Property violations found.', returncode=VIOLATION)

    def usage_error(self, message):
        return base.CommandError(message, returncode=USAGE)

    def simulate(self, **options):
        raise NotImplementedError(
            '`simulate()` must be implemented.')  # pragma: no cover

    # Inputs

    def get_seed(self, options):
        return sim_settings.SEED if options['seed'] is None else options['seed']

    def get_provider(self, options):
        value = options['provider']
        if os.path.exists(value):
            return uxs.load_provider(value)
        return uxs.ToySequenceProvider(value)

    def get_engine_options(self, options):
        return dict(
            move_budget=options['move_budget'],
            wake_budget=options['wake_budget'],
            fairness_budget=options['fairness_budget'])

    def get_scheduler_names(self, options):
        if options['schedulers'] == 'all':
            return schedulers.scheduler_names()
        names = [
            name.strip() for name in options['schedulers'].split(',')
            if name.strip()]
        unknown = sorted(set(names) - set(schedulers.scheduler_names()))
        if unknown:
            raise exceptions.ValidationError(
                {'schedulers': ['unknown schedulers: {0}'.format(
                    ', '.join(unknown))]})
        return names

    def get_corpus(self, options):
        if not options.get('corpus'):
            raise exceptions.ValidationError(
                {'corpus': ['a corpus file is required']})
        return corpus.load_corpus(options['corpus'])

    def get_graph(self, options):
        if options.get('graph'):
            with open(options['graph']) as graph_file:
                return graphs.parse(graph_file.read())
        entries = self.get_corpus(options).entries
        if not 0 <= options['index'] < len(entries):
            raise exceptions.ValidationError(
                {'index': ['the corpus has {0} graphs'.format(len(entries))]})
        return entries[options['index']].graph

    # Outputs

    @contextlib.contextmanager
    def open_output(self, path):
        """
        ``path``, or the command's stdout when no path is given.
        """
        if not path or path == '-':
            yield self.stdout
            return
        with open(path, 'w') as output:
            yield output
