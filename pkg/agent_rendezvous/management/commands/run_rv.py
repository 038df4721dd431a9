import json

from ..base import SimulationCommand, integer_list
from ... import rendezvous
from ... import replay
from ... import schedulers


class Command(SimulationCommand):
    help = (
        'Run two labelled agents on one graph until they meet, print the '
        'outcome and optionally write the replayable trace.')

    def add_arguments(self, parser):
        super(Command, self).add_arguments(parser)
        self.add_graph_arguments(parser)
        self.add_provider_arguments(parser)
        self.add_scheduler_arguments(parser)
        self.add_engine_arguments(parser)
        parser.add_argument(
            '--labels', type=integer_list, default=[1, 2],
            help='the two agent labels, e.g. 1,2')
        parser.add_argument(
            '--starts', type=integer_list, default=[0, 1],
            help='the two start nodes, e.g. 0,1')
        parser.add_argument(
            '--algorithm', default='rv', choices=rendezvous.ALGORITHMS)
        parser.add_argument('--trace', help='trace file (JSON lines)')

    def simulate(self, **options):
        if len(options['labels']) != 2 or len(options['starts']) != 2:
            raise self.usage_error('--labels and --starts take two values')
        graph = self.get_graph(options)
        first, second = options['labels']
        outcome = rendezvous.run_rendezvous(
            graph, first, second, tuple(options['starts']),
            schedulers.get_scheduler(
                options['scheduler'], seed=self.get_seed(options)),
            cap=options['cap'], provider=self.get_provider(options),
            algorithm=options['algorithm'],
            **self.get_engine_options(options))
        if options['trace']:
            with self.open_output(options['trace']) as output:
                output.write(
                    replay.render_trace(outcome.trace).decode('utf-8'))
        self.stdout.write(json.dumps({
            'met': outcome.met,
            'total_cost': outcome.total_cost,
            'costs': {str(label): cost for label, cost in outcome.costs.items()},
            'bound': None if outcome.bound is None else str(outcome.bound),
            'bound_exceeded': outcome.bound_exceeded,
            'events': len(outcome.trace),
        }, sort_keys=True))
        return not outcome.met or outcome.bound_exceeded
