import os

from ..base import SimulationCommand, integer_list
from ... import rendezvous
from ... import serializers
from ... import sweeps


class Command(SimulationCommand):
    help = (
        'Run every label pair from every ordered pair of starts on every '
        'corpus graph under the chosen schedulers, as a TSV cost table.')

    columns = list(serializers.RendezvousRowSerializer().fields)

    def add_arguments(self, parser):
        super(Command, self).add_arguments(parser)
        parser.add_argument('--corpus', required=True)
        self.add_provider_arguments(parser)
        self.add_scheduler_arguments(parser, many=True)
        self.add_engine_arguments(parser)
        parser.add_argument(
            '--labels', type=integer_list, default=[1, 2, 3, 5, 12])
        parser.add_argument('--max-nodes', type=int, default=None)
        parser.add_argument(
            '--algorithm', default='rv', choices=rendezvous.ALGORITHMS)
        parser.add_argument(
            '--workers', type=int, default=None,
            help='worker processes (default: WORKERS)')
        parser.add_argument('--output', help='TSV file (default: stdout)')
        parser.add_argument(
            '--traces', help='directory for counterexample traces')

    def simulate(self, **options):
        tasks = sweeps.rendezvous_tasks(
            self.get_corpus(options), options['labels'],
            self.get_scheduler_names(options), options['seeds'],
            self.get_provider(options), cap=options['cap'],
            max_nodes=options['max_nodes'], algorithm=options['algorithm'],
            first_seed=self.get_seed(options),
            **self.get_engine_options(options))
        results = sweeps.run_tasks(
            sweeps.run_rendezvous_task, tasks, workers=options['workers'])
        with self.open_output(options['output']) as output:
            sweeps.write_table(results, output, self.columns)
        self.write_counterexamples(results, options['traces'])
        return any(result.violation for result in results)

    def write_counterexamples(self, results, directory):
        violations = [result for result in results if result.violation]
        for number, result in enumerate(violations):
            if directory is None:
                self.stderr.write('Counterexample: {0}'.format(
                    dict(result.row)))
                continue
            if not os.path.isdir(directory):
                os.makedirs(directory)
            path = os.path.join(
                directory, 'counterexample-{0}.jsonl'.format(number))
            with open(path, 'wb') as trace_file:
                trace_file.write(result.trace)
            self.stderr.write('Counterexample trace written to {0}'.format(path))
