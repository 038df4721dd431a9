from ...settings import PHASE_TWO_MODES
from ... import serializers
from ... import sweeps
from .sweep_rv import Command as SweepCommand


def teams(value):
    """
    ``"1,2;3,5,8"`` as label tuples.
    """
    return [
        tuple(int(label) for label in team.split(','))
        for team in value.split(';') if team.strip()]


class Command(SweepCommand):
    help = (
        'Run SGL for every team on every corpus graph under the chosen '
        'schedulers and check outputs against the ground truth.')

    columns = list(serializers.SGLRowSerializer().fields)

    def add_arguments(self, parser):
        super(SweepCommand, self).add_arguments(parser)
        parser.add_argument('--corpus', required=True)
        self.add_provider_arguments(parser)
        self.add_scheduler_arguments(parser, many=True)
        self.add_engine_arguments(parser)
        parser.add_argument(
            '--teams', type=teams, default=[(1, 2), (1, 2, 3)],
            help='semicolon separated label lists, e.g. "1,2;3,5,8"')
        parser.add_argument('--max-nodes', type=int, default=None)
        parser.add_argument(
            '--phase-two-mode', choices=PHASE_TWO_MODES, default=None)
        parser.add_argument(
            '--workers', type=int, default=None,
            help='worker processes (default: WORKERS)')
        parser.add_argument('--output', help='TSV file (default: stdout)')
        parser.add_argument(
            '--traces', help='directory for counterexample traces')

    def simulate(self, **options):
        tasks = sweeps.sgl_tasks(
            self.get_corpus(options), options['teams'],
            self.get_scheduler_names(options), options['seeds'],
            self.get_provider(options), cap=options['cap'],
            max_nodes=options['max_nodes'],
            phase_two_mode=options['phase_two_mode'],
            first_seed=self.get_seed(options),
            **self.get_engine_options(options))
        results = sweeps.run_tasks(
            sweeps.run_sgl_task, tasks, workers=options['workers'])
        with self.open_output(options['output']) as output:
            sweeps.write_table(results, output, self.columns)
        self.write_counterexamples(results, options['traces'])
        return any(result.violation for result in results)
