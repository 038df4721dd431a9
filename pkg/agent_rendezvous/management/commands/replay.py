from ..base import SimulationCommand
from ... import replay


class Command(SimulationCommand):
    help = (
        'Re-execute the decisions of a trace file and check that the new '
        'trace is byte-identical.')

    def add_arguments(self, parser):
        parser.add_argument('trace', help='trace file (JSON lines)')

    def simulate(self, **options):
        with open(options['trace'], 'rb') as trace_file:
            result = replay.replay(trace_file)
        if result.identical:
            self.stdout.write('identical: {0} events'.format(
                len(result.trace)))
            return False
        self.stdout.write('differs at line {0}'.format(result.difference))
        return True
