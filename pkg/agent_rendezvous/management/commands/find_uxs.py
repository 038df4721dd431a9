from ..base import SimulationCommand, integer_list
from ... import uxs


class Command(SimulationCommand):
    help = (
        'Search exploration sequences integral on every corpus graph up to '
        'each size, and write them as a sequences file.')

    def add_arguments(self, parser):
        super(Command, self).add_arguments(parser)
        parser.add_argument('--corpus', required=True)
        parser.add_argument(
            '--k', type=integer_list, required=True,
            help='comma separated graph sizes, e.g. 1,2,3')
        parser.add_argument(
            '--budget', type=int, default=None,
            help='search steps per size (default: UXS_SEARCH_BUDGET)')
        parser.add_argument(
            '--restarts', type=int, default=None,
            help='greedy restarts (default: UXS_RESTARTS)')
        parser.add_argument('--output', help='sequences file (default: stdout)')

    def simulate(self, **options):
        graphs = self.get_corpus(options)
        sequences = [
            uxs.find_uxs(
                graphs, k, search_budget=options['budget'],
                seed=self.get_seed(options), restarts=options['restarts'])
            for k in sorted(set(options['k']))]
        with self.open_output(options['output']) as output:
            output.write(uxs.serialize_sequences(sequences))
        return False
