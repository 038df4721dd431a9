from ..base import SimulationCommand
from ... import uxs


class Command(SimulationCommand):
    help = (
        'Check that every sequence of a sequences file is integral on every '
        'corpus graph up to its size, from every start.')

    def add_arguments(self, parser):
        super(Command, self).add_arguments(parser)
        parser.add_argument('--corpus', required=True)
        parser.add_argument('--sequences', required=True)

    def simulate(self, **options):
        graphs = self.get_corpus(options)
        with open(options['sequences']) as sequence_file:
            sequences = uxs.parse_sequences(sequence_file.read())
        violated = False
        for sequence in sequences:
            failures = uxs.verify_uxs(sequence, graphs)
            for index, start, uncovered in failures:
                self.stdout.write(
                    'k={0} graph {1} start {2}: {3} uncovered edges'.format(
                        sequence.target_size, index, start, len(uncovered)))
            if failures:
                violated = True
            else:
                self.stdout.write('k={0}: integral on {1} graphs'.format(
                    sequence.target_size,
                    len(graphs.graphs(max_nodes=sequence.target_size))))
        return violated
