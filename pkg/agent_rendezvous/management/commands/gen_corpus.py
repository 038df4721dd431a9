from ..base import SimulationCommand
from ...settings import sim_settings
from ... import corpus


class Command(SimulationCommand):
    help = (
        'Write every connected topology up to a size, with sampled port '
        'labelings and the named families, as a corpus file.')

    def add_arguments(self, parser):
        super(Command, self).add_arguments(parser)
        parser.add_argument(
            '--max-nodes', type=int, default=None,
            help='largest graph size (default: CORPUS_MAX_NODES)')
        parser.add_argument(
            '--labelings', type=int, default=None,
            help='port labelings per topology '
            '(default: LABELINGS_PER_TOPOLOGY)')
        parser.add_argument('--output', help='corpus file (default: stdout)')

    def simulate(self, **options):
        max_nodes = options['max_nodes']
        labelings = options['labelings']
        generated = corpus.generate_corpus(
            sim_settings.CORPUS_MAX_NODES if max_nodes is None else max_nodes,
            sim_settings.LABELINGS_PER_TOPOLOGY if labelings is None
            else labelings,
            self.get_seed(options))
        with self.open_output(options['output']) as output:
            output.write(generated.serialize() + '\n')
        if options['output']:
            self.stderr.write('{0} graphs, sha256 {1}'.format(
                len(generated), generated.content_hash))
        return False
