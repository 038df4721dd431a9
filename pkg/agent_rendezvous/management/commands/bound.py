from ..base import SimulationCommand
from ... import bounds
from ... import renderers
from ... import serializers
from ... import uxs


class Command(SimulationCommand):
    help = (
        'Print the rendezvous cost bound for a graph size and label length '
        'as a decimal integer, followed by the starred quantities.')

    def add_arguments(self, parser):
        super(Command, self).add_arguments(parser)
        parser.add_argument('--n', type=int, required=True, help='graph size')
        parser.add_argument(
            '--m', type=int, required=True, help='binary label length')
        parser.add_argument(
            '--p', default='constant1',
            help='a sequences file, or a toy length shape: {0}'.format(
                ', '.join(sorted(uxs.TOY_SHAPES))))

    def simulate(self, **options):
        options['provider'] = options['p']
        provider = self.get_provider(options)
        bound = bounds.compute_pi(
            options['n'], options['m'], provider.length, with_table=True)
        self.stdout.write(str(bound.pi))
        self.stdout.write(renderers.TSVRenderer().render(
            serializers.BoundRowSerializer(bound.table, many=True).data,
            renderer_context={'header': ['k'] + list(bounds.STARRED)},
        ).decode('utf-8'))
        return False
