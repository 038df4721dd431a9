from ..base import SimulationCommand, integer_list
from ...settings import PHASE_TWO_MODES
from ... import renderers
from ... import replay
from ... import schedulers
from ... import serializers
from ... import sgl


class Command(SimulationCommand):
    help = (
        'Run algorithm SGL for a team of labelled agents on one graph and '
        'write the JSON run report.')

    def add_arguments(self, parser):
        super(Command, self).add_arguments(parser)
        self.add_graph_arguments(parser)
        self.add_provider_arguments(parser)
        self.add_scheduler_arguments(parser)
        self.add_engine_arguments(parser)
        parser.add_argument(
            '--labels', type=integer_list, required=True,
            help='agent labels, e.g. 1,3,8')
        parser.add_argument(
            '--starts', type=integer_list, default=None,
            help='start nodes in label order (default: 0, 1, ...)')
        parser.add_argument(
            '--values', default=None,
            help='comma separated initial values (default: the labels)')
        parser.add_argument(
            '--phase-two-mode', choices=PHASE_TWO_MODES, default=None,
            help='(default: PHASE_TWO_MODE)')
        parser.add_argument(
            '--max-nodes', type=int, default=None,
            help='largest map an explorer considers (default: EST_MAX_NODES)')
        parser.add_argument('--report', help='report file (default: stdout)')
        parser.add_argument('--trace', help='trace file (JSON lines)')

    def simulate(self, **options):
        labels = options['labels']
        starts = options['starts'] or list(range(len(labels)))
        values = (
            options['values'].split(',') if options['values'] is not None
            else labels)
        if not len(labels) == len(starts) == len(values):
            raise self.usage_error(
                '--labels, --starts and --values need the same length')
        report = sgl.run_sgl(
            self.get_graph(options), zip(labels, starts, values),
            schedulers.get_scheduler(
                options['scheduler'], seed=self.get_seed(options)),
            self.get_provider(options), cap=options['cap'],
            phase_two_mode=options['phase_two_mode'],
            max_nodes=options['max_nodes'],
            **self.get_engine_options(options))
        if options['trace']:
            with self.open_output(options['trace']) as output:
                output.write(
                    replay.render_trace(report.trace).decode('utf-8'))
        with self.open_output(options['report']) as output:
            output.write(renderers.JSONLinesRenderer().render(
                [serializers.SGLReportSerializer(report).data]
            ).decode('utf-8'))
        return report.nonterminated or not report.correct
