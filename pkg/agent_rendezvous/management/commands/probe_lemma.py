from ..base import SimulationCommand, integer_list
from ... import probes
from ... import renderers
from ... import schedulers
from ... import serializers
from ... import sweeps


class Command(SimulationCommand):
    help = (
        'Run rendezvous on corpus graphs and check the synchronization '
        'claims on the annotated traces, one TSV row per run and claim.')

    columns = list(serializers.ProbeRowSerializer().fields)

    def add_arguments(self, parser):
        super(Command, self).add_arguments(parser)
        parser.add_argument('--corpus', required=True)
        self.add_provider_arguments(parser)
        self.add_scheduler_arguments(parser, many=True)
        self.add_engine_arguments(parser)
        parser.add_argument(
            '--claim', action='append', choices=probes.CLAIMS,
            help='claims to check, repeatable (default: all)')
        parser.add_argument('--labels', type=integer_list, default=[1, 2])
        parser.add_argument(
            '--starts', type=integer_list, default=[0, 1])
        parser.add_argument(
            '--i', type=int, default=1,
            help='piece offset of the fence-piece claim')
        parser.add_argument(
            '--horizon', type=int, default=None,
            help='fence offset the claims are checked at '
            '(default: graph size plus the shorter label horizon)')
        parser.add_argument('--max-nodes', type=int, default=None)
        parser.add_argument('--output', help='TSV file (default: stdout)')

    def simulate(self, **options):
        if len(options['labels']) != 2 or len(options['starts']) != 2:
            raise self.usage_error('--labels and --starts take two values')
        claims = options['claim'] or list(probes.CLAIMS)
        provider = self.get_provider(options)
        runs = list(sweeps.scheduler_runs(
            self.get_scheduler_names(options), options['seeds'],
            first_seed=self.get_seed(options)))
        rows = []
        keyed_results = []
        for index, entry in enumerate(self.get_corpus(options)):
            graph = entry.graph
            if (options['max_nodes'] is not None and
                    graph.node_count > options['max_nodes']):
                continue
            for claim in claims:
                for name, seed in runs:
                    report = probes.run_probe(
                        graph, tuple(options['labels']),
                        schedulers.get_scheduler(name, seed=seed), claim,
                        provider, starts=tuple(options['starts']),
                        cap=options['cap'], i=options['i'],
                        horizon=options['horizon'],
                        **self.get_engine_options(options))
                    keyed_results.append((
                        (sweeps.graph_id(index, entry), claim, name),
                        report.result))
                    rows.append(dict(
                        graph_id=sweeps.graph_id(index, entry),
                        claim=claim, scheduler=name, seed=seed,
                        status=report.result.status,
                        checkpoint=report.result.checkpoint,
                        detail=report.result.detail))
        with self.open_output(options['output']) as output:
            output.write(renderers.TSVRenderer().render(
                serializers.ProbeRowSerializer(rows, many=True).data,
                renderer_context={'header': self.columns}).decode('utf-8'))
        summary = probes.summarize(result for _, result in keyed_results)
        self.stderr.write(', '.join(
            '{0}: {1}'.format(status, count)
            for status, count in summary.items()))
        unreached = probes.unreached_configurations(keyed_results)
        for graph_id, claim, name in unreached:
            self.stderr.write(
                'Checkpoint never reached: {0} {1} under {2}'.format(
                    graph_id, claim, name))
        return summary[probes.VIOLATION] > 0 or bool(unreached)
