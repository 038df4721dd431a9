"""
The management commands and the console script.
"""

import io
import json
import os
import shutil
import tempfile

from django.core import management

from agent_rendezvous import bounds
from agent_rendezvous import cli
from agent_rendezvous import corpus
from agent_rendezvous import graphs
from agent_rendezvous import tests
from agent_rendezvous import uxs
from agent_rendezvous.management import base


class CommandTestCase(tests.SimulationTestCase):
    """
    Commands run against files in a scratch directory.
    """

    def setUp(self):
        super(CommandTestCase, self).setUp()
        self.directory = tempfile.mkdtemp()
        self.addCleanup(shutil.rmtree, self.directory)
        self.graph_path = self.write_file('edge.graph', graphs.serialize(self.edge))

    def write_file(self, name, content):
        path = os.path.join(self.directory, name)
        with open(path, 'w') as output:
            output.write(content)
        return path

    def call(self, name, *args, **options):
        stdout = io.StringIO()
        management.call_command(
            name, *args, stdout=stdout, stderr=io.StringIO(), **options)
        return stdout.getvalue()


class CommandTest(CommandTestCase):
    """
    Outputs and exit statuses.
    """

    def test_bound(self):
        """
        The bound comes first, then one row per index.
        """
        lines = self.call('bound', '--n=2', '--m=1').splitlines()
        self.assertEqual(
            lines[0],
            str(bounds.compute_pi(
                2, 1, uxs.ToySequenceProvider('constant1').length)),
            'Wrong bound')
        self.assertEqual(
            lines[1].split('\t'), ['k'] + list(bounds.STARRED),
            'Wrong table header')
        self.assertEqual(len(lines), 15, 'One row per index up to N')

    def test_run_rv(self):
        """
        The outcome is one JSON object.
        """
        outcome = json.loads(self.call('run_rv', graph=self.graph_path))
        self.assertTrue(outcome['met'], 'The agents did not meet')
        self.assertEqual(outcome['total_cost'], 1, 'Wrong total cost')
        self.assertEqual(outcome['events'], 3, 'Wrong event count')
        self.assertFalse(outcome['bound_exceeded'], 'The bound was exceeded')

    def test_trace_replays(self):
        """
        A written trace replays identically.
        """
        trace_path = os.path.join(self.directory, 'run.jsonl')
        self.call('run_rv', graph=self.graph_path, trace=trace_path)
        self.assertEqual(
            self.call('replay', trace_path), 'identical: 3 events\n',
            'Wrong replay result')

    def test_run_sgl(self):
        """
        The report is written as one JSON line.
        """
        report = json.loads(self.call(
            'run_sgl', '--labels=1,2', graph=self.graph_path,
            phase_two_mode='elide'))
        self.assertTrue(report['correct'], 'Wrong outputs')
        self.assertEqual(
            report['outputs']['1']['team_size'], 2, 'Wrong team size')

    def test_gen_corpus(self):
        """
        The corpus is written to stdout by default.
        """
        self.assertEqual(
            self.call('gen_corpus', '--max-nodes=2', '--labelings=1'),
            corpus.generate_corpus(2, 1, 0).serialize() + '\n',
            'Wrong corpus')

    def test_usage_error(self):
        """
        Bad invocations exit with the usage status.
        """
        with self.assertRaises(management.CommandError) as context:
            self.call('run_rv', '--labels=1', graph=self.graph_path)
        self.assertEqual(
            context.exception.returncode, base.USAGE, 'Wrong exit status')

    def test_invalid_input(self):
        """
        Validation errors are reported by source.
        """
        with self.assertRaises(management.CommandError) as context:
            self.call('run_rv', '--starts=0,0', graph=self.graph_path)
        self.assertEqual(
            context.exception.returncode, base.USAGE, 'Wrong exit status')

    def test_missing_file(self):
        """
        Unreadable inputs exit with the usage status.
        """
        with self.assertRaises(management.CommandError) as context:
            self.call('run_rv', graph=os.path.join(self.directory, 'none'))
        self.assertEqual(
            context.exception.returncode, base.USAGE, 'Wrong exit status')

    def test_violation(self):
        """
        Runs that do not meet exit with the violation status.
        """
        with self.assertRaises(management.CommandError) as context:
            self.call('run_rv', '--cap=1', graph=self.graph_path)
        self.assertEqual(
            context.exception.returncode, base.VIOLATION,
            'Wrong exit status')


class ConsoleScriptTest(tests.SimulationTestCase):
    """
    Dashed command names.
    """

    def test_command_argv(self):
        """
        Only the command name is translated.
        """
        self.assertEqual(
            cli.command_argv(['agent-rendezvous', 'sweep-rv', '--seeds=2']),
            ['agent-rendezvous', 'sweep_rv', '--seeds=2'],
            'Wrong command name')
        self.assertEqual(
            cli.command_argv(['agent-rendezvous', '--help']),
            ['agent-rendezvous', '--help'], 'Options are left alone')


class CorpusCommandTest(CommandTestCase):
    """
    Commands reading a corpus file.
    """

    def setUp(self):
        """
        A corpus of the edge and the three node path.
        """
        super(CorpusCommandTest, self).setUp()
        self.corpus_path = self.write_file('corpus.txt', corpus.GraphCorpus([
            corpus.CorpusEntry(self.edge, 'edge'),
            corpus.CorpusEntry(self.path, 'path')]).serialize())

    def test_find_and_verify(self):
        """
        Found sequences verify on the corpus they were found for.
        """
        sequences_path = os.path.join(self.directory, 'sequences.txt')
        self.call(
            'find_uxs', '--k=2,3', corpus=self.corpus_path,
            output=sequences_path)
        self.assertEqual(
            self.call(
                'verify_uxs', corpus=self.corpus_path,
                sequences=sequences_path),
            'k=2: integral on 1 graphs\nk=3: integral on 2 graphs\n',
            'Wrong verification')

    def test_verify_failure(self):
        """
        A sequence missing edges is a violation.
        """
        sequences_path = self.write_file('sequences.txt', 'uxs 3 1\n0\n')
        with self.assertRaises(management.CommandError) as context:
            self.call(
                'verify_uxs', corpus=self.corpus_path,
                sequences=sequences_path)
        self.assertEqual(
            context.exception.returncode, base.VIOLATION,
            'Wrong exit status')

    def test_sweep_rv(self):
        """
        One row per ordered start pair of the graphs kept.
        """
        lines = self.call(
            'sweep_rv', '--labels=1,2', '--schedulers=round_robin',
            '--max-nodes=2', corpus=self.corpus_path).splitlines()
        self.assertEqual(
            lines[0].split('\t')[:3], ['graph_id', 'n', 'L1'],
            'Wrong table header')
        self.assertEqual(len(lines), 3, 'One row per start pair')

    def test_sweep_sgl(self):
        """
        Every team run is correct.
        """
        lines = self.call(
            'sweep_sgl', '--teams=1,2', '--schedulers=round_robin',
            '--max-nodes=2', '--phase-two-mode=elide',
            corpus=self.corpus_path).splitlines()
        self.assertEqual(len(lines), 2, 'One row for the edge')
        row = dict(zip(lines[0].split('\t'), lines[1].split('\t')))
        self.assertEqual(row['correct'], 'true', 'Wrong outputs')
