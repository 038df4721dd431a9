"""
Byte-identical re-execution of recorded traces.
"""

import io

from rest_framework import exceptions as drf_exceptions

from agent_rendezvous import parsers
from agent_rendezvous import rendezvous
from agent_rendezvous import replay
from agent_rendezvous import schedulers
from agent_rendezvous import serializers
from agent_rendezvous import sgl
from agent_rendezvous import tests


class ReplayTest(tests.SimulationTestCase):
    """
    Recording a run and replaying its decisions.
    """

    def record_rendezvous(self, scheduler):
        return replay.render_trace(rendezvous.run_rendezvous(
            self.edge, 1, 2, (0, 1), scheduler, cap=300,
            provider=self.provider).trace)

    def assertReplays(self, recorded):
        result = replay.replay(io.BytesIO(recorded))
        self.assertTrue(result.identical, 'The replay differs')
        self.assertIsNone(result.difference, 'A difference was reported')
        return result

    def test_rendezvous(self):
        """
        A round robin rendezvous replays identically.
        """
        result = self.assertReplays(
            self.record_rendezvous(schedulers.RoundRobinScheduler()))
        self.assertEqual(len(result.trace), 3, 'Wrong replayed trace')

    def test_random_scheduler(self):
        """
        Seeded random decisions are reproduced from the trace alone.
        """
        self.assertReplays(self.record_rendezvous(
            schedulers.get_scheduler('random', seed=3)))

    def test_stalker_avoider(self):
        """
        Capped moves replay as the scheduler requested them.
        """
        self.assertReplays(self.record_rendezvous(
            schedulers.get_scheduler('stalker_avoider')))

    def test_sgl(self):
        """
        SGL traces carry everything needed to re-run the team.
        """
        report = sgl.run_sgl(
            self.edge, [(1, 0, 'a'), (2, 1, 'b')],
            schedulers.RoundRobinScheduler(), self.provider,
            phase_two_mode='elide')
        self.assertReplays(replay.render_trace(report.trace))

    def test_tampered_line(self):
        """
        The first differing line is reported.
        """
        recorded = self.record_rendezvous(schedulers.RoundRobinScheduler())
        tampered = recorded.replace(
            b'"cost_totals":{"1":1,"2":0}', b'"cost_totals":{"1":5,"2":0}')
        self.assertNotEqual(tampered, recorded, 'Nothing was tampered with')
        result = replay.replay(io.BytesIO(tampered))
        self.assertFalse(result.identical, 'The tampering went unnoticed')
        self.assertEqual(result.difference, 4, 'Wrong differing line')

    def test_graph_hash(self):
        """
        Traces whose graph does not match its hash are refused.
        """
        recorded = self.record_rendezvous(schedulers.RoundRobinScheduler())
        trace = serializers.load_trace(
            parsers.JSONLinesParser().parse(recorded.splitlines(True)))
        trace.header['graph_hash'] = '0' * 64
        with self.assertRaises(drf_exceptions.ValidationError):
            replay.rerun(trace)
