"""
Asynchronous agent rendezvous tests.
"""

from django import test

from agent_rendezvous import corpus
from agent_rendezvous import graphs
from agent_rendezvous import uxs


class SimulationTestCase(test.SimpleTestCase):
    """
    Common simulator test support.
    """

    longMessage = True
    maxDiff = None

    def setUp(self):
        """
        Small graphs and a toy provider shared by most tests.
        """
        super(SimulationTestCase, self).setUp()
        self.edge = corpus.path_graph(2)
        self.path = corpus.path_graph(3)
        self.triangle = corpus.complete_graph(3)
        self.provider = uxs.ToySequenceProvider('constant1')

    def assertSameGraph(self, first, second, msg=None):
        """
        Compare port-labeled graphs through their text format.
        """
        self.assertEqual(graphs.serialize(first), graphs.serialize(second), msg)
