"""
Exploration with a stationary token.
"""

import fractions

from agent_rendezvous import corpus
from agent_rendezvous import est
from agent_rendezvous import exceptions
from agent_rendezvous import tests


class RealExplorationTest(tests.SimulationTestCase):
    """
    Explorations that start at the token's node.
    """

    def assertExplores(self, graph, home):
        result, sim = est.run_est(
            graph, home, max_nodes=graph.node_count + 1)
        self.assertEqual(result.mode, est.REAL, 'Wrong exploration mode')
        self.assertTrue(
            est.isomorphic_rooted(result.map, result.home, graph, home),
            'The map of {0!r} from {1} is wrong'.format(graph, home))
        self.assertEqual(
            sim.agent(est.EXPLORER).node, home,
            'The explorer must end at the token')
        self.assertEqual(
            result.cost, sim.agent(est.EXPLORER).cost,
            'The exploration cost is the explorer cost')
        self.assertEqual(
            result.equivalences, [],
            'Hypotheses that no walk tells apart: {0!r}'.format(
                result.equivalences))
        return result

    def test_small_graphs(self):
        """
        Every start of a few small graphs gives a rooted isomorphic map.
        """
        for graph in (self.edge, self.path, self.triangle,
                      corpus.star_graph(4)):
            for home in range(graph.node_count):
                self.assertExplores(graph, home)

    def test_oriented_cycle(self):
        """
        Cycles need walks long enough to tell sizes apart.
        """
        result = self.assertExplores(corpus.cycle_graph(4), 0)
        self.assertEqual(result.map.node_count, 4, 'Wrong cycle size')

    def test_log(self):
        """
        The log records one observation per move.
        """
        result, sim = est.run_est(self.path, 0, max_nodes=4)
        self.assertEqual(
            len(result.log), result.cost, 'One log record per move')
        self.assertFalse(result.aborted, 'Real explorations never abort')

    def test_serialize_map(self):
        """
        Maps are written in the graph format with their provenance.
        """
        result, _ = est.run_est(self.edge, 0, max_nodes=3)
        text = est.serialize_map(result)
        self.assertTrue(
            text.startswith('# est mode=real'), 'Missing provenance comment')
        self.assertIn('graph 2\n', text, 'Missing graph header')


class VirtualExplorationTest(tests.SimulationTestCase):
    """
    Explorations after meeting the token inside an edge.
    """

    def test_triangle(self):
        """
        The map is the graph itself, whether or not the token arrived first.
        """
        edge = self.triangle.edges()[0]
        result, _ = est.run_est_virtual(
            self.triangle, edge, fractions.Fraction(1, 2), max_nodes=5)
        self.assertTrue(
            est.isomorphic_rooted(result.map, None, self.triangle, None),
            'Wrong map')
        if result.mode == est.VIRTUAL:
            self.assertEqual(
                result.token_edge, edge, 'Wrong token edge')
        else:
            self.assertTrue(
                result.aborted, 'A real map after a virtual start is an abort')

    def test_path(self):
        """
        Subdividing a path edge still gives back the path.
        """
        edge = self.path.edges()[1]
        result, _ = est.run_est_virtual(
            self.path, edge, fractions.Fraction(1, 3), max_nodes=5,
            same_direction=True)
        self.assertEqual(
            result.map.node_count, 3, 'The virtual node must be removed')
        self.assertTrue(
            est.isomorphic_rooted(result.map, None, self.path, None),
            'Wrong map')

    def test_every_edge_of_small_graphs(self):
        """
        Meetings at a third and at the middle of every edge, both ways.
        """
        small = corpus.generate_corpus(4, 3, 0)
        for graph in small.graphs():
            for edge in graph.edges():
                for position in (
                        fractions.Fraction(1, 3), fractions.Fraction(1, 2)):
                    for same_direction in (False, True):
                        with self.subTest(
                                graph=graph, edge=edge, position=position,
                                same_direction=same_direction):
                            result, _ = est.run_est_virtual(
                                graph, edge, position,
                                max_nodes=graph.node_count + 2,
                                same_direction=same_direction)
                            self.assertEqual(
                                result.map.node_count, graph.node_count,
                                'The virtual node must be removed')
                            self.assertTrue(
                                est.isomorphic_rooted(
                                    result.map, None, graph, None),
                                'Wrong map')
                            self.assertEqual(
                                result.equivalences, [],
                                'Hypotheses no walk tells apart')


class RootedIsomorphismTest(tests.SimulationTestCase):
    """
    Port-preserving isomorphism with a marked node.
    """

    def test_relabeled(self):
        """
        Renumbering nodes keeps the rooted structure.
        """
        relabeled = self.path.relabel([2, 1, 0])
        self.assertTrue(
            est.isomorphic_rooted(self.path, 0, relabeled, 2),
            'The renumbered path should match')

    def test_root_matters(self):
        """
        An end of a path is not its middle.
        """
        self.assertFalse(
            est.isomorphic_rooted(self.path, 0, self.path, 1),
            'Different roots should not match')

    def test_ports_matter(self):
        """
        Same topology with other port numbers does not match.
        """
        self.assertFalse(
            est.isomorphic_rooted(
                corpus.cycle_graph(3), 0, self.triangle, 0),
            'Port numbers must be kept')
        self.assertFalse(
            est.isomorphic_rooted(self.path, 0, self.triangle, 0),
            'Different sizes never match')


class ExplorationCoreTest(tests.SimulationTestCase):
    """
    Misuse of the exploration core.
    """

    def test_result_before_finish(self):
        """
        A map is only available once exploration is finished.
        """
        core = est.Exploration(3)
        core.begin(1)
        with self.assertRaises(exceptions.ProtocolViolation):
            core.result()

    def test_observation_without_move(self):
        """
        Observations answer a pending move.
        """
        core = est.Exploration(3)
        core.begin(1)
        with self.assertRaises(exceptions.ProtocolViolation):
            core.observe(est.Observation(0, 1, False))
