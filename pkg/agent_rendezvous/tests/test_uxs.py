"""
Exploration sequence search, certification and providers.
"""

from rest_framework import exceptions as drf_exceptions

from agent_rendezvous import corpus
from agent_rendezvous import exceptions
from agent_rendezvous import graphs
from agent_rendezvous import tests
from agent_rendezvous import uxs

# Covers every edge of the ascending-port triangle from each start
TRIANGLE_SEQUENCE = uxs.ExplorationSequence(3, [0, 1, 1])


class IntegralityTest(tests.SimulationTestCase):
    """
    Routes induced by increments.
    """

    def test_induced_route(self):
        """
        Exit ports follow ``(entry + increment) mod degree``.
        """
        route = uxs.induce_route(TRIANGLE_SEQUENCE, self.triangle, 0)
        self.assertEqual(route.nodes, [0, 1, 2, 0], 'Wrong visited nodes')
        self.assertEqual(route.exit_ports, [0, 1, 0], 'Wrong exit ports')

    def test_integral_from_every_start(self):
        """
        A covering sequence is integral from each start.
        """
        for start in range(3):
            self.assertTrue(
                uxs.is_integral(
                    TRIANGLE_SEQUENCE, self.triangle, start).integral,
                'Not integral from {0}'.format(start))

    def test_uncovered_witness(self):
        """
        A short sequence reports an uncovered edge.
        """
        check = uxs.is_integral([0], self.path, 0)
        self.assertFalse(check.integral, 'One step cannot cover the path')
        self.assertEqual(
            check.uncovered, graphs.Edge(1, 1, 2, 0), 'Wrong uncovered edge')


class SearchTest(tests.SimulationTestCase):
    """
    Sequence search and verification against a corpus.
    """

    def setUp(self):
        """
        All graphs on up to three nodes.
        """
        super(SearchTest, self).setUp()
        self.corpus = corpus.generate_corpus(3, 1, seed=0)

    def test_shortest_for_the_edge(self):
        """
        One step explores the only two-node graph.
        """
        found = uxs.find_uxs(self.corpus, 2, search_budget=10000)
        self.assertEqual(found.increments, (0,), 'Not the shortest sequence')
        self.assertEqual(
            found.certified_against, self.corpus.content_hash,
            'The corpus hash was not recorded')

    def test_found_sequence_verifies(self):
        """
        Found sequences are integral on every small enough corpus graph.
        """
        found = uxs.find_uxs(self.corpus, 3, search_budget=200000)
        self.assertEqual(
            uxs.verify_uxs(found, self.corpus), [],
            'The found sequence leaves edges uncovered')

    def test_verify_reports_failures(self):
        """
        Failures name the graph, the start and an uncovered edge.
        """
        failures = uxs.verify_uxs(
            uxs.ExplorationSequence(3, [0]), self.corpus)
        self.assertTrue(failures, 'A single step cannot explore three nodes')
        index, start, edge = failures[0]
        self.assertEqual(
            self.corpus.entries[index].graph.node_count, 3,
            'The edge graph is explored by one step')

    def test_budget(self):
        """
        An empty budget fails loudly.
        """
        with self.assertRaises(exceptions.BudgetExhausted):
            uxs.find_uxs(self.corpus, 3, search_budget=0)


class ProviderTest(tests.SimulationTestCase):
    """
    Length functions and sequence providers.
    """

    def test_toy_shapes(self):
        """
        Toy providers have the named length function.
        """
        linear = uxs.ToySequenceProvider('linear')
        self.assertEqual(linear.increments(3), (0, 0, 0), 'Wrong increments')
        self.assertEqual(self.provider.length(9), 1, 'Wrong constant length')
        with self.assertRaises(drf_exceptions.ValidationError):
            uxs.ToySequenceProvider('quadratic')

    def test_length_function_checks(self):
        """
        Tables must be non-decreasing and P(0) is undefined.
        """
        with self.assertRaises(drf_exceptions.ValidationError):
            uxs.LengthFunction({1: 3, 2: 2})
        with self.assertRaises(exceptions.UndefinedLength):
            uxs.LengthFunction({1: 3})(2)
        with self.assertRaises(exceptions.UndefinedLength):
            self.provider.length(0)

    def test_sparse_table_error(self):
        """
        A decrease is reported against the previous key in the table.
        """
        with self.assertRaises(drf_exceptions.ValidationError) as context:
            uxs.LengthFunction({1: 5, 4: 3})
        self.assertEqual(
            str(context.exception.detail['lengths'][0]),
            'P must be non-decreasing, P(4) < P(1)', 'Wrong keys reported')

    def test_certified_padding(self):
        """
        Missing sizes reuse the previous sequence and short ones are padded.
        """
        provider = uxs.CertifiedSequenceProvider([
            uxs.ExplorationSequence(1, [0, 1]),
            uxs.ExplorationSequence(3, [1])])
        self.assertEqual(provider.increments(2), (0, 1), 'Wrong reuse')
        self.assertEqual(provider.increments(3), (1, 1), 'Wrong padding')
        self.assertEqual(
            provider.increments(7), (1, 1), 'Wrong extension beyond k=3')
        self.assertEqual(provider.length(5), 2, 'Wrong length function')

    def test_config(self):
        """
        Run headers carry enough to rebuild the provider.
        """
        provider = uxs.CertifiedSequenceProvider([TRIANGLE_SEQUENCE])
        rebuilt = uxs.provider_from_config(uxs.provider_config(provider))
        self.assertEqual(
            rebuilt.content_hash, provider.content_hash,
            'Rebuilt certified provider differs')
        toy = uxs.provider_from_config(uxs.provider_config(self.provider))
        self.assertEqual(toy.name, 'constant1', 'Rebuilt toy provider differs')


class SequenceFormatTest(tests.SimulationTestCase):
    """
    The ``uxs <k> <P>`` file format.
    """

    def test_parse(self):
        """
        Records may span lines and keep their certification.
        """
        sequences = uxs.parse_sequences(
            '# certified_against abc\nuxs 2 1\n0\nuxs 3 3 0\n1 1\n')
        self.assertEqual(
            sequences,
            [uxs.ExplorationSequence(2, [0]), TRIANGLE_SEQUENCE],
            'Wrong parsed sequences')
        self.assertEqual(
            sequences[1].certified_against, 'abc', 'Lost the corpus hash')

    def test_serialize(self):
        """
        One header line and one increments line per sequence.
        """
        self.assertEqual(
            uxs.serialize_sequences([TRIANGLE_SEQUENCE]),
            'uxs 3 3\n0 1 1\n', 'Wrong sequence text')

    def test_truncated(self):
        """
        Too few increments is a positioned parse error.
        """
        with self.assertRaises(exceptions.GraphParseError) as context:
            uxs.parse_sequences('uxs 2 3\n0 1\n')
        self.assertEqual(context.exception.line, 1, 'Wrong error line')
