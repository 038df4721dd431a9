"""
Port-labeled graph model and text format tests.
"""

import fractions

import networkx

from hypothesis import given
from hypothesis import strategies

from rest_framework import exceptions as drf_exceptions

from agent_rendezvous import exceptions
from agent_rendezvous import graphs
from agent_rendezvous import tests


@strategies.composite
def trees(draw, max_nodes=8):
    """
    Random port-labeled trees, each node hung below an earlier one.
    """
    node_count = draw(strategies.integers(min_value=2, max_value=max_nodes))
    tree = networkx.Graph()
    tree.add_nodes_from(range(node_count))
    for node in range(1, node_count):
        tree.add_edge(
            node, draw(strategies.integers(min_value=0, max_value=node - 1)))
    return graphs.PortLabeledGraph.from_networkx(tree)


class GraphModelTest(tests.SimulationTestCase):
    """
    Construction, validation and stepping.
    """

    def test_step_follows_ports(self):
        """
        Leaving by a port arrives by the symmetric port.
        """
        self.assertEqual(
            self.path.step(1, 1), (2, 0),
            'Wrong neighbor for port 1 of the path middle')
        self.assertEqual(
            self.path.step(2, 0), (1, 1),
            'Ports are not symmetric')

    def test_invalid_port(self):
        """
        Asking for a port beyond the degree raises.
        """
        with self.assertRaises(exceptions.InvalidPort):
            self.path.step(0, 1)

    def test_self_loop_rejected(self):
        """
        Self-loops are not simple graphs.
        """
        with self.assertRaises(drf_exceptions.ValidationError) as context:
            graphs.PortLabeledGraph([[(0, 1), (0, 0)]])
        self.assertIn(
            'self-loop at node 0', [
                str(error) for error in context.exception.detail['adjacency']],
            'Wrong validation message')

    def test_parallel_edge_rejected(self):
        """
        Two edges between the same nodes are not simple graphs.
        """
        with self.assertRaises(drf_exceptions.ValidationError):
            graphs.PortLabeledGraph.from_edges(
                2, [(0, 0, 1, 0), (0, 1, 1, 1)])

    def test_disconnected_rejected(self):
        """
        Every node must be reachable.
        """
        with self.assertRaises(drf_exceptions.ValidationError):
            graphs.PortLabeledGraph.from_edges(
                4, [(0, 0, 1, 0), (2, 0, 3, 0)])

    def test_duplicate_port_rejected(self):
        """
        A port can carry only one edge.
        """
        with self.assertRaises(drf_exceptions.ValidationError):
            graphs.PortLabeledGraph.from_edges(
                3, [(0, 0, 1, 0), (0, 0, 2, 0)])

    def test_edges_are_canonical(self):
        """
        Each undirected edge is listed once from its smaller endpoint.
        """
        self.assertEqual(
            self.path.edges(),
            [graphs.Edge(0, 0, 1, 0), graphs.Edge(1, 1, 2, 0)],
            'Wrong canonical edges')
        self.assertEqual(
            self.path.edge(2, 0), graphs.Edge(1, 1, 2, 0),
            'Edge lookup from the larger endpoint is not canonical')
        self.assertEqual(self.triangle.edge_count, 3, 'Wrong edge count')

    def test_shortest_ports(self):
        """
        Shortest walks are given as exit ports.
        """
        self.assertEqual(
            self.path.shortest_ports(0, 2), [0, 1], 'Wrong shortest walk')
        self.assertEqual(
            self.path.shortest_ports(1, 1), [], 'A node reaches itself')

    def test_subdivide(self):
        """
        A subdivided edge runs through a new degree-2 node.
        """
        edge = self.edge.edges()[0]
        subdivided, middle = self.edge.subdivide(edge)
        self.assertEqual(middle, 2, 'The new node gets the next handle')
        self.assertEqual(
            subdivided.step(0, 0), (2, 0),
            'The origin side does not face port 0 of the new node')
        self.assertEqual(
            subdivided.step(1, 0), (2, 1),
            'The end side does not face port 1 of the new node')
        self.assertSameGraph(
            subdivided.unsubdivide(middle), self.edge,
            'Removing the new node does not restore the graph')

    @given(trees())
    def test_subdivide_every_edge(self, graph):
        """
        Subdividing then removing the new node is the identity.
        """
        for edge in graph.edges():
            subdivided, middle = graph.subdivide(edge)
            self.assertEqual(
                subdivided.degree(middle), 2,
                'The inserted node must have degree 2')
            self.assertEqual(
                subdivided.unsubdivide(middle), graph,
                'Subdivision of {0} is not undone'.format(edge))

    def test_unsubdivide_needs_degree_two(self):
        """
        Only degree-2 nodes can be removed.
        """
        with self.assertRaises(drf_exceptions.ValidationError):
            self.path.unsubdivide(0)

    def test_content_hash(self):
        """
        Equal graphs hash the same and relabeled graphs differ.
        """
        self.assertEqual(
            self.triangle.content_hash,
            graphs.parse(graphs.serialize(self.triangle)).content_hash,
            'Parsing changed the hash')
        self.assertNotEqual(
            self.path.content_hash, self.path.relabel([1, 0, 2]).content_hash,
            'Relabeling did not change the hash')


class PointTest(tests.SimulationTestCase):
    """
    Exact positions on edges.
    """

    def test_endpoints_are_nodes(self):
        """
        Positions 0 and 1 normalize to node points.
        """
        edge = self.edge.edges()[0]
        self.assertEqual(
            graphs.point(edge, 0), graphs.NodePoint(0), 'Wrong origin point')
        self.assertEqual(
            graphs.point(edge, 1), graphs.NodePoint(1), 'Wrong end point')
        self.assertEqual(
            graphs.point(edge, fractions.Fraction(1, 3)),
            graphs.EdgePoint(edge, fractions.Fraction(1, 3)),
            'Interior points stay on the edge')

    def test_position_range(self):
        """
        Positions outside the edge are rejected.
        """
        with self.assertRaises(drf_exceptions.ValidationError):
            graphs.point(self.edge.edges()[0], 2)

    def test_canonical_position(self):
        """
        Traversals from the end are measured from the origin.
        """
        edge = self.edge.edges()[0]
        self.assertEqual(
            graphs.canonical_position(edge, 1, fractions.Fraction(1, 4)),
            fractions.Fraction(3, 4), 'Wrong position from the end')
        self.assertEqual(
            graphs.canonical_position(edge, 0, fractions.Fraction(1, 4)),
            fractions.Fraction(1, 4), 'Wrong position from the origin')


class GraphFormatTest(tests.SimulationTestCase):
    """
    The graph text format.
    """

    def test_serialize(self):
        """
        Header, node lines, then one line per port.
        """
        self.assertEqual(
            graphs.serialize(self.edge, comments=['edge']),
            '# edge\ngraph 2\nv 0 1\nv 1 1\ne 0 0 1 0\ne 1 0 0 0\n',
            'Wrong graph text')

    def test_parse_comments_and_blank_lines(self):
        """
        Comments and blank lines are ignored.
        """
        text = (
            '# a path\n\ngraph 3\nv 0 1\nv 1 2  # middle\nv 2 1\n'
            'e 0 0 1 0\ne 1 0 0 0\ne 1 1 2 0\ne 2 0 1 1\n')
        self.assertSameGraph(graphs.parse(text), self.path, 'Wrong parsed graph')

    def test_duplicate_port_position(self):
        """
        Errors carry the line and column of the offending token.
        """
        text = 'graph 2\nv 0 1\nv 1 1\ne 0 0 1 0\ne 0 0 1 0\n'
        with self.assertRaises(exceptions.GraphParseError) as context:
            graphs.parse(text)
        self.assertEqual(context.exception.line, 5, 'Wrong error line')
        self.assertEqual(context.exception.column, 5, 'Wrong error column')
        self.assertIn(
            'duplicate port', str(context.exception.detail),
            'Wrong error message')

    def test_missing_symmetric_port(self):
        """
        Every port line needs its reverse.
        """
        with self.assertRaises(exceptions.GraphParseError) as context:
            graphs.parse('graph 2\nv 0 1\nv 1 1\ne 0 0 1 0\n')
        self.assertIn(
            'missing symmetric port line', str(context.exception.detail),
            'Wrong error message')

    def test_missing_header(self):
        """
        Text without a header is rejected.
        """
        with self.assertRaises(exceptions.GraphParseError):
            graphs.parse('v 0 1\n')

    def test_invalid_graph_is_a_parse_error(self):
        """
        Well-formed text describing a self-loop is still a parse error.
        """
        with self.assertRaises(exceptions.GraphParseError) as context:
            graphs.parse('graph 1\nv 0 2\ne 0 0 0 1\ne 0 1 0 0\n')
        self.assertIn(
            'self-loop', str(context.exception.detail), 'Wrong error message')
