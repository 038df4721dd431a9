"""
Anonymous port-labeled graphs, in-edge points and the graph text format.

Node handles are simulator-internal integers ``0 .. n-1``; agents only ever
see degrees and port numbers.
"""

import collections
import fractions
import hashlib

import networkx

from rest_framework import exceptions as drf_exceptions

from . import exceptions

Edge = collections.namedtuple('Edge', ['origin', 'origin_port', 'end', 'end_port'])
Edge.__doc__ = """
Undirected edge in canonical orientation: ``origin`` is the endpoint with the
smaller internal handle.
"""


class PortLabeledGraph(object):
    """
    Connected undirected graph with local port numbers at every node.

    ``adjacency[v][p]`` is the pair ``(u, q)``: leaving ``v`` by port ``p``
    arrives at ``u`` by port ``q``.
    """

    def __init__(self, adjacency):
        self.adjacency = tuple(
            tuple((int(u), int(q)) for u, q in ports) for ports in adjacency)
        self.validate()

    @classmethod
    def from_edges(cls, node_count, edges):
        """
        Build from ``(v, p, u, q)`` tuples, one per undirected edge.
        """
        slots = [{} for _ in range(node_count)]
        for v, p, u, q in edges:
            for node, port, other, other_port in ((v, p, u, q), (u, q, v, p)):
                if port in slots[node]:
                    raise drf_exceptions.ValidationError(
                        {'adjacency': ['duplicate port {0} at node {1}'.format(
                            port, node)]})
                slots[node][port] = (other, other_port)
        adjacency = []
        for node, ports in enumerate(slots):
            if sorted(ports) != list(range(len(ports))):
                raise drf_exceptions.ValidationError(
                    {'adjacency': ['ports at node {0} are not 0..{1}'.format(
                        node, len(ports) - 1)]})
            adjacency.append([ports[port] for port in range(len(ports))])
        return cls(adjacency)

    @classmethod
    def from_networkx(cls, graph, port_orders=None):
        """
        Port-label an undirected networkx graph.

        ``port_orders`` maps a node to the list of its neighbours in port
        order; missing nodes use ascending neighbour order.
        """
        nodes = sorted(graph.nodes())
        index = {node: position for position, node in enumerate(nodes)}
        port_orders = port_orders or {}
        orders = []
        for node in nodes:
            order = port_orders.get(node)
            if order is None:
                order = sorted(graph.neighbors(node), key=index.get)
            orders.append([index[neighbor] for neighbor in order])
        adjacency = []
        for v, order in enumerate(orders):
            adjacency.append([(u, orders[u].index(v)) for u in order])
        return cls(adjacency)

    def validate(self):
        errors = []
        n = self.node_count
        if n < 1:
            errors.append('graph has no nodes')
        for v, ports in enumerate(self.adjacency):
            neighbors = set()
            for p, (u, q) in enumerate(ports):
                if not 0 <= u < n:
                    errors.append('port {0} at node {1} leads to unknown node {2}'.format(
                        p, v, u))
                    continue
                if u == v:
                    errors.append('self-loop at node {0}'.format(v))
                if u in neighbors:
                    errors.append('parallel edge between {0} and {1}'.format(v, u))
                neighbors.add(u)
                if not 0 <= q < len(self.adjacency[u]) or self.adjacency[u][q] != (v, p):
                    errors.append('port {0} at node {1} is not symmetric'.format(p, v))
        if not errors and n > 1 and not networkx.is_connected(self.to_networkx()):
            errors.append('graph is not connected')
        if errors:
            raise drf_exceptions.ValidationError({'adjacency': errors})

    @property
    def node_count(self):
        return len(self.adjacency)

    def degree(self, node):
        return len(self.adjacency[node])

    @property
    def max_degree(self):
        return max(len(ports) for ports in self.adjacency)

    def step(self, node, exit_port):
        """
        Traverse the edge at ``exit_port``, returning ``(neighbor, entry_port)``.
        """
        ports = self.adjacency[node]
        if not 0 <= exit_port < len(ports):
            raise exceptions.InvalidPort(
                'exit port {0} at a node of degree {1}'.format(exit_port, len(ports)))
        return ports[exit_port]

    def edge(self, node, port):
        """
        Canonical undirected edge through ``port`` at ``node``.
        """
        other, other_port = self.step(node, port)
        if node < other:
            return Edge(node, port, other, other_port)
        return Edge(other, other_port, node, port)

    def edges(self):
        return [
            Edge(v, p, u, q)
            for v, ports in enumerate(self.adjacency)
            for p, (u, q) in enumerate(ports) if v < u]

    @property
    def edge_count(self):
        return sum(len(ports) for ports in self.adjacency) // 2

    def to_networkx(self):
        graph = networkx.Graph()
        graph.add_nodes_from(range(self.node_count))
        graph.add_edges_from((edge.origin, edge.end) for edge in self.edges())
        return graph

    def to_port_digraph(self, home=None):
        """
        Directed graph with the exit port on every arc and a home marker.
        """
        digraph = networkx.DiGraph()
        for v in range(self.node_count):
            digraph.add_node(v, home=(v == home))
        for v, ports in enumerate(self.adjacency):
            for p, (u, q) in enumerate(ports):
                digraph.add_edge(v, u, port=p)
        return digraph

    def relabel(self, order):
        """
        Renumber nodes so that ``order[i]`` becomes node ``i``.
        """
        index = {old: new for new, old in enumerate(order)}
        return type(self)([
            [(index[u], q) for u, q in self.adjacency[old]] for old in order])

    def subdivide(self, edge):
        """
        Insert a degree-2 node ``w`` inside ``edge``.

        Port 0 of ``w`` faces ``edge.origin`` and port 1 faces ``edge.end``.
        Returns the new graph and the handle of ``w``.
        """
        w = self.node_count
        adjacency = [list(ports) for ports in self.adjacency]
        adjacency[edge.origin][edge.origin_port] = (w, 0)
        adjacency[edge.end][edge.end_port] = (w, 1)
        adjacency.append([
            (edge.origin, edge.origin_port), (edge.end, edge.end_port)])
        return type(self)(adjacency), w

    def unsubdivide(self, node):
        """
        Remove a degree-2 node, joining its two neighbours directly.
        """
        if self.degree(node) != 2:
            raise drf_exceptions.ValidationError(
                {'node': ['only degree-2 nodes can be removed']})
        (a, a_port), (b, b_port) = self.adjacency[node]
        adjacency = [list(ports) for ports in self.adjacency]
        adjacency[a][a_port] = (b, b_port)
        adjacency[b][b_port] = (a, a_port)
        del adjacency[node]
        renumber = [v for v in range(self.node_count) if v != node]
        index = {old: new for new, old in enumerate(renumber)}
        return type(self)([
            [(index[u], q) for u, q in adjacency[old]] for old in renumber])

    def shortest_ports(self, source, target):
        """
        Exit ports of a shortest walk from ``source`` to ``target``.
        """
        parents = {source: None}
        queue = collections.deque([source])
        while queue:
            v = queue.popleft()
            if v == target:
                break
            for p, (u, _) in enumerate(self.adjacency[v]):
                if u not in parents:
                    parents[u] = (v, p)
                    queue.append(u)
        ports = []
        v = target
        while parents[v] is not None:
            v, p = parents[v]
            ports.append(p)
        return ports[::-1]

    @property
    def content_hash(self):
        return hashlib.sha256(serialize(self).encode('utf-8')).hexdigest()

    def __eq__(self, other):
        return (
            isinstance(other, PortLabeledGraph) and
            self.adjacency == other.adjacency)

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash(self.adjacency)

    def __repr__(self):
        return '<{0} n={1} m={2}>'.format(
            type(self).__name__, self.node_count, self.edge_count)


def step(graph, node, exit_port):
    return graph.step(node, exit_port)


class EdgePoint(collections.namedtuple('EdgePoint', ['edge', 'position'])):
    """
    A point of an edge, measured exactly from the edge's canonical origin.

    Positions 0 and 1 are the endpoint nodes; use ``point()`` to get the
    normalized representation in which those compare equal to node points.
    """

    __slots__ = ()

    @property
    def node(self):
        if self.position == 0:
            return self.edge.origin
        if self.position == 1:
            return self.edge.end
        return None


NodePoint = collections.namedtuple('NodePoint', ['node'])


def point(edge, position):
    """
    Normalized point: a ``NodePoint`` at the endpoints, else an ``EdgePoint``.
    """
    position = fractions.Fraction(position)
    if not 0 <= position <= 1:
        raise drf_exceptions.ValidationError(
            {'position': ['edge positions lie in [0, 1]']})
    edge_point = EdgePoint(edge, position)
    if edge_point.node is not None:
        return NodePoint(edge_point.node)
    return edge_point


def canonical_position(edge, origin, fraction):
    """
    Canonical position of a traversal of ``edge`` that started at ``origin``.
    """
    fraction = fractions.Fraction(fraction)
    if origin == edge.origin:
        return fraction
    return 1 - fraction


def serialize(graph, comments=()):
    """
    Render the graph text format: header, node lines, one line per port.
    """
    lines = ['# {0}'.format(comment) for comment in comments]
    lines.append('graph {0}'.format(graph.node_count))
    for v in range(graph.node_count):
        lines.append('v {0} {1}'.format(v, graph.degree(v)))
    for v, ports in enumerate(graph.adjacency):
        for p, (u, q) in enumerate(ports):
            lines.append('e {0} {1} {2} {3}'.format(v, p, u, q))
    return '\n'.join(lines) + '\n'


def _tokens(line):
    """
    Split a line into ``(column, token)`` pairs, dropping comments.
    """
    content = line.split('#', 1)[0]
    tokens = []
    column = 0
    for token in content.split():
        column = content.index(token, column)
        tokens.append((column + 1, token))
        column += len(token)
    return tokens


def _integer(token, line_number, column, name):
    try:
        value = int(token)
    except ValueError:
        raise exceptions.GraphParseError(
            'expected integer {0}, got {1!r}'.format(name, token),
            line=line_number, column=column)
    if value < 0:
        raise exceptions.GraphParseError(
            '{0} must not be negative'.format(name),
            line=line_number, column=column)
    return value


def parse(text, first_line=1):
    """
    Parse the graph text format, raising ``GraphParseError`` with a position.
    """
    node_count = None
    degrees = {}
    ports = {}
    last = (first_line, 1)
    for line_number, line in enumerate(text.splitlines(), first_line):
        tokens = _tokens(line)
        if not tokens:
            continue
        last = (line_number, tokens[0][0])
        column, keyword = tokens[0]
        if node_count is None:
            if keyword != 'graph' or len(tokens) != 2:
                raise exceptions.GraphParseError(
                    "expected header 'graph <n>'", line=line_number, column=column)
            node_count = _integer(tokens[1][1], line_number, tokens[1][0], 'node count')
            if node_count < 1:
                raise exceptions.GraphParseError(
                    'node count must be positive', line=line_number,
                    column=tokens[1][0])
            continue
        if keyword == 'v':
            if len(tokens) != 3:
                raise exceptions.GraphParseError(
                    "expected 'v <id> <deg>'", line=line_number, column=column)
            node = _integer(tokens[1][1], line_number, tokens[1][0], 'node id')
            if node >= node_count:
                raise exceptions.GraphParseError(
                    'node id out of range', line=line_number, column=tokens[1][0])
            if node in degrees:
                raise exceptions.GraphParseError(
                    'duplicate node', line=line_number, column=tokens[1][0])
            degrees[node] = _integer(tokens[2][1], line_number, tokens[2][0], 'degree')
        elif keyword == 'e':
            if len(tokens) != 5:
                raise exceptions.GraphParseError(
                    "expected 'e <v> <p> <u> <q>'", line=line_number, column=column)
            v, p, u, q = (
                _integer(token, line_number, token_column, 'endpoint')
                for token_column, token in tokens[1:])
            for node, token_column in ((v, tokens[1][0]), (u, tokens[3][0])):
                if node not in degrees:
                    raise exceptions.GraphParseError(
                        'undeclared node {0}'.format(node),
                        line=line_number, column=token_column)
            if p >= degrees[v]:
                raise exceptions.GraphParseError(
                    'port {0} exceeds degree of node {1}'.format(p, v),
                    line=line_number, column=tokens[2][0])
            if (v, p) in ports:
                raise exceptions.GraphParseError(
                    'duplicate port', line=line_number, column=tokens[2][0])
            ports[(v, p)] = ((u, q), line_number, column)
        else:
            raise exceptions.GraphParseError(
                'unknown record {0!r}'.format(keyword),
                line=line_number, column=column)
    if node_count is None:
        raise exceptions.GraphParseError(
            "missing header 'graph <n>'", line=last[0], column=last[1])
    if len(degrees) != node_count:
        raise exceptions.GraphParseError(
            'expected {0} node lines, found {1}'.format(node_count, len(degrees)),
            line=last[0], column=last[1])
    for (v, p), ((u, q), line_number, column) in sorted(ports.items()):
        if ports.get((u, q), (None,))[0] != (v, p):
            raise exceptions.GraphParseError(
                'missing symmetric port line for e {0} {1} {2} {3}'.format(v, p, u, q),
                line=line_number, column=column)
    adjacency = []
    for v in range(node_count):
        row = []
        for p in range(degrees[v]):
            if (v, p) not in ports:
                raise exceptions.GraphParseError(
                    'missing port {0} at node {1}'.format(p, v),
                    line=last[0], column=last[1])
            row.append(ports[(v, p)][0])
        adjacency.append(row)
    try:
        return PortLabeledGraph(adjacency)
    except drf_exceptions.ValidationError as exc:
        raise exceptions.GraphParseError(
            '; '.join(str(error) for error in exc.detail['adjacency']),
            line=last[0], column=last[1])
