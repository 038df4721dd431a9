"""
Exploration with a stationary token.

The explorer keeps every map hypothesis of bounded size that agrees with
what it has seen so far, walks to make the smallest one more specific or to
tell it apart from the next one, and stops back at the token once a single
complete hypothesis remains.  The token is the only thing that makes the
home node recognizable.
"""

import collections
import fractions
import logging

from networkx.algorithms import isomorphism

from .settings import sim_settings
from . import engine
from . import exceptions
from . import graphs
from . import schedulers

logger = logging.getLogger(__name__)

HOME = 0
UNASSIGNED = (-1, -1)

REAL = 'real'
VIRTUAL = 'virtual'

EXPLORER = 1
TOKEN = 2

Observation = collections.namedtuple(
    'Observation', ['entry_port', 'degree', 'token'])
ObservationRecord = collections.namedtuple(
    'ObservationRecord', ['exit_port', 'entry_port', 'degree', 'token'])

EstResult = collections.namedtuple('EstResult', [
    'map', 'home', 'position', 'log', 'pruned', 'equivalences', 'mode',
    'aborted', 'token_edge', 'cost'])
EstResult.__doc__ = """
A recovered map with the token's node ``home`` and the explorer's node
``position`` in it.  ``token_edge`` is the physical edge a virtual
exploration started on.
"""


class Hypothesis(object):
    """
    A partial map grown from the home node, with the explorer's position.

    ``ports`` maps ``(node, port)`` to ``(neighbour, entry port)`` for the
    ports whose far end is already decided.
    """

    def __init__(self, degrees, ports, position):
        self.degrees = tuple(degrees)
        self.ports = ports
        self.position = position
        self._key = None

    @property
    def node_count(self):
        return len(self.degrees)

    @property
    def complete(self):
        return len(self.ports) == sum(self.degrees)

    def signature(self, target):
        node, entry = target
        return Observation(entry, self.degrees[node], node == HOME)

    def canonical_order(self):
        """
        Nodes in breadth-first order from home, ports taken in order.
        """
        order = [HOME]
        seen = {HOME}
        for node in order:
            for port in range(self.degrees[node]):
                target = self.ports.get((node, port))
                if target is not None and target[0] not in seen:
                    seen.add(target[0])
                    order.append(target[0])
        return order

    @property
    def key(self):
        if self._key is None:
            order = self.canonical_order()
            index = {node: position for position, node in enumerate(order)}
            rows = tuple(
                tuple(
                    (index[target[0]], target[1]) if target is not None
                    else UNASSIGNED
                    for target in (
                        self.ports.get((node, port))
                        for port in range(self.degrees[node])))
                for node in order)
            self._key = (
                tuple(self.degrees[node] for node in order), rows,
                index[self.position])
        return self._key

    def moved(self, position):
        return type(self)(self.degrees, self.ports, position)

    def joined(self, port, node, entry, degrees=None):
        ports = dict(self.ports)
        ports[(self.position, port)] = (node, entry)
        ports[(node, entry)] = (self.position, port)
        return type(self)(
            self.degrees if degrees is None else degrees, ports, node)

    def successors(self, port, observation, max_nodes):
        """
        The refinements of this hypothesis that explain one observed move.
        """
        target = self.ports.get((self.position, port))
        if target is not None:
            if self.signature(target) == observation:
                yield self.moved(target[0])
            return
        current = self.position
        adjacent = set(
            neighbour for (node, _), (neighbour, _) in self.ports.items()
            if node == current)
        for node in range(self.node_count):
            if node == current or node in adjacent:
                continue
            if (node, observation.entry_port) in self.ports:
                continue
            if self.degrees[node] != observation.degree:
                continue
            if (node == HOME) != observation.token:
                continue
            yield self.joined(port, node, observation.entry_port)
        if not observation.token and self.node_count < max_nodes:
            if observation.entry_port < observation.degree:
                yield self.joined(
                    port, self.node_count, observation.entry_port,
                    degrees=self.degrees + (observation.degree,))

    def _search(self, goal):
        """
        Exit ports of a shortest walk over decided ports to a node accepted
        by ``goal``, followed by the ports ``goal`` returns for that node.
        """
        parents = {self.position: None}
        queue = collections.deque([self.position])
        while queue:
            node = queue.popleft()
            final = goal(node)
            if final is not None:
                ports = []
                while parents[node] is not None:
                    node, port = parents[node]
                    ports.append(port)
                return ports[::-1] + final
            for port in range(self.degrees[node]):
                target = self.ports.get((node, port))
                if target is not None and target[0] not in parents:
                    parents[target[0]] = (node, port)
                    queue.append(target[0])
        return None

    def walk_to_unassigned(self):
        """
        A shortest walk ending with an undecided port.
        """
        def goal(node):
            for port in range(self.degrees[node]):
                if (node, port) not in self.ports:
                    return [port]
            return None
        return self._search(goal)

    def walk_home(self):
        return self._search(lambda node: [] if node == HOME else None)

    def to_graph(self):
        """
        The complete hypothesis as a graph in canonical order, home first.
        """
        order = self.canonical_order()
        index = {node: position for position, node in enumerate(order)}
        graph = graphs.PortLabeledGraph([
            [(index[self.ports[(node, port)][0]], self.ports[(node, port)][1])
             for port in range(self.degrees[node])]
            for node in order])
        return graph, index[self.position]

    def __repr__(self):
        return '<Hypothesis n={0} decided={1}/{2} at {3}>'.format(
            self.node_count, len(self.ports), sum(self.degrees), self.position)


def distinguishing_walk(complete, other):
    """
    Exit ports along which ``other`` either predicts something different
    from the complete hypothesis or reaches an undecided port.

    ``None`` means the two agree on every walk from their positions.
    """
    start = (complete.position, other.position)
    parents = {start: None}
    queue = collections.deque([start])
    while queue:
        pair = queue.popleft()
        first, second = pair
        for port in range(complete.degrees[first]):
            target = complete.ports[(first, port)]
            other_target = other.ports.get((second, port))
            if (other_target is None or
                    complete.signature(target) != other.signature(other_target)):
                ports = [port]
                while parents[pair] is not None:
                    pair, previous = parents[pair]
                    ports.append(previous)
                return ports[::-1]
            following = (target[0], other_target[0])
            if following not in parents:
                parents[following] = (pair, port)
                queue.append(following)
    return None


class Exploration(object):
    """
    Guess-and-verify map construction from observations.

    ``next_port()`` proposes the next exit port, ``observe()`` consumes
    what the explorer saw on arrival.  ``next_port()`` returns ``None``
    once the explorer is home with a single complete hypothesis.
    """

    def __init__(self, max_nodes):
        self.max_nodes = max_nodes
        self.hypotheses = None
        self.log = []
        self.pruned = 0
        self.equivalences = []
        self.pending = None
        self.finished = False

    def begin(self, degree):
        self.hypotheses = [Hypothesis((degree,), {}, HOME)]

    def next_port(self):
        if self.pending is None and not self.finished:
            self.pending = self._plan()
        return self.pending

    def observe(self, observation):
        port = self.pending
        if port is None:
            raise exceptions.ProtocolViolation(
                'Observation without a pending exploration move.')
        self.pending = None
        self.log.append(ObservationRecord(port, *observation))
        survivors = {}
        for hypothesis in self.hypotheses:
            for child in hypothesis.successors(
                    port, observation, self.max_nodes):
                survivors.setdefault(child.key, child)
        if not survivors:
            raise exceptions.HypothesisExhausted(
                'No map of at most {0} nodes explains {1} observations.'.format(
                    self.max_nodes, len(self.log)))
        pruned = len(self.hypotheses) - len(survivors)
        if pruned > 0:
            self.pruned += pruned
            logger.debug(
                'Pruned %s map hypotheses after %s moves, %s remain',
                pruned, len(self.log), len(survivors))
        self.hypotheses = [survivors[key] for key in sorted(survivors)]

    def _plan(self):
        while True:
            smallest = min(
                self.hypotheses,
                key=lambda hypothesis: (hypothesis.node_count, hypothesis.key))
            if not smallest.complete:
                return smallest.walk_to_unassigned()[0]
            for other in self.hypotheses:
                if other is smallest:
                    continue
                walk = distinguishing_walk(smallest, other)
                if walk is not None:
                    return walk[0]
                self._record_equivalence(smallest, other)
                break
            else:
                if smallest.position == HOME:
                    self.finished = True
                    return None
                return smallest.walk_home()[0]

    def _record_equivalence(self, kept, dropped):
        logger.warning(
            'Map hypotheses %r and %r agree on every walk; keeping the first',
            kept, dropped)
        self.equivalences.append((kept.key, dropped.key))
        self.hypotheses = [
            hypothesis for hypothesis in self.hypotheses
            if hypothesis is not dropped]

    def result(self):
        if not self.finished:
            raise exceptions.ProtocolViolation('Exploration is not finished.')
        return self.hypotheses[0].to_graph()


class ExplorationDriver(object):
    """
    Runs an exploration through an agent in the engine.

    In ``real`` mode the token sits at the start node.  In ``virtual`` mode
    the token was met inside an edge and the driver explores the graph with
    a degree-2 node ``w`` inserted there: port 0 of ``w`` faces the node the
    token came from, port 1 the node it was heading to.  A later meeting
    with the token inside that edge is a visit of ``w``; a meeting at a
    node aborts the virtual exploration and restarts a real one there.

    Without a ``token_label`` the token is a fixed marker at ``token_node``.
    """

    def __init__(self, token_label=None, max_nodes=None, token_node=None):
        self.token_label = token_label
        self.token_node = token_node
        self.max_nodes = (
            sim_settings.est_max_nodes if max_nodes is None else max_nodes)
        self.mode = None
        self.core = None
        self.aborted = False
        self.decided_at = None
        self.decision = None
        self.cost_start = None
        self.result = None
        # Virtual mode
        self.token_traversal = None
        self.at_w = False
        self.toward_w = False

    def token_at(self, sim, node):
        if self.token_label is None:
            return node == self.token_node
        token = sim.agent(self.token_label)
        return token.point(sim.graph) == graphs.NodePoint(node)

    @property
    def done(self):
        return self.result is not None

    def start_real(self, sim, agent):
        self.mode = REAL
        self.core = Exploration(self.max_nodes)
        self.core.begin(sim.graph.degree(agent.node))
        self.decided_at = None
        self.at_w = self.toward_w = False
        if self.cost_start is None:
            self.cost_start = agent.cost
        sim.transition(agent.label, exploration=REAL)

    def start_virtual(self, sim, agent):
        self.mode = VIRTUAL
        self.token_traversal = sim.agent(self.token_label).traversal
        self.core = Exploration(self.max_nodes)
        self.core.begin(2)
        self.decided_at = None
        self.at_w = True
        self.toward_w = False
        self.cost_start = agent.cost
        sim.transition(agent.label, exploration=VIRTUAL)

    def _edge_port(self, node):
        """
        Port of the token's edge at one of its endpoints, else ``None``.
        """
        traversal = self.token_traversal
        if node == traversal.origin:
            return traversal.exit_port
        if node == traversal.end:
            return traversal.entry_port
        return None

    def _w_port(self, node):
        return 0 if node == self.token_traversal.origin else 1

    def next_move(self, sim, agent):
        """
        Exit port at the agent's node, or ``None`` once finished.

        Asking again before the agent has moved returns the same port.
        """
        if self.done:
            return None
        if self.decided_at == agent.cost:
            return self.decision
        if self.mode == REAL:
            port = self._next_real(sim, agent)
        else:
            port = self._next_virtual(sim, agent)
        self.decided_at = agent.cost
        self.decision = port
        return port

    def _next_real(self, sim, agent):
        if self.core.pending is not None:
            self.core.observe(Observation(
                agent.last_entry_port, sim.graph.degree(agent.node),
                self.token_at(sim, agent.node)))
        port = self.core.next_port()
        if port is None:
            graph, position = self.core.result()
            self._finish(sim, agent, graph, HOME, position)
        return port

    def _next_virtual(self, sim, agent):
        node = agent.node
        degree = sim.graph.degree(node)
        if self.at_w:
            edge_port = self._edge_port(node)
            if self._w_port(node) != self.core.next_port():
                # The simulated move leaves w the other way: cross back
                return edge_port
            self.at_w = False
            self.core.observe(Observation(edge_port, degree, False))
        elif self.toward_w:
            raise exceptions.ProtocolViolation(
                'Agent {0} crossed the token edge without meeting its '
                'token.'.format(agent.label))
        elif self.core.pending is not None:
            self.core.observe(Observation(agent.last_entry_port, degree, False))
        port = self.core.next_port()
        if port is None:
            raise exceptions.ProtocolViolation(
                'Virtual exploration ended away from its token.')
        self.toward_w = self._edge_port(node) == port
        return port

    def on_token_meeting(self, sim, agent, meeting):
        """
        React to a meeting between the explorer and its token.
        """
        if self.done or self.mode != VIRTUAL:
            return
        if isinstance(meeting.point, graphs.NodePoint):
            logger.debug(
                'Agent %s met its token at node %s, restarting exploration',
                agent.label, meeting.point.node)
            self.aborted = True
            sim.drop_idle_traversal(agent)
            self.start_real(sim, agent)
            return
        if not self.toward_w:
            return
        self.toward_w = False
        self.at_w = True
        self.core.observe(Observation(
            self._w_port(agent.traversal.origin), 2, True))
        if self.core.next_port() is None:
            graph, w = self.core.result()
            neighbour, _ = graph.step(w, self._w_port(agent.traversal.end))
            # Removing w shifts every later node down by one
            self._finish(
                sim, agent, graph.unsubdivide(w), None,
                neighbour - 1 if neighbour > w else neighbour)

    def _finish(self, sim, agent, graph, home, position):
        token_edge = None
        if self.mode == VIRTUAL:
            token_edge = self.token_traversal.edge(sim.graph)
        self.result = EstResult(
            graph, home, position, list(self.core.log), self.core.pruned,
            list(self.core.equivalences), self.mode, self.aborted,
            token_edge, agent.cost - self.cost_start)
        sim.transition(
            agent.label, explored=graph.node_count,
            exploration_cost=self.result.cost)
        logger.debug(
            'Agent %s finished a %s exploration: %r after %s moves',
            agent.label, self.mode, graph, len(self.core.log))


class ExplorationProtocol(engine.Protocol):
    """
    A single explorer and possibly its token, which only finishes its edge.
    """

    name = 'exploration'

    def __init__(self, driver, virtual=False):
        self.driver = driver
        self.virtual = virtual

    def start(self, sim):
        explorer = sim.agent(EXPLORER)
        if self.virtual:
            self.driver.start_virtual(sim, explorer)
        else:
            self.driver.start_real(sim, explorer)

    def next_exit(self, sim, agent):
        if agent.label != EXPLORER:
            return None
        return self.driver.next_move(sim, agent)

    def on_meeting(self, sim, meeting):
        if EXPLORER in meeting.agents and TOKEN in meeting.agents:
            self.driver.on_token_meeting(sim, sim.agent(EXPLORER), meeting)

    def is_done(self, sim):
        return self.driver.done and sim.agent(EXPLORER).traversal is None


def _scheduler(scheduler):
    if scheduler is None:
        return schedulers.RoundRobinScheduler()
    return scheduler


def run_est(graph, home, max_nodes=None, scheduler=None, cap=None):
    """
    Explore ``graph`` with the token fixed at ``home``, where the explorer
    starts.
    """
    driver = ExplorationDriver(max_nodes=max_nodes, token_node=home)
    protocol = ExplorationProtocol(driver)
    sim = engine.Engine(
        graph, [engine.AgentState(EXPLORER, home)], protocol,
        _scheduler(scheduler), step_cap=cap)
    sim.place(EXPLORER)
    protocol.start(sim)
    sim.run()
    return _outcome(sim, driver, graph)


def run_est_virtual(graph, edge, position, max_nodes=None, scheduler=None,
                    cap=None, same_direction=False):
    """
    Explore after meeting the token at ``position`` inside ``edge``.

    The token is traversing ``edge`` from its canonical origin and still
    has to finish it; the explorer traverses the edge the same way when
    ``same_direction``, else the other way.
    """
    forward = engine.Traversal(
        edge.origin, edge.origin_port, edge.end, edge.end_port)
    backward = engine.Traversal(
        edge.end, edge.end_port, edge.origin, edge.origin_port)
    driver = ExplorationDriver(TOKEN, max_nodes=max_nodes)
    protocol = ExplorationProtocol(driver, virtual=True)
    sim = engine.Engine(
        graph,
        [engine.AgentState(EXPLORER, edge.end),
         engine.AgentState(TOKEN, edge.origin)],
        protocol, _scheduler(scheduler), step_cap=cap)
    sim.place(TOKEN, forward, position)
    if same_direction:
        sim.place(EXPLORER, forward, position)
    else:
        sim.place(EXPLORER, backward, 1 - fractions.Fraction(position))
    protocol.start(sim)
    sim.run()
    return _outcome(sim, driver, graph)


def _outcome(sim, driver, graph):
    if not driver.done:
        raise exceptions.ProtocolViolation(
            'Exploration did not finish within {0} events.'.format(
                len(sim.events)))
    logger.info(
        'Explored %r: %s map, cost %s, %s hypotheses pruned',
        graph, driver.result.mode, driver.result.cost, driver.result.pruned)
    return driver.result, sim


def port_digraph_match(first, second):
    return isomorphism.DiGraphMatcher(
        first, second,
        node_match=isomorphism.categorical_node_match('home', False),
        edge_match=isomorphism.categorical_edge_match('port', None))


def isomorphic_rooted(first, first_home, second, second_home):
    """
    Whether a bijection maps ``first_home`` to ``second_home`` and keeps
    every edge with both of its port numbers.
    """
    if first.node_count != second.node_count:
        return False
    if first.edge_count != second.edge_count:
        return False
    return port_digraph_match(
        first.to_port_digraph(first_home),
        second.to_port_digraph(second_home)).is_isomorphic()


def serialize_map(result):
    """
    The recovered map in the graph text format with its provenance.
    """
    comments = [
        'est mode={0} log_length={1} hypotheses_pruned={2}'.format(
            result.mode, len(result.log), result.pruned),
        'home={0} position={1} cost={2}'.format(
            result.home, result.position, result.cost),
    ]
    if result.token_edge is not None:
        comments.append('token_edge={0}'.format(
            ' '.join(str(part) for part in result.token_edge)))
    return graphs.serialize(result.map, comments=comments)

