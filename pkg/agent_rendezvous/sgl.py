"""
Algorithm SGL: travellers, tokens and explorers sharing bags of labels.

Every agent wakes as a traveller and follows the rendezvous route of its
label plus one.  The first meeting with another traveller or a token makes
each traveller either a token, which parks for good, or an explorer, which
maps the graph around its token, walks the route of label one, then sweeps
the graph twice: the first sweep completes its bag, the second hands the
complete bag to every token.
"""

import collections
import logging

from rest_framework import exceptions as drf_exceptions

from .settings import sim_settings
from . import bounds
from . import engine
from . import est
from . import exceptions
from . import graphs
from . import rendezvous
from . import routes
from . import trajectories

logger = logging.getLogger(__name__)

TRAVELLER = 'traveller'
TOKEN = 'token'
EXPLORER = 'explorer'

# Explorer phases
EXPLORE = 'explore'
WALK = 'walk'
FIRST_SWEEP = 'first-sweep'
SECOND_SWEEP = 'second-sweep'
DONE = 'done'

ProblemOutputs = collections.namedtuple(
    'ProblemOutputs', ['team_size', 'leader', 'new_name', 'gossip'])
ProblemOutputs.__doc__ = """
Team size, leader label, new name in ``1 .. team_size`` and the initial
values of all agents in label order.
"""

SGLReport = collections.namedtuple('SGLReport', [
    'outputs', 'correct', 'total_cost', 'costs', 'phase_costs', 'elided',
    'witness', 'cost_bound', 'nonterminated', 'trace'])


def derive_outputs(bag, label):
    """
    The four problem outputs from a complete bag of ``{label: value}``.
    """
    if len(bag) < 2:
        raise exceptions.ProtocolViolation(
            'A complete bag holds at least two agents, got {0}.'.format(
                sorted(bag)))
    if label not in bag:
        raise exceptions.ProtocolViolation(
            'Agent {0} is missing from its own bag.'.format(label))
    labels = sorted(bag)
    return ProblemOutputs(
        len(labels), labels[0], labels.index(label) + 1,
        tuple(bag[other] for other in labels))


def expected_outputs(agents):
    """
    Ground truth outputs of every agent, from ``(label, value)`` pairs.
    """
    bag = dict(agents)
    return collections.OrderedDict(
        (label, derive_outputs(bag, label)) for label in sorted(bag))


def sweep_ports(graph, start):
    """
    Exit ports of a depth-first sweep that crosses every edge once each way
    and returns to ``start``.
    """
    ports = []
    visited = {start}
    used = set()
    # Frames are [node, next port, port leading back to the parent]
    stack = [[start, 0, None]]
    while stack:
        frame = stack[-1]
        node, port, back = frame
        if port >= graph.degree(node):
            stack.pop()
            if back is not None:
                ports.append(back)
            continue
        frame[1] += 1
        if (node, port) in used:
            continue
        neighbour, entry = graph.step(node, port)
        used.add((node, port))
        used.add((neighbour, entry))
        ports.append(port)
        if neighbour in visited:
            ports.append(entry)
        else:
            visited.add(neighbour)
            stack.append([neighbour, 0, entry])
    return ports


class SGLState(object):
    """
    Protocol memory of one agent.
    """

    def __init__(self, label, value):
        self.label = label
        self.role = TRAVELLER
        self.bag = {label: value}
        self.token = None
        self.phase = None
        self.driver = None
        self.exploration = None
        self.map = None
        self.map_position = None
        self.last_exit = None
        self.sweep = None
        self.walk_start = None
        self.walk_bound = None
        self.elided = None
        self.complete = False
        self.final = False
        self.outputs = None
        self.stage = TRAVELLER
        self.stage_start = 0
        self.phase_costs = collections.OrderedDict()

    def enter_stage(self, stage, cost):
        self.phase_costs[self.stage] = (
            self.phase_costs.get(self.stage, 0) + cost - self.stage_start)
        self.stage = stage
        self.stage_start = cost

    def merge(self, bag):
        before = len(self.bag)
        self.bag.update(bag)
        return len(self.bag) != before


class SGLProtocol(engine.Protocol):
    """
    The SGL state machine for every agent of a run.
    """

    name = 'sgl'

    def __init__(self, provider, phase_two_mode=None, max_nodes=None):
        self.provider = provider
        self.phase_two_mode = (
            sim_settings.PHASE_TWO_MODE if phase_two_mode is None
            else phase_two_mode)
        self.max_nodes = max_nodes
        self._bounds = bounds.StarredBounds(provider.length)

    # Engine hooks

    def on_wake(self, sim, agent):
        agent.memory = SGLState(agent.label, agent.value)
        agent.program = routes.compile_rv(agent.label + 1, self.provider)
        sim.transition(agent.label, role=TRAVELLER)

    def next_exit(self, sim, agent):
        state = agent.memory
        if state.role == TRAVELLER:
            return agent.program.next_move(
                agent.last_entry_port, sim.graph.degree(agent.node))
        if state.role == EXPLORER:
            return self._explorer_exit(sim, agent, state)
        return None

    def annotation(self, sim, agent):
        if agent.memory.role == TRAVELLER:
            return agent.program.annotation
        return None

    def on_arrival(self, sim, agent):
        state = agent.memory
        if state.role != EXPLORER or state.last_exit is None:
            return
        node, entry = state.map.step(state.map_position, state.last_exit)
        if (entry != agent.last_entry_port or
                state.map.degree(node) != sim.graph.degree(agent.node)):
            raise exceptions.ProtocolViolation(
                'Agent {0} left its map at node {1}.'.format(
                    agent.label, state.map_position))
        state.map_position = node
        state.last_exit = None

    def on_meeting(self, sim, meeting):
        group = [sim.agent(label) for label in meeting.agents]
        for agent in group:
            state = agent.memory
            if (state.role == EXPLORER and state.phase == EXPLORE and
                    state.token in meeting.agents):
                state.driver.on_token_meeting(sim, agent, meeting)
        self._assign_roles(sim, meeting, group)
        self._exchange(sim, group)

    def is_done(self, sim):
        return all(
            agent.memory is not None and agent.memory.outputs is not None
            for agent in sim.agents.values())

    # Meetings

    def _assign_roles(self, sim, meeting, group):
        travellers = [
            agent for agent in group if agent.memory.role == TRAVELLER]
        if not travellers:
            return
        tokens = sorted(
            agent.label for agent in group if agent.memory.role == TOKEN)
        if tokens:
            for agent in travellers:
                self._become_explorer(sim, agent, tokens[0], meeting)
            return
        if len(travellers) < 2:
            # A lone traveller among explorers carries on
            return
        token = min(travellers, key=lambda agent: agent.label)
        self._become_token(sim, token)
        for agent in travellers:
            if agent is not token:
                self._become_explorer(sim, agent, token.label, meeting)

    def _become_token(self, sim, agent):
        state = agent.memory
        state.role = TOKEN
        state.enter_stage(TOKEN, agent.cost)
        agent.program = None
        sim.drop_idle_traversal(agent)
        sim.transition(agent.label, role=TOKEN)

    def _become_explorer(self, sim, agent, token, meeting):
        state = agent.memory
        state.role = EXPLORER
        state.token = token
        state.phase = EXPLORE
        state.enter_stage(EXPLORE, agent.cost)
        agent.program = None
        sim.drop_idle_traversal(agent)
        state.driver = est.ExplorationDriver(token, max_nodes=self.max_nodes)
        if isinstance(meeting.point, graphs.NodePoint):
            state.driver.start_real(sim, agent)
        else:
            state.driver.start_virtual(sim, agent)
        sim.transition(agent.label, role=EXPLORER, token=token)

    def _exchange(self, sim, group):
        merged = {}
        for agent in group:
            merged.update(agent.memory.bag)
        for agent in group:
            if agent.memory.merge(merged):
                sim.transition(agent.label, bag=len(agent.memory.bag))
        announcing = any(
            agent.memory.role == EXPLORER and
            agent.memory.phase in (SECOND_SWEEP, DONE)
            for agent in group)
        if not announcing:
            return
        for agent in group:
            state = agent.memory
            if state.role == TOKEN and not state.final:
                state.final = True
                self._output(sim, agent)

    def _output(self, sim, agent):
        state = agent.memory
        state.outputs = derive_outputs(state.bag, agent.label)
        sim.transition(agent.label, output=state.outputs._asdict())
        logger.debug('Agent %s output %s', agent.label, state.outputs)

    # Explorers

    def _explorer_exit(self, sim, agent, state):
        while True:
            if state.phase == EXPLORE:
                port = state.driver.next_move(sim, agent)
                if port is not None or not state.driver.done:
                    return port
                self._begin_walk(sim, agent, state)
            elif state.phase == WALK:
                if self._walk_over(sim, agent, state):
                    self._begin_sweep(sim, agent, state, FIRST_SWEEP)
                    continue
                state.last_exit = agent.program.next_move(
                    agent.last_entry_port, sim.graph.degree(agent.node))
                return state.last_exit
            elif state.phase in (FIRST_SWEEP, SECOND_SWEEP):
                if state.sweep:
                    state.last_exit = state.sweep.popleft()
                    return state.last_exit
                if state.phase == FIRST_SWEEP:
                    state.complete = True
                    sim.transition(agent.label, complete=True)
                    self._begin_sweep(sim, agent, state, SECOND_SWEEP)
                    continue
                self._finish(sim, agent, state)
                return None
            else:
                return None

    def _begin_walk(self, sim, agent, state):
        result = state.driver.result
        state.exploration = result
        state.map = result.map
        state.map_position = result.position
        state.last_exit = None
        state.phase = WALK
        state.enter_stage(WALK, agent.cost)
        state.walk_start = agent.cost
        state.walk_bound = bounds.compute_pi(
            result.map.node_count, 1, self.provider.length, bounds=self._bounds)
        agent.program = routes.compile_rv(1, self.provider)
        sim.transition(
            agent.label, phase=WALK, n=result.map.node_count,
            exploration_cost=result.cost)

    def _walk_over(self, sim, agent, state):
        """
        Whether the second phase walk is over.

        Eliding reads the whole engine state, dormant agents and every
        role, which no agent can observe: it is a simulation shortcut that
        only shortens the walk, not part of any agent's own logic.
        """
        performed = agent.cost - state.walk_start
        if performed >= state.walk_bound:
            state.elided = 0
            return True
        if self.phase_two_mode != 'elide':
            return False
        pending = sim.dormant_agents() or any(
            other.memory.role == TRAVELLER for other in sim.agents.values()
            if other.memory is not None)
        if pending:
            return False
        state.elided = state.walk_bound - performed
        return True

    def _begin_sweep(self, sim, agent, state, phase):
        state.phase = phase
        state.enter_stage(phase, agent.cost)
        agent.program = None
        state.sweep = collections.deque(
            sweep_ports(state.map, state.map_position))
        sim.transition(agent.label, phase=phase)

    def _finish(self, sim, agent, state):
        state.phase = DONE
        state.enter_stage(DONE, agent.cost)
        state.final = True
        self._output(sim, agent)
        sim.halt(agent)


def run_sgl(graph, agents, scheduler, provider, cap=None,
            phase_two_mode=None, max_nodes=None, **options):
    """
    Run SGL for ``(label, start, value)`` agents until every agent output.
    """
    agents = list(agents)
    if len(agents) < 2:
        raise drf_exceptions.ValidationError(
            {'agents': ['SGL needs at least two agents']})
    if phase_two_mode is not None and phase_two_mode not in ('exact', 'elide'):
        raise drf_exceptions.ValidationError(
            {'phase_two_mode': ['choose exact or elide']})
    protocol = SGLProtocol(
        provider, phase_two_mode=phase_two_mode, max_nodes=max_nodes)
    sim = engine.Engine(
        graph,
        [engine.AgentState(label, start, value)
         for label, start, value in agents],
        protocol, scheduler, step_cap=cap, **options)
    header = rendezvous.run_header(
        'sgl', sim, provider, scheduler,
        phase_two_mode=protocol.phase_two_mode,
        max_nodes=protocol.max_nodes)
    sim.run()
    return report(sim, protocol, header)


def report(sim, protocol, header):
    """
    Outputs against ground truth, costs and the polynomial witness.
    """
    graph = sim.graph
    truth = expected_outputs(
        (agent.label, agent.value) for agent in sim.agents.values())
    outputs = collections.OrderedDict(
        (label, agent.memory.outputs if agent.memory is not None else None)
        for label, agent in sim.agents.items())
    correct = outputs == truth
    costs = sim.costs()
    phase_costs = collections.OrderedDict()
    elided = collections.OrderedDict()
    exploration_cost = 0
    for label, agent in sim.agents.items():
        state = agent.memory
        if state is None:
            continue
        state.enter_stage(state.stage, agent.cost)
        phase_costs[label] = state.phase_costs
        if state.elided is not None:
            elided[label] = state.elided
        if state.exploration is not None:
            exploration_cost = max(exploration_cost, state.exploration.cost)
    smallest = min(sim.agents)
    witness = collections.OrderedDict([
        ('n', graph.node_count),
        ('m', trajectories.label_length(smallest)),
        ('total_cost', sum(costs.values()))])
    cost_bound = (
        bounds.compute_pi(
            graph.node_count, trajectories.label_length(smallest + 1),
            protocol.provider.length, bounds=protocol._bounds) +
        bounds.compute_pi(
            graph.node_count, 1, protocol.provider.length,
            bounds=protocol._bounds) +
        exploration_cost + 4 * graph.edge_count)
    if not sim.terminated:
        logger.warning('SGL run on %r did not terminate', graph)
    elif not correct:
        logger.warning('SGL run on %r produced wrong outputs', graph)
    logger.info(
        'SGL on %r with %s agents under %s: correct=%s, total cost %s',
        graph, len(sim.agents), header['scheduler'], correct,
        witness['total_cost'])
    return SGLReport(
        outputs, correct, witness['total_cost'], costs, phase_costs, elided,
        witness, cost_bound, not sim.terminated,
        engine.SimTrace.from_engine(sim, header))
