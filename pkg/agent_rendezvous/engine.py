"""
Single-mover discrete-event engine for asynchronous agents.

Each event either wakes a dormant agent or sweeps one agent along its
current edge to a target fraction chosen by the scheduler.  Meetings are
detected exactly on the swept closed interval, excluding the point the
sweep starts from, and at every node the sweep reaches.
"""

import collections
import fractions
import logging

from rest_framework import exceptions as drf_exceptions

from .settings import sim_settings
from . import exceptions
from . import graphs

logger = logging.getLogger(__name__)

DORMANT = 'dormant'
ACTIVE = 'active'
HALTED = 'halted'

UNDECIDED = object()

Wake = collections.namedtuple('Wake', ['agent'])
Move = collections.namedtuple('Move', ['agent', 'target'])


class Traversal(collections.namedtuple(
        'Traversal', ['origin', 'exit_port', 'end', 'entry_port'])):
    """
    A directed traversal of one edge.
    """
    __slots__ = ()

    def edge(self, graph):
        return graph.edge(self.origin, self.exit_port)


Meeting = collections.namedtuple(
    'Meeting', ['point', 'mover', 'agents', 'same_direction'])
Meeting.__doc__ = """
Agents co-located at one point.  ``same_direction`` lists, for in-edge
meetings, the labels of the other agents traversing the edge in the
mover's direction; it is ``None`` at nodes.
"""

Event = collections.namedtuple('Event', [
    'index', 'kind', 'agent', 'forced', 'edge', 'from_fraction',
    'to_fraction', 'meetings', 'transitions', 'costs', 'annotation',
    'requested', 'capped'])
Event.__doc__ = """
One recorded event.  Fractions are measured from the canonical origin of
``edge``; ``requested`` is the scheduler's target as it was asked for,
from the mover's side, and ``capped`` marks moves the move budget
extended to the far endpoint.
"""


class AgentState(object):
    """
    One simulated agent: identity, lifecycle, position and counters.

    While traversing, ``node`` is the origin of the traversal and
    ``fraction`` the progress from it; fraction 0 is the origin node.
    """

    def __init__(self, label, start, value=None):
        self.label = label
        self.start = start
        self.value = label if value is None else value
        self.lifecycle = DORMANT
        self.node = start
        self.traversal = None
        self.fraction = fractions.Fraction(0)
        self.last_entry_port = None
        self.pending_exit = UNDECIDED
        self.pending_annotation = None
        self.annotation = None
        self.moves_on_traversal = 0
        self.cost = 0
        self.program = None
        self.memory = None
        self.idle_events = 0
        self.dormant_events = 0

    def point(self, graph):
        if self.traversal is None or self.fraction == 0:
            return graphs.NodePoint(self.node)
        edge = self.traversal.edge(graph)
        return graphs.EdgePoint(
            edge, graphs.canonical_position(edge, self.traversal.origin, self.fraction))

    @property
    def in_edge(self):
        return self.traversal is not None and self.fraction != 0

    def __repr__(self):
        return '<AgentState {0} {1} at {2}>'.format(
            self.label, self.lifecycle, self.node)


class Protocol(object):
    """
    Run-level behaviour: route decisions and meeting handlers for all agents.
    """

    name = 'protocol'

    def on_wake(self, engine, agent):
        pass

    def next_exit(self, engine, agent):
        if agent.program is None:
            return None
        return agent.program.next_move(
            agent.last_entry_port, engine.graph.degree(agent.node))

    def annotation(self, engine, agent):
        return getattr(agent.program, 'annotation', None)

    def on_arrival(self, engine, agent):
        pass

    def on_meeting(self, engine, meeting):
        pass

    def is_frozen(self, engine, agent):
        """
        Whether an agent parked inside an edge refuses to move.
        """
        return False

    def is_done(self, engine):
        return False


class Engine(object):
    """
    Drive a protocol under a scheduler until done, deadlocked or capped.
    """

    def __init__(self, graph, agents, protocol, scheduler,
                 move_budget=None, wake_budget=None, fairness_budget=None,
                 step_cap=None):
        self.graph = graph
        labels = [agent.label for agent in agents]
        if len(set(labels)) != len(labels):
            raise drf_exceptions.ValidationError(
                {'labels': ['agent labels must be distinct']})
        starts = [agent.start for agent in agents]
        if len(set(starts)) != len(starts):
            raise drf_exceptions.ValidationError(
                {'starts': ['agents must start at distinct nodes']})
        for start in starts:
            if not 0 <= start < graph.node_count:
                raise drf_exceptions.ValidationError(
                    {'starts': ['start {0} is not a node'.format(start)]})
        self.agents = collections.OrderedDict(
            (agent.label, agent) for agent in sorted(agents, key=lambda a: a.label))
        self.protocol = protocol
        self.scheduler = scheduler
        self.move_budget = sim_settings.MOVE_BUDGET if move_budget is None else move_budget
        self.wake_budget = sim_settings.WAKE_BUDGET if wake_budget is None else wake_budget
        self.fairness_budget = (
            sim_settings.FAIRNESS_BUDGET if fairness_budget is None else fairness_budget)
        self.step_cap = sim_settings.STEP_CAP if step_cap is None else step_cap
        self.events = []
        self.terminated = False
        self._transitions = []

    # Queries used by schedulers and protocols

    def agent(self, label):
        return self.agents[label]

    def dormant_agents(self):
        return [agent for agent in self.agents.values() if agent.lifecycle == DORMANT]

    def exit_decision(self, agent):
        """
        The agent's next exit port at its node, committed once and cached.
        """
        if agent.pending_exit is UNDECIDED:
            agent.pending_exit = self.protocol.next_exit(self, agent)
            agent.pending_annotation = self.protocol.annotation(self, agent)
        return agent.pending_exit

    def can_move(self, agent):
        if agent.lifecycle != ACTIVE:
            return False
        if agent.traversal is not None:
            return not self.protocol.is_frozen(self, agent)
        return self.exit_decision(agent) is not None

    def movable_agents(self):
        return [agent for agent in self.agents.values() if self.can_move(agent)]

    def agents_at(self, point, exclude=()):
        return [
            agent for agent in self.agents.values()
            if agent.label not in exclude and agent.point(self.graph) == point]

    def same_direction(self, first, second):
        return (
            first.traversal is not None and second.traversal is not None and
            first.traversal.origin == second.traversal.origin and
            first.traversal.end == second.traversal.end)

    def drop_idle_traversal(self, agent):
        """
        Forget a committed traversal that has made no progress.
        """
        if agent.traversal is not None and agent.fraction == 0:
            agent.traversal = None
            agent.moves_on_traversal = 0
        agent.pending_exit = UNDECIDED
        agent.pending_annotation = None

    def transition(self, label, **detail):
        """
        Record a protocol state change in the current event.
        """
        record = dict(agent=label)
        record.update(detail)
        self._transitions.append(record)

    def place(self, label, traversal=None, fraction=0):
        """
        Wake an agent without an event, optionally part-way along a
        traversal, to set up a scenario before running.
        """
        agent = self.agents[label]
        agent.lifecycle = ACTIVE
        if traversal is not None:
            agent.node = traversal.origin
            agent.traversal = traversal
            agent.fraction = fractions.Fraction(fraction)
        return agent

    def halt(self, agent):
        agent.lifecycle = HALTED
        self.transition(agent.label, lifecycle=HALTED)

    # Sweeps

    def _start_traversal(self, agent):
        port = self.exit_decision(agent)
        if port is None:
            raise exceptions.SimulationError(
                'Agent {0} has no move to make.'.format(agent.label))
        neighbor, entry = self.graph.step(agent.node, port)
        agent.traversal = Traversal(agent.node, port, neighbor, entry)
        agent.fraction = fractions.Fraction(0)
        agent.annotation = agent.pending_annotation
        agent.pending_exit = UNDECIDED
        agent.pending_annotation = None

    def sweep_groups(self, agent, target, traversal=None, fraction=None):
        """
        Other agents met by sweeping to ``target``, grouped by point in
        sweep order.  Returns ``(fraction, point, others)`` triples.

        ``traversal`` and ``fraction`` default to the agent's own.
        """
        traversal = traversal or agent.traversal
        fraction = agent.fraction if fraction is None else fraction
        edge = traversal.edge(self.graph)
        start = graphs.canonical_position(edge, traversal.origin, fraction)
        stop = graphs.canonical_position(edge, traversal.origin, target)
        if start == stop:
            return []
        low, high = min(start, stop), max(start, stop)
        by_position = collections.OrderedDict()
        for other in self.agents.values():
            if other is agent:
                continue
            point = other.point(self.graph)
            if isinstance(point, graphs.NodePoint):
                if point.node == edge.origin:
                    position = fractions.Fraction(0)
                elif point.node == edge.end:
                    position = fractions.Fraction(1)
                else:
                    continue
            elif point.edge == edge:
                position = point.position
            else:
                continue
            if position == start or not low <= position <= high:
                continue
            by_position.setdefault(position, []).append(other)
        groups = []
        for position in sorted(by_position, key=lambda position: abs(position - start)):
            groups.append((
                graphs.canonical_position(edge, traversal.origin, position),
                graphs.point(edge, position), by_position[position]))
        return groups

    def peek(self, agent, target):
        """
        Labels of agents a move would meet, without side effects beyond
        committing the agent's exit decision.
        """
        target = fractions.Fraction(target)
        if agent.traversal is not None:
            groups = self.sweep_groups(agent, target)
        else:
            port = self.exit_decision(agent)
            if port is None:
                return []
            neighbor, entry = self.graph.step(agent.node, port)
            groups = self.sweep_groups(
                agent, target, traversal=Traversal(agent.node, port, neighbor, entry),
                fraction=fractions.Fraction(0))
        return [other.label for _, _, others in groups for other in others]

    def _meeting(self, agent, point, others):
        woken = [other for other in others if other.lifecycle == DORMANT]
        for other in woken:
            self._wake(other)
        same = None
        if isinstance(point, graphs.EdgePoint):
            same = tuple(sorted(
                other.label for other in others if self.same_direction(agent, other)))
        meeting = Meeting(
            point, agent.label,
            tuple(sorted([agent.label] + [other.label for other in others])), same)
        self.protocol.on_meeting(self, meeting)
        return meeting

    def _wake(self, agent):
        agent.lifecycle = ACTIVE
        agent.dormant_events = 0
        self.transition(agent.label, lifecycle=ACTIVE)
        self.protocol.on_wake(self, agent)

    def advance(self, decision, forced=False):
        """
        Apply one decision and record the resulting event.
        """
        agent = self.agents[decision.agent]
        if agent.lifecycle == HALTED:
            raise exceptions.HaltedAgent(
                'Agent {0} has halted and cannot be scheduled.'.format(agent.label))
        self._transitions = []
        meetings = []
        if isinstance(decision, Wake):
            if agent.lifecycle != DORMANT:
                raise exceptions.SimulationError(
                    'Agent {0} is already awake.'.format(agent.label))
            self._wake(agent)
            others = self.agents_at(agent.point(self.graph), exclude=(agent.label,))
            if others:
                meetings.append(self._meeting(agent, agent.point(self.graph), others))
            event = self._record('wake', agent, forced, None, None, None, meetings)
        else:
            event = self._move(agent, fractions.Fraction(decision.target), forced)
        self._after_event(agent)
        return event

    def _move(self, agent, target, forced):
        if agent.lifecycle != ACTIVE:
            raise exceptions.SimulationError(
                'Agent {0} is dormant and cannot move.'.format(agent.label))
        if not 0 <= target <= 1:
            raise drf_exceptions.ValidationError(
                {'target': ['move targets lie in [0, 1]']})
        if agent.traversal is None:
            self._start_traversal(agent)
        agent.moves_on_traversal += 1
        requested, capped = target, False
        if agent.moves_on_traversal >= self.move_budget and target != 1:
            target = fractions.Fraction(1)
            capped = True
        traversal = agent.traversal
        edge = traversal.edge(self.graph)
        from_fraction = agent.fraction
        meetings = []
        for fraction, point, others in self.sweep_groups(agent, target):
            agent.fraction = fraction
            if fraction == 1:
                self._arrive(agent)
            meetings.append(self._meeting(agent, point, others))
            if self.protocol.is_done(self):
                target = fraction
                break
        if agent.traversal is not None:
            agent.fraction = target
            if target == 1:
                self._arrive(agent)
        return self._record(
            'move', agent, forced, edge, from_fraction, target, meetings,
            annotation=agent.annotation, traversal=traversal,
            requested=requested, capped=capped)

    def _arrive(self, agent):
        traversal = agent.traversal
        agent.node = traversal.end
        agent.last_entry_port = traversal.entry_port
        agent.traversal = None
        agent.fraction = fractions.Fraction(0)
        agent.moves_on_traversal = 0
        agent.cost += 1
        agent.pending_exit = UNDECIDED
        self.protocol.on_arrival(self, agent)

    def _record(self, kind, agent, forced, edge, from_fraction, to_fraction,
                meetings, annotation=None, traversal=None, requested=None,
                capped=False):
        self._commit_decisions()
        if traversal is not None and from_fraction is not None:
            # Report fractions from the canonical origin of the edge
            from_fraction = graphs.canonical_position(edge, traversal.origin, from_fraction)
            to_fraction = graphs.canonical_position(edge, traversal.origin, to_fraction)
        event = Event(
            len(self.events), kind, agent.label, forced, edge, from_fraction,
            to_fraction, tuple(meetings), tuple(self._transitions),
            collections.OrderedDict(
                (label, other.cost) for label, other in self.agents.items()),
            annotation, requested, capped)
        self.events.append(event)
        logger.debug('Event %s: %s %s', event.index, kind, agent.label)
        return event

    def _commit_decisions(self):
        """
        Fix the next exit of every agent resting at a node.

        Decisions are fixed at the end of every event whatever the scheduler
        inspects, so replays reproduce protocol state.
        """
        for agent in self.agents.values():
            if agent.lifecycle == ACTIVE and agent.traversal is None:
                self.exit_decision(agent)

    def _after_event(self, agent):
        for other in self.agents.values():
            if other.lifecycle == DORMANT:
                other.dormant_events += 1
            elif other is agent or other.lifecycle != ACTIVE:
                other.idle_events = 0
            else:
                other.idle_events += 1

    # Driving

    def forced_decision(self):
        """
        Liveness enforcement: overdue wakes, then starved movers.
        """
        for agent in self.agents.values():
            if agent.lifecycle == DORMANT and agent.dormant_events >= self.wake_budget:
                return Wake(agent.label)
        for agent in self.agents.values():
            if agent.idle_events >= self.fairness_budget and self.can_move(agent):
                return Move(agent.label, fractions.Fraction(1))
        return None

    def step(self):
        """
        One scheduling round; ``False`` once nothing can happen any more.
        """
        decision = self.forced_decision()
        forced = decision is not None
        if decision is None:
            if not self.dormant_agents() and not self.movable_agents():
                return False
            decision = self.scheduler.decide(self)
            if decision is None:
                return False
        self.advance(decision, forced=forced)
        return True

    def run(self):
        while not self.protocol.is_done(self):
            if len(self.events) >= self.step_cap:
                break
            if not self.step():
                break
        self.terminated = self.protocol.is_done(self)
        if not self.terminated:
            logger.warning(
                'Run of %s stopped after %s events without terminating',
                self.protocol.name, len(self.events))
        return self.events

    def costs(self):
        return collections.OrderedDict(
            (label, agent.cost) for label, agent in self.agents.items())


class SimTrace(object):
    """
    A run's configuration header, its events and whether it terminated.
    """

    def __init__(self, header, events, terminated):
        self.header = header
        self.events = list(events)
        self.terminated = terminated

    @classmethod
    def from_engine(cls, sim, header):
        return cls(header, sim.events, sim.terminated)

    def decisions(self):
        """
        Scheduler decisions by event index, forced events left out.
        """
        decisions = {}
        for event in self.events:
            if event.forced:
                continue
            if event.kind == 'wake':
                decisions[event.index] = Wake(event.agent)
            else:
                decisions[event.index] = Move(event.agent, event.requested)
        return decisions

    def __len__(self):
        return len(self.events)
