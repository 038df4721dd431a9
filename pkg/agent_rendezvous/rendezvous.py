"""
Two-agent rendezvous runs and the tunnel scenario.

Both wire route programs into the engine, stop at the first meeting and
return an outcome carrying the replayable trace of the run.
"""

import collections
import logging

from rest_framework import exceptions as drf_exceptions

from . import bounds
from . import engine
from . import graphs
from . import routes
from . import trajectories
from . import uxs

logger = logging.getLogger(__name__)

ALGORITHMS = ('rv', 'naive')
TUNNEL_FORMS = ('X', 'Y')

# Labels of the tunnel scenario agents; the walker performs one full form
TUNNEL_WALKER = 1
TUNNEL_LOOPER = 2

RendezvousOutcome = collections.namedtuple('RendezvousOutcome', [
    'met', 'location', 'costs', 'total_cost', 'annotations', 'bound',
    'bound_exceeded', 'nonterminated', 'trace'])

TunnelOutcome = collections.namedtuple('TunnelOutcome', [
    'met', 'applicable', 'location', 'costs', 'trace'])


def engine_options(sim):
    return collections.OrderedDict([
        ('move_budget', sim.move_budget),
        ('wake_budget', sim.wake_budget),
        ('fairness_budget', sim.fairness_budget),
        ('step_cap', sim.step_cap)])


def run_header(kind, sim, provider, scheduler, **parameters):
    """
    Everything needed to re-run a simulation, for trace and report headers.
    """
    header = collections.OrderedDict([
        ('kind', kind),
        ('graph', graphs.serialize(sim.graph)),
        ('graph_hash', sim.graph.content_hash),
        ('provider', uxs.provider_config(provider)),
        ('scheduler', scheduler.name),
        ('seed', scheduler.seed),
        ('engine', engine_options(sim)),
        ('agents', [
            collections.OrderedDict([
                ('label', agent.label), ('start', agent.start),
                ('value', agent.value)])
            for agent in sim.agents.values()]),
    ])
    header.update(sorted(parameters.items()))
    return header


class RendezvousProtocol(engine.Protocol):
    """
    Every agent follows its own route program until the first meeting.
    """

    name = 'rendezvous'

    def __init__(self, compilers):
        self.compilers = compilers
        self.meeting = None
        self.annotations = None

    def on_wake(self, sim, agent):
        agent.program = self.compilers[agent.label]()

    def on_meeting(self, sim, meeting):
        if self.meeting is not None:
            return
        self.meeting = meeting
        self.annotations = collections.OrderedDict(
            (label, sim.agent(label).annotation) for label in meeting.agents)

    def finished(self, agent):
        return (
            agent.lifecycle == engine.ACTIVE and agent.traversal is None and
            agent.program is not None and agent.program.exhausted)

    def is_done(self, sim):
        if self.meeting is not None:
            return True
        return all(self.finished(agent) for agent in sim.agents.values())


class TunnelProtocol(RendezvousProtocol):
    """
    Done at the first meeting or once the walker has finished its form.
    """

    name = 'tunnel'

    def is_done(self, sim):
        return (
            self.meeting is not None or
            self.finished(sim.agent(TUNNEL_WALKER)))


def _compilers(graph, labels, provider, algorithm):
    if algorithm == 'rv':
        return {
            label: (lambda label=label: routes.compile_rv(label, provider))
            for label in labels}
    return {
        label: (lambda label=label: routes.compile_naive(
            label, graph.node_count, provider))
        for label in labels}


def run_rendezvous(graph, first, second, starts, scheduler, cap=None,
                   provider=None, algorithm='rv', **options):
    """
    Run two labelled agents from distinct starts until they meet.

    ``options`` are passed on to the engine (move, wake and fairness
    budgets).  The cost bound is only evaluated for the ``rv`` algorithm.
    """
    if first == second:
        raise drf_exceptions.ValidationError(
            {'labels': ['rendezvous needs two distinct labels']})
    if algorithm not in ALGORITHMS:
        raise drf_exceptions.ValidationError(
            {'algorithm': ['unknown algorithm {0!r}, choose from {1}'.format(
                algorithm, ', '.join(ALGORITHMS))]})
    if provider is None:
        raise drf_exceptions.ValidationError(
            {'provider': ['a sequence provider is required']})
    first_start, second_start = starts
    protocol = RendezvousProtocol(
        _compilers(graph, (first, second), provider, algorithm))
    sim = engine.Engine(
        graph,
        [engine.AgentState(first, first_start),
         engine.AgentState(second, second_start)],
        protocol, scheduler, step_cap=cap, **options)
    header = run_header(
        'rendezvous', sim, provider, scheduler, algorithm=algorithm)
    sim.run()

    costs = sim.costs()
    met = protocol.meeting is not None
    bound = None
    bound_exceeded = False
    if algorithm == 'rv':
        bound = bounds.pi_for_labels(
            graph.node_count, first, second, provider.length)
        bound_exceeded = any(cost > bound for cost in costs.values())
        if bound_exceeded:
            logger.warning(
                'Agents %s and %s exceeded the cost bound on %r: %s',
                first, second, graph, dict(costs))
    logger.info(
        'Rendezvous of %s and %s on %r under %s: met=%s, total cost %s',
        first, second, graph, scheduler.name, met, sum(costs.values()))
    return RendezvousOutcome(
        met, protocol.meeting.point if met else None, costs,
        sum(costs.values()), protocol.annotations, bound, bound_exceeded,
        not sim.terminated, engine.SimTrace.from_engine(sim, header))


def tunnel_scenario(graph, m, v, scheduler, a_start=None, provider=None,
                    form='X', cap=None, **options):
    """
    One agent loops ``form(m)`` from ``v`` forever; the other walks to ``v``
    and performs one full ``form(m)`` from there.

    The meeting is only claimed when ``form(m)`` is integral, that is when
    ``m`` is at least the graph size.
    """
    if form not in TUNNEL_FORMS:
        raise drf_exceptions.ValidationError(
            {'form': ['unknown form {0!r}, choose from {1}'.format(
                form, ', '.join(TUNNEL_FORMS))]})
    if provider is None:
        raise drf_exceptions.ValidationError(
            {'provider': ['a sequence provider is required']})
    if a_start is None:
        a_start = next(node for node in range(graph.node_count) if node != v)
    builder = trajectories.named
    loop = trajectories.Power(builder(form, m, None), None)
    approach = graph.shortest_ports(a_start, v)
    compilers = {
        TUNNEL_LOOPER: lambda: routes.compile_trajectory(loop, provider),
        TUNNEL_WALKER: lambda: routes.compile_script(
            approach, then=builder(form, m, None), provider=provider),
    }
    protocol = TunnelProtocol(compilers)
    sim = engine.Engine(
        graph,
        [engine.AgentState(TUNNEL_WALKER, a_start),
         engine.AgentState(TUNNEL_LOOPER, v)],
        protocol, scheduler, step_cap=cap, **options)
    header = run_header(
        'tunnel', sim, provider, scheduler, form=form, m=m, v=v)
    sim.run()

    met = protocol.meeting is not None
    applicable = m >= graph.node_count
    if applicable and not met:
        logger.warning(
            'Tunnel scenario %s(%s) from %s on %r ended without a meeting',
            form, m, v, graph)
    return TunnelOutcome(
        met, applicable, protocol.meeting.point if met else None,
        sim.costs(), engine.SimTrace.from_engine(sim, header))
