"""
Adversaries: choose which agent acts next, how far it moves and when
dormant agents wake.
"""

import fractions
import random

from rest_framework import exceptions as drf_exceptions

from .settings import sim_settings
from . import engine

ONE = fractions.Fraction(1)


class Scheduler(object):
    """
    Base adversary; ``decide()`` returns a ``Wake``, a ``Move`` or ``None``.
    """

    name = None

    def __init__(self, seed=None):
        self.seed = seed

    def decide(self, sim):
        raise NotImplementedError(
            '`decide()` must be implemented.')  # pragma: no cover


class RoundRobinScheduler(Scheduler):
    """
    Wake everyone in label order, then alternate full-edge moves.
    """

    name = 'round_robin'

    def __init__(self, seed=None):
        super(RoundRobinScheduler, self).__init__(seed=seed)
        self.last = None

    def decide(self, sim):
        dormant = sim.dormant_agents()
        if dormant:
            return engine.Wake(dormant[0].label)
        movable = sim.movable_agents()
        if not movable:
            return None
        later = [agent for agent in movable if self.last is None or agent.label > self.last]
        chosen = (later or movable)[0]
        self.last = chosen.label
        return engine.Move(chosen.label, ONE)


class RandomScheduler(Scheduler):
    """
    Seeded random agent choice and eighth-step targets, back and forth.
    """

    name = 'random'
    wake_probability = 0.25
    completion_probability = 0.5

    def __init__(self, seed=None):
        super(RandomScheduler, self).__init__(
            seed=sim_settings.SEED if seed is None else seed)
        self.rng = random.Random(self.seed)

    def decide(self, sim):
        dormant = sim.dormant_agents()
        movable = sim.movable_agents()
        if dormant and (not movable or self.rng.random() < self.wake_probability):
            return engine.Wake(self.rng.choice(dormant).label)
        if not movable:
            return None
        agent = self.rng.choice(movable)
        if self.rng.random() < self.completion_probability:
            return engine.Move(agent.label, ONE)
        return engine.Move(agent.label, fractions.Fraction(self.rng.randint(1, 7), 8))


class StalkerAvoider(Scheduler):
    """
    Greedy one-step lookahead that postpones meetings.

    Candidates are full moves, half-way moves and retreats of every movable
    agent, plus wakes; any candidate meeting nobody beats every candidate
    that meets someone.
    """

    name = 'stalker_avoider'

    def __init__(self, seed=None):
        super(StalkerAvoider, self).__init__(seed=seed)
        self.last = None

    def targets(self, agent):
        if agent.traversal is None:
            return [ONE, fractions.Fraction(1, 2)]
        current = agent.fraction
        targets = [ONE, (current + 1) / 2]
        if current > 0:
            targets.append(current / 2)
        return [target for target in targets if target != current]

    def candidates(self, sim):
        movable = sim.movable_agents()
        order = sorted(
            movable,
            key=lambda agent: (self.last is not None and agent.label <= self.last,
                               agent.label))
        for rank, agent in enumerate(order):
            for target in self.targets(agent):
                met = sim.peek(agent, target)
                yield ((bool(met), target != ONE, rank),
                       engine.Move(agent.label, target))
        for rank, agent in enumerate(sim.dormant_agents()):
            met = sim.agents_at(agent.point(sim.graph), exclude=(agent.label,))
            yield ((bool(met), 2, rank), engine.Wake(agent.label))

    def decide(self, sim):
        scored = list(self.candidates(sim))
        if not scored:
            return None
        decision = min(scored, key=lambda entry: entry[0])[1]
        if isinstance(decision, engine.Move):
            self.last = decision.agent
        return decision


class ReplayScheduler(Scheduler):
    """
    Replays recorded decisions by event index; forced events are
    re-derived by the engine itself.

    ``name`` and ``seed`` stand in for the recorded adversary in headers.
    """

    name = 'replay'

    def __init__(self, decisions, seed=None, name=None):
        super(ReplayScheduler, self).__init__(seed=seed)
        if name is not None:
            self.name = name
        self.decisions = dict(decisions)

    def decide(self, sim):
        return self.decisions.get(len(sim.events))


def scheduler_names():
    return sorted(sim_settings.SCHEDULER_CLASSES)


def get_scheduler(name, seed=None):
    try:
        scheduler_class = sim_settings.SCHEDULER_CLASSES[name]
    except KeyError:
        raise drf_exceptions.ValidationError(
            {'scheduler': ['unknown scheduler {0!r}, choose from {1}'.format(
                name, ', '.join(scheduler_names()))]})
    return scheduler_class(seed=seed)
