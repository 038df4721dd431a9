"""
Falsification probes for the synchronization claims of the rendezvous route.

A probe reads element completion times off a run and checks one claim at
its checkpoint.  Every claim is conditional on the agents not having met
before the checkpoint, so each probe reports one of ``pass``, ``vacuous``
(met first), ``unreached`` (the checkpoint never happened) or
``violation``.
"""

import collections
import logging

from rest_framework import exceptions as drf_exceptions

from . import bounds
from . import rendezvous
from . import routes
from . import trajectories

logger = logging.getLogger(__name__)

PASS = 'pass'
VACUOUS = 'vacuous'
UNREACHED = 'unreached'
VIOLATION = 'violation'
STATUSES = (PASS, VACUOUS, UNREACHED, VIOLATION)

FENCE_PIECE = 'fence-piece'
INDEX_WINDOW = 'index-window'
LAST_ATOM = 'last-atom'
FENCE_COMPLETION = 'fence-completion'
BORDER_INTERLEAVING = 'border-interleaving'
CLAIMS = (
    FENCE_PIECE, INDEX_WINDOW, LAST_ATOM, FENCE_COMPLETION,
    BORDER_INTERLEAVING)

ProbeResult = collections.namedtuple(
    'ProbeResult', ['claim', 'status', 'checkpoint', 'detail'])

ProbeReport = collections.namedtuple('ProbeReport', ['result', 'outcome'])


class ElementSpan(object):
    """
    Event indices at which one route element started and completed.
    """

    def __init__(self, piece, bit, kind, started, completed=None):
        self.piece = piece
        self.bit = bit
        self.kind = kind
        self.started = started
        self.completed = completed

    @property
    def key(self):
        return (self.piece, self.bit, self.kind)

    def __repr__(self):
        return '<ElementSpan {0} {1}..{2}>'.format(
            self.key, self.started, self.completed)


class AgentTimeline(object):
    """
    The route elements of one agent in the order it started them.

    ``bits`` is the length of the agent's modified label, which fixes
    how many segments each piece has.
    """

    def __init__(self, label, bits):
        self.label = label
        self.bits = bits
        self.spans = []
        self._by_key = {}

    def add(self, piece, bit, kind, started, completed=None):
        span = ElementSpan(piece, bit, kind, started, completed)
        self.spans.append(span)
        self._by_key[span.key] = span
        return span

    def record(self, event_index, annotation, arrived):
        key = (annotation.piece, annotation.bit, annotation.kind)
        span = self._by_key.get(key)
        if span is None:
            span = self.add(
                annotation.piece, annotation.bit, annotation.kind, event_index)
        if arrived and annotation.offset == annotation.length - 1:
            span.completed = event_index

    def segments(self, piece):
        return min(piece, self.bits)

    def completed(self, key):
        span = self._by_key.get(key)
        return None if span is None else span.completed

    def started(self, key):
        span = self._by_key.get(key)
        return None if span is None else span.started

    def in_progress(self, time):
        """
        The last element started at or before ``time``.
        """
        current = None
        for span in self.spans:
            if span.started > time:
                break
            current = span
        return current

    # Element keys

    def fence(self, piece):
        return (piece, self.segments(piece), routes.FENCE)

    def last_atom(self, piece):
        return (piece, self.segments(piece), routes.ATOM_SECOND)

    def first_atom(self, piece, bit=1):
        return (piece, bit, routes.ATOM_FIRST)

    def segment(self, piece, bit):
        """
        A segment is complete once its second atom is.
        """
        return (piece, bit, routes.ATOM_SECOND)

    def border(self, piece, bit):
        return (piece, bit, routes.BORDER)

    def piece_end(self, piece):
        """
        Completion of a piece, which ends right before its fence.
        """
        return self.completed(self.last_atom(piece))


class Timeline(object):
    """
    Both agents' element spans plus the event index of their first meeting.
    """

    def __init__(self, agents, met_at=None):
        self.agents = list(agents)
        self.met_at = met_at

    @classmethod
    def from_events(cls, events, labels):
        """
        Build from engine events; an arrival is a move that raised the
        mover's cost.
        """
        agents = collections.OrderedDict(
            (label, AgentTimeline(
                label, len(trajectories.modified_label(label))))
            for label in labels)
        costs = dict((label, 0) for label in labels)
        met_at = None
        for event in events:
            if met_at is None and event.meetings:
                met_at = event.index
            if event.kind != 'move':
                continue
            arrived = event.costs[event.agent] > costs[event.agent]
            costs[event.agent] = event.costs[event.agent]
            if event.annotation is not None:
                agents[event.agent].record(
                    event.index, event.annotation, arrived)
        return cls(agents.values(), met_at)

    def other(self, agent):
        return next(other for other in self.agents if other is not agent)

    def first_to_complete(self, key_for):
        """
        ``(time, agent)`` of the earliest completion of a per-agent element.
        """
        times = [
            (agent.completed(key_for(agent)), agent) for agent in self.agents]
        times = [(time, agent) for time, agent in times if time is not None]
        if not times:
            return None, None
        return min(times, key=lambda entry: entry[0])

    def met_by(self, time):
        return self.met_at is not None and self.met_at <= time


def _before(earlier, later):
    """
    ``earlier < later`` where a missing time lies in the future.
    """
    if later is None:
        return True
    return earlier is not None and earlier < later


def probe_fence_piece(timeline, horizon, i=1):
    """
    Once one agent completes fence ``horizon + i`` the other has completed
    piece ``i + 1``.
    """
    time, first = timeline.first_to_complete(
        lambda agent: agent.fence(horizon + i))
    if time is None:
        return ProbeResult(FENCE_PIECE, UNREACHED, None, {'i': i})
    if timeline.met_by(time):
        return ProbeResult(FENCE_PIECE, VACUOUS, time, {'i': i})
    other = timeline.other(first)
    completed = other.piece_end(i + 1)
    detail = {'i': i, 'agent': first.label, 'other': other.label,
              'other_completed': completed}
    if completed is not None and completed < time:
        return ProbeResult(FENCE_PIECE, PASS, time, detail)
    return ProbeResult(FENCE_PIECE, VIOLATION, time, detail)


def agent_index(timeline, horizon):
    """
    The window ``(j, first, other, start, end)`` in which the other agent
    spends the first agent's fence ``2 * horizon``.

    ``j`` is ``None`` when the other agent's route over that window is not
    within the last atom of a piece ``j``, its fence and the first atom of
    piece ``j + 1`` for ``horizon < j <= 2 * horizon``.
    """
    end, first = timeline.first_to_complete(
        lambda agent: agent.fence(2 * horizon))
    if end is None:
        return None, None, None, None, None
    other = timeline.other(first)
    start = first.started(first.fence(2 * horizon))
    opening = other.in_progress(start)
    closing = other.in_progress(end)
    for j in range(horizon + 1, 2 * horizon + 1):
        window = [
            other.last_atom(j), other.fence(j), other.first_atom(j + 1)]
        if (opening is not None and closing is not None and
                opening.key in window and closing.key in window and
                window.index(opening.key) <= window.index(closing.key)):
            return j, first, other, start, end
    return None, first, other, start, end


def probe_index_window(timeline, horizon):
    j, first, other, start, end = agent_index(timeline, horizon)
    if end is None:
        return ProbeResult(INDEX_WINDOW, UNREACHED, None, {})
    if timeline.met_by(end):
        return ProbeResult(INDEX_WINDOW, VACUOUS, end, {})
    detail = {'agent': first.label, 'other': other.label, 'index': j,
              'window': [start, end]}
    if j is None:
        return ProbeResult(INDEX_WINDOW, VIOLATION, end, detail)
    return ProbeResult(INDEX_WINDOW, PASS, end, detail)


def probe_last_atom(timeline, horizon):
    """
    Once the first agent completes fence ``2 * horizon`` the other has
    completed the last atom of its indexed piece.
    """
    j, first, other, _, end = agent_index(timeline, horizon)
    if end is None:
        return ProbeResult(LAST_ATOM, UNREACHED, None, {})
    if timeline.met_by(end):
        return ProbeResult(LAST_ATOM, VACUOUS, end, {})
    detail = {'agent': first.label, 'other': other.label, 'index': j}
    if j is not None and _before(other.completed(other.last_atom(j)), end):
        return ProbeResult(LAST_ATOM, PASS, end, detail)
    return ProbeResult(LAST_ATOM, VIOLATION, end, detail)


def probe_fence_completion(timeline, horizon):
    """
    Once the first agent completes the first atom of piece
    ``2 * horizon + 1`` the other has completed its indexed fence.
    """
    j, first, other, _, end = agent_index(timeline, horizon)
    if end is None:
        return ProbeResult(FENCE_COMPLETION, UNREACHED, None, {})
    checkpoint = first.completed(first.first_atom(2 * horizon + 1))
    if checkpoint is None:
        return ProbeResult(FENCE_COMPLETION, UNREACHED, None, {})
    if timeline.met_by(checkpoint):
        return ProbeResult(FENCE_COMPLETION, VACUOUS, checkpoint, {})
    detail = {'agent': first.label, 'other': other.label, 'index': j}
    if j is not None and _before(other.completed(other.fence(j)), checkpoint):
        return ProbeResult(FENCE_COMPLETION, PASS, checkpoint, detail)
    return ProbeResult(FENCE_COMPLETION, VIOLATION, checkpoint, detail)


def interleaving_failures(first, other, j, piece):
    """
    Failed ordering properties between the other agent's piece ``j + 1``
    and the first agent's piece ``piece``, as ``(property, i)`` pairs.
    """
    failures = []
    mine = j + 1
    segments = max(other.segments(mine), first.segments(piece))
    for i in range(1, segments + 1):
        orderings = (
            (1, other.completed(other.segment(mine, i)),
             first.completed(first.border(piece, i))),
            (2, first.completed(first.segment(piece, i)),
             other.completed(other.border(mine, i))),
            (3, other.completed(other.border(mine, i)),
             first.completed(first.first_atom(piece, i + 1))),
            (4, first.completed(first.border(piece, i)),
             other.completed(other.first_atom(mine, i + 1))),
        )
        for number, earlier, later in orderings:
            if not _before(earlier, later):
                failures.append((number, i))
    return failures


def probe_border_interleaving(timeline, horizon):
    """
    Segments and borders of the other agent's piece ``j + 1`` and the first
    agent's piece ``2 * horizon + 1`` complete alternately.
    """
    piece = 2 * horizon + 1
    j, first, other, _, end = agent_index(timeline, horizon)
    checkpoint, _ = timeline.first_to_complete(
        lambda agent: agent.last_atom(piece))
    if end is None or checkpoint is None:
        return ProbeResult(BORDER_INTERLEAVING, UNREACHED, None, {})
    if timeline.met_by(checkpoint):
        return ProbeResult(BORDER_INTERLEAVING, VACUOUS, checkpoint, {})
    detail = {'agent': first.label, 'other': other.label, 'index': j}
    if j is None:
        return ProbeResult(BORDER_INTERLEAVING, VIOLATION, checkpoint, detail)
    failures = interleaving_failures(first, other, j, piece)
    if failures:
        detail['failures'] = failures
        return ProbeResult(BORDER_INTERLEAVING, VIOLATION, checkpoint, detail)
    return ProbeResult(BORDER_INTERLEAVING, PASS, checkpoint, detail)


def probe(timeline, claim, horizon, i=1):
    """
    Evaluate one claim against a timeline.
    """
    if claim == FENCE_PIECE:
        return probe_fence_piece(timeline, horizon, i=i)
    probes = {
        INDEX_WINDOW: probe_index_window,
        LAST_ATOM: probe_last_atom,
        FENCE_COMPLETION: probe_fence_completion,
        BORDER_INTERLEAVING: probe_border_interleaving,
    }
    try:
        return probes[claim](timeline, horizon)
    except KeyError:
        raise drf_exceptions.ValidationError(
            {'claim': ['unknown claim {0!r}, choose from {1}'.format(
                claim, ', '.join(CLAIMS))]})


def probe_horizon(node_count, labels):
    """
    ``n + l`` for the graph size and the shorter label.
    """
    m = min(trajectories.label_length(label) for label in labels)
    ell, _ = bounds.horizon(node_count, m)
    return node_count + ell


def run_probe(graph, labels, scheduler, claim, provider, starts=(0, 1),
              cap=None, i=1, horizon=None, **options):
    """
    Run a rendezvous and probe one claim on its annotation stream.
    """
    first, second = labels
    outcome = rendezvous.run_rendezvous(
        graph, first, second, starts, scheduler, cap=cap, provider=provider,
        **options)
    if horizon is None:
        horizon = probe_horizon(graph.node_count, labels)
    timeline = Timeline.from_events(outcome.trace.events, labels)
    result = probe(timeline, claim, horizon, i=i)
    if result.status == VIOLATION:
        logger.warning(
            'Claim %s violated on %r under %s: %s',
            claim, graph, scheduler.name, result.detail)
    return ProbeReport(result, outcome)


def summarize(results):
    """
    Count results per status, every status present.
    """
    counts = collections.OrderedDict((status, 0) for status in STATUSES)
    for result in results:
        counts[result.status] += 1
    return counts


def unreached_configurations(keyed_results):
    """
    Keys of the configurations none of whose runs reached the checkpoint.

    ``keyed_results`` pairs a configuration key with each probe result.
    """
    statuses = collections.OrderedDict()
    for key, result in keyed_results:
        statuses.setdefault(key, set()).add(result.status)
    return [key for key, found in statuses.items() if found == {UNREACHED}]
