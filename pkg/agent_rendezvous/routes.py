"""
Route programs: lazy, resumable move streams compiled from trajectories.

A program is a stack of generator frames.  A frame yields either an exit
port, a child frame to push, or an ``Element`` marker that starts a new
structural element of the route.  Frames read the observation of the last
arrival (``entry_port``, ``degree``) from the program they run in.
"""

import collections
import itertools

from . import trajectories

StructuralAnnotation = collections.namedtuple(
    'StructuralAnnotation', ['piece', 'bit', 'kind', 'offset', 'length'])

ATOM_FIRST = 'atom-first'
ATOM_SECOND = 'atom-second'
BORDER = 'border'
FENCE = 'fence'
EXPLORATION = 'exploration'
ELEMENT_KINDS = (ATOM_FIRST, ATOM_SECOND, BORDER, FENCE, EXPLORATION)


class Element(collections.namedtuple('Element', ['piece', 'bit', 'kind', 'length'])):
    """
    Marker for the start of an element; ``length`` counts moves.
    """
    __slots__ = ()


class RouteProgram(object):
    """
    Resumable move stream owned by one agent.
    """

    def __init__(self, root, provider=None, calculus=None):
        self.provider = provider
        if calculus is None and provider is not None:
            calculus = trajectories.LengthCalculus(provider.length)
        self.calculus = calculus
        self.entry_port = None
        self.degree = None
        self.moves = 0
        self.annotation = None
        self.exhausted = False
        self._element = None
        self._offset = 0
        self._stack = [root(self)]

    def frame(self, expression):
        """
        Generator frame executing a trajectory expression.
        """
        if isinstance(expression, trajectories.Named):
            return self.frame(expression.body)
        if isinstance(expression, trajectories.R):
            return walk_frame(self, expression.k)
        if isinstance(expression, trajectories.Interleave):
            return walk_frame(self, expression.k, detour=expression.detour)
        if isinstance(expression, trajectories.Mirror):
            return mirror_frame(self, expression.child)
        if isinstance(expression, trajectories.Concat):
            return sequence_frame(self, expression.parts)
        if isinstance(expression, (trajectories.Power, trajectories.Repeat)):
            return power_frame(self, expression.child, expression.count)
        if isinstance(expression, trajectories.Reverse):
            return self.frame(expression.resolve())
        raise TypeError('Not a trajectory: {0!r}'.format(expression))

    def next_move(self, last_entry_port, degree):
        """
        Exit port for the current node, or ``None`` once exhausted.
        """
        self.entry_port = last_entry_port
        self.degree = degree
        while self._stack:
            try:
                item = next(self._stack[-1])
            except StopIteration:
                self._stack.pop()
                continue
            if isinstance(item, Element):
                self._element = item
                self._offset = 0
                continue
            if isinstance(item, int):
                self.annotation = self._annotate()
                self.moves += 1
                return item
            self._stack.append(item)
        self.exhausted = True
        self.annotation = None
        return None

    def _annotate(self):
        if self._element is None:
            return None
        annotation = StructuralAnnotation(
            self._element.piece, self._element.bit, self._element.kind,
            self._offset, self._element.length)
        self._offset += 1
        return annotation

    @property
    def depth(self):
        return len(self._stack)


def walk_frame(program, k, detour=None, log=None):
    """
    Step ``R(k)`` with its own entry-port context, detouring at every node.

    ``log`` collects the entry port of every arrival for a later backtrack.
    """
    entry = 0
    for increment in program.provider.increments(k):
        if detour is not None:
            yield program.frame(detour)
        yield (entry + increment) % program.degree
        entry = program.entry_port
        if log is not None:
            log.append(entry)
    if detour is not None:
        yield program.frame(detour)


def backtrack_frame(program, log, detour=None):
    """
    Retrace a logged walk by leaving through each recorded entry port.
    """
    for entry in reversed(log):
        if detour is not None:
            yield program.frame(detour)
        yield entry
    if detour is not None:
        yield program.frame(detour)


def mirror_frame(program, child):
    if isinstance(child, trajectories.R):
        log = []
        yield walk_frame(program, child.k, log=log)
        yield backtrack_frame(program, log)
    elif isinstance(child, trajectories.Interleave):
        log = []
        yield walk_frame(program, child.k, detour=child.detour, log=log)
        yield backtrack_frame(program, log, detour=child.detour.reversed())
    else:
        yield program.frame(child)
        yield program.frame(child.reversed())


def sequence_frame(program, parts):
    for part in parts:
        yield program.frame(part)


def power_frame(program, child, count):
    repetitions = itertools.count() if count is None else _count(count)
    for _ in repetitions:
        yield program.frame(child)


def _count(count):
    # range() would do, but counts here can exceed sys.maxsize
    index = 0
    while index < count:
        yield index
        index += 1


def script_frame(program, ports):
    for port in ports:
        yield port


def rv_frame(program, label):
    """
    The rendezvous route: pieces of segments, borders and fences, forever.
    """
    calculus = program.calculus
    bits = len(label)
    k = 1
    while True:
        limit = min(k, bits)
        for i in range(1, limit + 1):
            if label.bit(i):
                atom = trajectories.B(2 * k, calculus)
                atom_moves = calculus.moves('B', 2 * k)
            else:
                atom = trajectories.A(4 * k)
                atom_moves = calculus.moves('A', 4 * k)
            for kind in (ATOM_FIRST, ATOM_SECOND):
                yield Element(k, i, kind, atom_moves)
                yield program.frame(atom)
            if limit > i:
                yield Element(k, i, BORDER, calculus.moves('K', k))
                yield program.frame(trajectories.K(k, calculus))
            else:
                yield Element(k, i, FENCE, calculus.moves('Omega', k))
                yield program.frame(trajectories.Omega(k, calculus))
        k += 1


def compile_rv(label, provider):
    """
    Rendezvous route for a label (an ``int`` or a ``ModifiedLabel``).
    """
    if not isinstance(label, trajectories.ModifiedLabel):
        label = trajectories.modified_label(label)
    return RouteProgram(lambda program: rv_frame(program, label), provider)


def naive_frame(program, label, node_count):
    repeats = (program.provider.length(node_count) + 1) ** label
    yield Element(None, None, EXPLORATION, repeats * program.provider.length(node_count))
    yield program.frame(trajectories.Repeat(trajectories.R(node_count), repeats))


def compile_naive(label, node_count, provider):
    """
    Known-size baseline: repeat ``R(n)`` ``(P(n)+1)^L`` times, then stop.
    """
    return RouteProgram(
        lambda program: naive_frame(program, label, node_count), provider)


def compile_trajectory(expression, provider):
    return RouteProgram(lambda program: program.frame(expression), provider)


def compile_script(ports, then=None, provider=None):
    """
    Fixed exit ports, optionally followed by a trajectory.
    """
    def root(program):
        yield script_frame(program, ports)
        if then is not None:
            yield program.frame(then)
    return RouteProgram(root, provider)


Materialized = collections.namedtuple(
    'Materialized', ['nodes', 'exit_ports', 'entry_ports', 'annotations'])


def materialize(program, graph, start, max_moves=None):
    """
    Run a program directly against a graph, outside the engine.
    """
    node, entry = start, None
    nodes, exits, entries, annotations = [start], [], [], []
    while max_moves is None or len(exits) < max_moves:
        port = program.next_move(entry, graph.degree(node))
        if port is None:
            break
        node, entry = graph.step(node, port)
        nodes.append(node)
        exits.append(port)
        entries.append(entry)
        annotations.append(program.annotation)
    return Materialized(nodes, exits, entries, annotations)

