"""
Exploration sequences: the port rule, integrality checks, a certified
search over a corpus, and the length functions built from them.
"""

import collections
import hashlib
import logging
import random

from rest_framework import exceptions as drf_exceptions

from .settings import sim_settings
from . import exceptions

logger = logging.getLogger(__name__)

RouteTrace = collections.namedtuple(
    'RouteTrace', ['nodes', 'exit_ports', 'entry_ports'])
IntegralityCheck = collections.namedtuple(
    'IntegralityCheck', ['integral', 'uncovered'])


class ExplorationSequence(object):
    """
    Increments ``x_1 .. x_P`` driving ``q = (p + x_i) mod d``.
    """

    def __init__(self, target_size, increments, certified_against=''):
        self.target_size = target_size
        self.increments = tuple(int(increment) for increment in increments)
        self.certified_against = certified_against
        if any(increment < 0 for increment in self.increments):
            raise drf_exceptions.ValidationError(
                {'increments': ['increments must not be negative']})

    def __len__(self):
        return len(self.increments)

    def __eq__(self, other):
        return (
            isinstance(other, ExplorationSequence) and
            (self.target_size, self.increments) ==
            (other.target_size, other.increments))

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash((self.target_size, self.increments))

    def __repr__(self):
        return '<ExplorationSequence k={0} P={1}>'.format(
            self.target_size, len(self))


def induce_route(sequence, graph, start):
    """
    Walk the sequence from ``start`` with the conventional entry port 0.
    """
    increments = getattr(sequence, 'increments', sequence)
    node, entry = start, 0
    nodes, exits, entries = [start], [], []
    for increment in increments:
        exit_port = (entry + increment) % graph.degree(node)
        node, entry = graph.step(node, exit_port)
        nodes.append(node)
        exits.append(exit_port)
        entries.append(entry)
    return RouteTrace(nodes, exits, entries)


def is_integral(sequence, graph, start):
    """
    Whether the induced route covers every edge, with one uncovered witness.
    """
    trace = induce_route(sequence, graph, start)
    covered = set(
        graph.edge(node, port)
        for node, port in zip(trace.nodes, trace.exit_ports))
    for edge in graph.edges():
        if edge not in covered:
            return IntegralityCheck(False, edge)
    return IntegralityCheck(True, None)


class _Target(object):
    """
    One (graph, start) pair, with its edges numbered as bits.
    """

    __slots__ = ('graph', 'start', 'bits', 'full')

    def __init__(self, graph, start):
        self.graph = graph
        self.start = start
        self.bits = {}
        for index, edge in enumerate(graph.edges()):
            bit = 1 << index
            self.bits[(edge.origin, edge.origin_port)] = bit
            self.bits[(edge.end, edge.end_port)] = bit
        self.full = (1 << graph.edge_count) - 1

    def advance(self, state, increment):
        node, entry, mask = state
        exit_port = (entry + increment) % self.graph.degree(node)
        neighbor, entry = self.graph.adjacency[node][exit_port]
        return (neighbor, entry, mask | self.bits[(node, exit_port)])

    def missing(self, state):
        return bin(self.full & ~state[2]).count('1')


class _Search(object):
    """
    Budgeted search state shared by the exhaustive and greedy phases.
    """

    def __init__(self, targets, alphabet, budget):
        self.targets = targets
        self.alphabet = alphabet
        self.budget = budget
        self.spent = 0

    def charge(self):
        if self.spent >= self.budget:
            raise exceptions.BudgetExhausted()
        self.spent += 1

    def initial(self):
        return [(target.start, 0, 0) for target in self.targets]

    def step(self, states, increment):
        self.charge()
        return [
            target.advance(state, increment)
            for target, state in zip(self.targets, states)]

    def deficit(self, states):
        return max(
            target.missing(state)
            for target, state in zip(self.targets, states))

    def exhaustive(self, length):
        """
        Lexicographically first sequence of exactly ``length`` increments.
        """
        prefix = []

        def descend(states):
            remaining = length - len(prefix)
            missing = self.deficit(states)
            if missing == 0:
                return remaining == 0 or None
            if missing > remaining:
                return None
            for increment in self.alphabet:
                prefix.append(increment)
                if descend(self.step(states, increment)):
                    return True
                prefix.pop()
            return None

        if descend(self.initial()):
            return list(prefix)
        return None

    def greedy(self, rng, max_length):
        """
        Pick the increment covering the most new edges, random among ties.
        """
        states = self.initial()
        sequence = []
        while self.deficit(states) and len(sequence) < max_length:
            scored = []
            for increment in self.alphabet:
                candidate = self.step(states, increment)
                gain = sum(
                    target.missing(old) - target.missing(new)
                    for target, old, new in zip(self.targets, states, candidate))
                scored.append((gain, increment, candidate))
            best = max(gain for gain, _, _ in scored)
            gain, increment, states = rng.choice(
                [entry for entry in scored if entry[0] == best])
            sequence.append(increment)
        if self.deficit(states):
            return None
        return sequence


def find_uxs(corpus, k, search_budget=None, seed=None, restarts=None):
    """
    Shortest, then lexicographically smallest, sequence integral on every
    corpus graph with at most ``k`` nodes from every start.

    Iterative deepening runs on half of the budget; seeded greedy restarts
    share the rest when the exhaustive phase runs out.
    """
    if search_budget is None:
        search_budget = sim_settings.UXS_SEARCH_BUDGET
    if seed is None:
        seed = sim_settings.SEED
    if restarts is None:
        restarts = sim_settings.UXS_RESTARTS
    corpus_hash = getattr(corpus, 'content_hash', '')
    targets = [
        _Target(graph, start)
        for graph in corpus.graphs(max_nodes=k)
        for start in range(graph.node_count)]
    if search_budget <= 0:
        raise exceptions.BudgetExhausted(
            'Search budget exhausted before a sequence was found for k={0}.'.format(k))
    if not targets:
        return ExplorationSequence(k, [0], certified_against=corpus_hash)
    alphabet = list(range(max(k, 1)))
    max_length = sum(target.graph.edge_count for target in targets) + 1

    exhaustive = _Search(targets, alphabet, search_budget // 2 or 1)
    length = exhaustive.deficit(exhaustive.initial())
    try:
        while length <= max_length:
            found = exhaustive.exhaustive(length)
            if found is not None:
                logger.info(
                    'Found exploration sequence for k=%s of length %s by '
                    'iterative deepening', k, len(found))
                return ExplorationSequence(k, found, certified_against=corpus_hash)
            length += 1
    except exceptions.BudgetExhausted:
        logger.debug(
            'Iterative deepening for k=%s stopped at length %s', k, length)

    greedy = _Search(
        targets, alphabet, search_budget - exhaustive.spent)
    candidates = []
    try:
        for restart in range(max(restarts, 1)):
            rng = random.Random('{0}:{1}:{2}'.format(seed, k, restart))
            found = greedy.greedy(rng, max_length)
            logger.debug(
                'Greedy restart %s for k=%s: %s', restart, k,
                'length {0}'.format(len(found)) if found else 'no cover')
            if found is not None:
                candidates.append(found)
    except exceptions.BudgetExhausted:
        pass
    if not candidates:
        raise exceptions.BudgetExhausted(
            'Search budget exhausted before a sequence was found for k={0}.'.format(k))
    best = min(candidates, key=lambda found: (len(found), found))
    logger.info(
        'Found exploration sequence for k=%s of length %s by greedy restarts',
        k, len(best))
    return ExplorationSequence(k, best, certified_against=corpus_hash)


def verify_uxs(sequence, corpus):
    """
    Every uncovered ``(graph index, start, edge)`` for graphs up to ``k``.
    """
    failures = []
    for index, entry in enumerate(corpus.entries):
        if entry.graph.node_count > sequence.target_size:
            continue
        for start in range(entry.graph.node_count):
            check = is_integral(sequence, entry.graph, start)
            if not check.integral:
                failures.append((index, start, check.uncovered))
    return failures


class LengthFunction(object):
    """
    ``k -> P(k)``, from a table or a callable, checked non-decreasing.
    """

    def __init__(self, lengths, name=''):
        self.name = name
        if callable(lengths):
            self._function = lengths
            self._table = None
        else:
            self._function = None
            self._table = dict(lengths)
            previous = None
            for k in sorted(self._table):
                if previous is not None and self._table[k] < self._table[previous]:
                    raise drf_exceptions.ValidationError(
                        {'lengths': ['P must be non-decreasing, P({0}) < P({1})'.format(
                            k, previous)]})
                previous = k

    def __call__(self, k):
        if k < 1:
            raise exceptions.UndefinedLength(
                'The length function is undefined at k={0}.'.format(k))
        if self._function is not None:
            return self._function(k)
        try:
            return self._table[k]
        except KeyError:
            raise exceptions.UndefinedLength(
                'The length function is undefined at k={0}.'.format(k))

    def __repr__(self):
        return '<LengthFunction {0}>'.format(self.name or 'table')


TOY_SHAPES = {
    'constant1': lambda k: 1,
    'linear': lambda k: k,
}


def toy_length_function(shape):
    try:
        return LengthFunction(TOY_SHAPES[shape], name=shape)
    except KeyError:
        raise drf_exceptions.ValidationError(
            {'shape': ['unknown shape {0!r}, choose from {1}'.format(
                shape, ', '.join(sorted(TOY_SHAPES)))]})


class SequenceProvider(object):
    """
    Supplies ``R(k)`` increments and the matching length function.
    """

    name = ''

    def increments(self, k):
        raise NotImplementedError(
            '`increments()` must be implemented.')  # pragma: no cover

    @property
    def length(self):
        return LengthFunction(lambda k: len(self.increments(k)), name=self.name)

    @property
    def content_hash(self):
        return hashlib.sha256(self.name.encode('utf-8')).hexdigest()


class ToySequenceProvider(SequenceProvider):
    """
    Zero increments sized by a toy length function; not integral in general.
    """

    def __init__(self, shape):
        self.name = shape
        self._length = toy_length_function(shape)

    def increments(self, k):
        return (0,) * self._length(k)

    @property
    def length(self):
        return self._length


class CertifiedSequenceProvider(SequenceProvider):
    """
    Certified sequences padded to a non-decreasing length, extended as a
    constant beyond the largest certified size.
    """

    name = 'certified'

    def __init__(self, sequences):
        self.sequences = {
            sequence.target_size: sequence for sequence in sequences}
        if not self.sequences:
            raise drf_exceptions.ValidationError(
                {'sequences': ['at least one certified sequence is required']})
        self.max_size = max(self.sequences)
        self._padded = {}
        previous = (0,)
        for k in range(1, self.max_size + 1):
            sequence = self.sequences.get(k)
            increments = sequence.increments if sequence is not None else previous
            if len(increments) < len(previous):
                increments = pad(increments, len(previous))
            self._padded[k] = increments
            previous = increments

    def increments(self, k):
        if k < 1:
            raise exceptions.UndefinedLength(
                'The length function is undefined at k={0}.'.format(k))
        return self._padded[min(k, self.max_size)]

    @property
    def length(self):
        return LengthFunction(
            lambda k: len(self.increments(k)), name=self.name)

    @property
    def content_hash(self):
        return hashlib.sha256(
            serialize_sequences(
                [self.sequences[k] for k in sorted(self.sequences)]
            ).encode('utf-8')).hexdigest()


def pad(increments, length):
    """
    Repeat increments cyclically; extra steps only add coverage.
    """
    padded = list(increments)
    index = 0
    while len(padded) < length:
        padded.append(increments[index % len(increments)])
        index += 1
    return tuple(padded)


def serialize_sequences(sequences):
    lines = []
    certified = set(
        sequence.certified_against for sequence in sequences
        if sequence.certified_against)
    for corpus_hash in sorted(certified):
        lines.append('# certified_against {0}'.format(corpus_hash))
    for sequence in sequences:
        lines.append('uxs {0} {1}'.format(sequence.target_size, len(sequence)))
        lines.append(' '.join(str(increment) for increment in sequence.increments))
    return '\n'.join(lines) + '\n'


def parse_sequences(text):
    """
    Parse ``uxs <k> <P>`` records, each followed by ``P`` increments.
    """
    certified_against = ''
    tokens = []
    for line_number, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        if stripped.startswith('#'):
            parts = stripped.lstrip('#').split()
            if len(parts) == 2 and parts[0] == 'certified_against':
                certified_against = parts[1]
            continue
        column = 0
        for token in line.split():
            column = line.index(token, column)
            tokens.append((line_number, column + 1, token))
            column += len(token)

    def integer(position):
        line_number, column, token = position
        try:
            return int(token)
        except ValueError:
            raise exceptions.GraphParseError(
                'expected integer, got {0!r}'.format(token),
                line=line_number, column=column)

    sequences = []
    index = 0
    while index < len(tokens):
        line_number, column, token = tokens[index]
        if token != 'uxs':
            raise exceptions.GraphParseError(
                "expected 'uxs <k> <P>'", line=line_number, column=column)
        if index + 2 >= len(tokens):
            raise exceptions.GraphParseError(
                'truncated sequence header', line=line_number, column=column)
        k = integer(tokens[index + 1])
        length = integer(tokens[index + 2])
        window = tokens[index + 3:index + 3 + length]
        if len(window) != length or any(
                position[2] == 'uxs' for position in window):
            raise exceptions.GraphParseError(
                'expected {0} increments'.format(length),
                line=line_number, column=column)
        increments = [integer(position) for position in window]
        sequences.append(ExplorationSequence(
            k, increments, certified_against=certified_against))
        index += 3 + length
    return sequences


def load_provider(path):
    with open(path) as sequence_file:
        return CertifiedSequenceProvider(parse_sequences(sequence_file.read()))


def provider_config(provider):
    """
    Self-contained description of a provider for run headers.
    """
    config = collections.OrderedDict([
        ('name', provider.name), ('hash', provider.content_hash)])
    if isinstance(provider, CertifiedSequenceProvider):
        config['sequences'] = serialize_sequences(
            [provider.sequences[k] for k in sorted(provider.sequences)])
    return config


def provider_from_config(config):
    if 'sequences' in config:
        return CertifiedSequenceProvider(parse_sequences(config['sequences']))
    return ToySequenceProvider(config['name'])
