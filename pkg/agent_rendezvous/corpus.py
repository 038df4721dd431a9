"""
Deterministic test corpus: every connected topology up to a size, sampled
port labelings, and the named graph families.
"""

import collections
import functools
import hashlib
import itertools
import logging
import math
import operator
import random
import re

import networkx

from rest_framework import exceptions as drf_exceptions

from . import graphs

logger = logging.getLogger(__name__)

# The networkx atlas enumerates every graph on up to 7 nodes
ATLAS_MAX_NODES = 7

SEPARATOR = '---'
PROVENANCE_PREFIX = 'provenance:'
HEADER_RE = re.compile(
    r'^#\s*corpus\s+max_nodes=(?P<max_nodes>\d+)\s+'
    r'labelings_per_topology=(?P<labelings>\d+)\s+seed=(?P<seed>-?\d+)\s*$')

CorpusEntry = collections.namedtuple('CorpusEntry', ['graph', 'provenance'])


class GraphCorpus(object):
    """
    Ordered port-labeled graphs with the parameters that generated them.
    """

    def __init__(self, entries, max_nodes=None, labelings_per_topology=None,
                 seed=None):
        self.entries = list(entries)
        self.max_nodes = max_nodes
        self.labelings_per_topology = labelings_per_topology
        self.seed = seed

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def graphs(self, max_nodes=None):
        return [
            entry.graph for entry in self.entries
            if max_nodes is None or entry.graph.node_count <= max_nodes]

    def topologies(self):
        """
        Distinct unlabeled topologies, as networkx graphs.
        """
        found = []
        for entry in self.entries:
            candidate = entry.graph.to_networkx()
            if not any(networkx.is_isomorphic(candidate, other) for other in found):
                found.append(candidate)
        return found

    def serialize(self):
        return serialize_corpus(self)

    @property
    def content_hash(self):
        return hashlib.sha256(self.serialize().encode('utf-8')).hexdigest()


def _labeling_count(topology):
    return functools.reduce(operator.mul, (
        math.factorial(degree) for _, degree in topology.degree()), 1)


def _all_labelings(topology):
    nodes = sorted(topology.nodes())
    choices = [
        itertools.permutations(sorted(topology.neighbors(node)))
        for node in nodes]
    for orders in itertools.product(*choices):
        yield dict(zip(nodes, [list(order) for order in orders]))


def _sampled_labelings(topology, count, seed, topology_index):
    """
    Distinct labelings drawn from a per-topology, per-draw seeded stream.
    """
    nodes = sorted(topology.nodes())
    seen = set()
    labelings = []
    attempts = 0
    while len(labelings) < count and attempts < count * 20:
        rng = random.Random('{0}:{1}:{2}'.format(seed, topology_index, attempts))
        attempts += 1
        orders = {}
        for node in nodes:
            order = sorted(topology.neighbors(node))
            rng.shuffle(order)
            orders[node] = order
        key = tuple(tuple(orders[node]) for node in nodes)
        if key in seen:
            continue
        seen.add(key)
        labelings.append(orders)
    return labelings


def labelings(topology, count, seed, topology_index):
    if _labeling_count(topology) <= count:
        return list(_all_labelings(topology))
    return _sampled_labelings(topology, count, seed, topology_index)


def path_graph(node_count):
    return graphs.PortLabeledGraph.from_networkx(networkx.path_graph(node_count))


def cycle_graph(node_count, clockwise=True):
    """
    Oriented ring: port 0 leads clockwise (``i -> i+1``) or counterclockwise.
    """
    if node_count < 3:
        raise drf_exceptions.ValidationError(
            {'node_count': ['cycles need at least 3 nodes']})
    forward, backward = (1, -1) if clockwise else (-1, 1)
    adjacency = [
        [((node + forward) % node_count, 1), ((node + backward) % node_count, 0)]
        for node in range(node_count)]
    return graphs.PortLabeledGraph(adjacency)


def star_graph(node_count):
    return graphs.PortLabeledGraph.from_networkx(networkx.star_graph(node_count - 1))


def complete_graph(node_count):
    return graphs.PortLabeledGraph.from_networkx(networkx.complete_graph(node_count))


def named_families(node_count):
    families = [
        ('path', path_graph(node_count)),
        ('star', star_graph(node_count)),
        ('complete', complete_graph(node_count)),
    ]
    if node_count >= 3:
        families[1:1] = [
            ('cycle-cw', cycle_graph(node_count, clockwise=True)),
            ('cycle-ccw', cycle_graph(node_count, clockwise=False)),
        ]
    return families


def generate_corpus(max_nodes, labelings_per_topology, seed):
    """
    Every connected topology on ``2 .. max_nodes`` nodes with sampled
    labelings, followed at each size by the named families.

    Exact duplicates are kept only once, under their first provenance.
    """
    if not 2 <= max_nodes <= ATLAS_MAX_NODES:
        raise drf_exceptions.ValidationError(
            {'max_nodes': ['must lie between 2 and {0}'.format(ATLAS_MAX_NODES)]})
    if labelings_per_topology < 1:
        raise drf_exceptions.ValidationError(
            {'labelings_per_topology': ['must be positive']})
    entries = []
    seen = set()

    def add(graph, provenance):
        if graph in seen:
            return
        seen.add(graph)
        entries.append(CorpusEntry(graph, provenance))

    atlas = networkx.graph_atlas_g()
    for node_count in range(2, max_nodes + 1):
        for topology_index, topology in enumerate(atlas):
            if topology.number_of_nodes() != node_count:
                continue
            if not networkx.is_connected(topology):
                continue
            for labeling_index, orders in enumerate(labelings(
                    topology, labelings_per_topology, seed, topology_index)):
                add(graphs.PortLabeledGraph.from_networkx(topology, orders),
                    'atlas:G{0}:labeling{1}'.format(topology_index, labeling_index))
        for family, graph in named_families(node_count):
            add(graph, 'family:{0}:n{1}'.format(family, node_count))
    corpus = GraphCorpus(
        entries, max_nodes=max_nodes,
        labelings_per_topology=labelings_per_topology, seed=seed)
    logger.info(
        'Generated corpus of %s graphs on at most %s nodes (seed %s)',
        len(corpus), max_nodes, seed)
    return corpus


def serialize_corpus(corpus):
    chunks = []
    for entry in corpus.entries:
        chunks.append(graphs.serialize(
            entry.graph, comments=['{0} {1}'.format(
                PROVENANCE_PREFIX, entry.provenance)]))
    header = ''
    if corpus.max_nodes is not None:
        header = '# corpus max_nodes={0} labelings_per_topology={1} seed={2}\n'.format(
            corpus.max_nodes, corpus.labelings_per_topology, corpus.seed)
    return header + (SEPARATOR + '\n').join(chunks)


def parse_corpus(text):
    """
    Parse a ``---`` separated corpus file, keeping line numbers file-relative.
    """
    lines = text.splitlines()
    parameters = {}
    entries = []
    chunk = []
    chunk_start = 1

    def flush():
        if not any(line.split('#', 1)[0].strip() for line in chunk):
            return
        provenance = ''
        for line in chunk:
            comment = line.strip().lstrip('#').strip()
            if line.strip().startswith('#') and comment.startswith(PROVENANCE_PREFIX):
                provenance = comment[len(PROVENANCE_PREFIX):].strip()
        graph = graphs.parse('\n'.join(chunk), first_line=chunk_start)
        entries.append(CorpusEntry(graph, provenance))

    for line_number, line in enumerate(lines, 1):
        match = HEADER_RE.match(line.strip())
        if match:
            parameters = dict(
                max_nodes=int(match.group('max_nodes')),
                labelings_per_topology=int(match.group('labelings')),
                seed=int(match.group('seed')))
            continue
        if line.strip() == SEPARATOR:
            flush()
            chunk = []
            chunk_start = line_number + 1
            continue
        if not chunk:
            chunk_start = line_number
        chunk.append(line)
    flush()
    return GraphCorpus(entries, **parameters)


def load_corpus(path):
    with open(path) as corpus_file:
        return parse_corpus(corpus_file.read())
