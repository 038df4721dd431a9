"""
Re-execute a recorded trace from its header and compare it line by line.
"""

import collections
import logging

from rest_framework import exceptions as drf_exceptions

from . import graphs
from . import parsers
from . import rendezvous
from . import renderers
from . import schedulers
from . import serializers
from . import sgl
from . import uxs

logger = logging.getLogger(__name__)

ReplayResult = collections.namedtuple(
    'ReplayResult', ['identical', 'difference', 'trace'])
ReplayResult.__doc__ = """
``difference`` is the 1-based number of the first differing line, or
``None`` when the traces are byte-identical.
"""


def render_trace(trace):
    return renderers.JSONLinesRenderer().render(serializers.trace_lines(trace))


def rerun(trace):
    """
    Run the recorded configuration again under the recorded decisions.
    """
    header = trace.header
    graph = graphs.parse(header['graph'])
    if graph.content_hash != header['graph_hash']:
        raise drf_exceptions.ValidationError(
            {'graph_hash': ['the graph does not match its recorded hash']})
    provider = uxs.provider_from_config(header['provider'])
    if provider.content_hash != header['provider']['hash']:
        raise drf_exceptions.ValidationError(
            {'provider': ['the provider does not match its recorded hash']})
    scheduler = schedulers.ReplayScheduler(
        trace.decisions(), seed=header['seed'], name=header['scheduler'])
    options = dict(header['engine'])
    cap = options.pop('step_cap')
    agents = header['agents']
    kind = header['kind']
    if kind == 'rendezvous':
        first, second = agents
        return rendezvous.run_rendezvous(
            graph, first['label'], second['label'],
            (first['start'], second['start']), scheduler, cap=cap,
            provider=provider, algorithm=header['algorithm'],
            **options).trace
    if kind == 'tunnel':
        walker = next(
            agent for agent in agents
            if agent['label'] == rendezvous.TUNNEL_WALKER)
        return rendezvous.tunnel_scenario(
            graph, header['m'], header['v'], scheduler,
            a_start=walker['start'], provider=provider, form=header['form'],
            cap=cap, **options).trace
    return sgl.run_sgl(
        graph,
        [(agent['label'], agent['start'], agent['value'])
         for agent in agents],
        scheduler, provider, cap=cap,
        phase_two_mode=header['phase_two_mode'],
        max_nodes=header['max_nodes'], **options).trace


def replay(stream):
    """
    Re-execute the trace in ``stream`` and compare the rendered traces.
    """
    recorded = stream.read()
    trace = serializers.load_trace(
        parsers.JSONLinesParser().parse(recorded.splitlines(True)))
    replayed = render_trace(rerun(trace))
    if replayed == recorded:
        return ReplayResult(True, None, trace)
    pairs = zip(recorded.splitlines(), replayed.splitlines())
    difference = next(
        (number for number, (old, new) in enumerate(pairs, 1) if old != new),
        min(len(recorded.splitlines()), len(replayed.splitlines())) + 1)
    logger.warning('Replay differs from the recorded trace at line %s',
                   difference)
    return ReplayResult(False, difference, trace)
