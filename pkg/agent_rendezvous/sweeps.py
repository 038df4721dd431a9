"""
Fan rendezvous and SGL runs out over a corpus, in a process pool.

Tasks only carry plain data so that they pickle; results come back sorted
by task key whatever order the workers finish in.
"""

import collections
import concurrent.futures
import itertools
import logging

import django

from .settings import sim_settings
from . import graphs
from . import rendezvous
from . import renderers
from . import replay
from . import schedulers
from . import sgl
from . import uxs

logger = logging.getLogger(__name__)

RendezvousTask = collections.namedtuple('RendezvousTask', [
    'key', 'graph_id', 'graph', 'labels', 'starts', 'scheduler', 'seed',
    'algorithm', 'provider', 'cap', 'options'])

SGLTask = collections.namedtuple('SGLTask', [
    'key', 'graph_id', 'graph', 'agents', 'scheduler', 'seed',
    'phase_two_mode', 'provider', 'cap', 'options'])

SweepResult = collections.namedtuple(
    'SweepResult', ['key', 'row', 'violation', 'trace'])
SweepResult.__doc__ = """
A table row, whether it is a property violation and, for violations, the
rendered replayable trace.
"""


def scheduler_runs(names, seeds, first_seed=0):
    """
    ``(name, seed)`` pairs: seeded schedulers once per seed, others once.
    """
    for name in names:
        scheduler_class = sim_settings.SCHEDULER_CLASSES[name]
        if scheduler_class is schedulers.RandomScheduler:
            for seed in range(first_seed, first_seed + seeds):
                yield name, seed
        else:
            yield name, None


def graph_id(index, entry):
    return '{0}:{1}'.format(index, entry.provenance or 'graph')


def rendezvous_tasks(corpus, labels, names, seeds, provider, cap=None,
                     max_nodes=None, algorithm='rv', first_seed=0,
                     **options):
    """
    Every graph x label pair x ordered start pair x scheduler run.
    """
    config = uxs.provider_config(provider)
    runs = list(scheduler_runs(names, seeds, first_seed=first_seed))
    for index, entry in enumerate(corpus):
        graph = entry.graph
        if max_nodes is not None and graph.node_count > max_nodes:
            continue
        text = graphs.serialize(graph)
        for pair in itertools.combinations(sorted(set(labels)), 2):
            for starts in itertools.permutations(range(graph.node_count), 2):
                for name, seed in runs:
                    yield RendezvousTask(
                        (index, pair, starts, name, seed),
                        graph_id(index, entry), text, pair, starts, name,
                        seed, algorithm, config, cap, options)


def sgl_tasks(corpus, teams, names, seeds, provider, cap=None,
              max_nodes=None, phase_two_mode=None, first_seed=0, **options):
    """
    Every graph x team x scheduler run; teams are label tuples, placed on
    the first nodes of each graph with their labels as values.
    """
    config = uxs.provider_config(provider)
    runs = list(scheduler_runs(names, seeds, first_seed=first_seed))
    for index, entry in enumerate(corpus):
        graph = entry.graph
        if max_nodes is not None and graph.node_count > max_nodes:
            continue
        text = graphs.serialize(graph)
        for team in teams:
            if len(team) > graph.node_count:
                continue
            agents = tuple(
                (label, start, label) for start, label in enumerate(team))
            for name, seed in runs:
                yield SGLTask(
                    (index, tuple(team), name, seed), graph_id(index, entry),
                    text, agents, name, seed, phase_two_mode, config, cap,
                    options)


def run_rendezvous_task(task):
    graph = graphs.parse(task.graph)
    first, second = task.labels
    outcome = rendezvous.run_rendezvous(
        graph, first, second, task.starts,
        schedulers.get_scheduler(task.scheduler, seed=task.seed),
        cap=task.cap, provider=uxs.provider_from_config(task.provider),
        algorithm=task.algorithm, **task.options)
    row = collections.OrderedDict([
        ('graph_id', task.graph_id), ('n', graph.node_count),
        ('L1', first), ('L2', second), ('scheduler', task.scheduler),
        ('seed', task.seed), ('met', outcome.met),
        ('total_cost', outcome.total_cost),
        ('pi_bound_exceeded', outcome.bound_exceeded)])
    violation = not outcome.met or outcome.bound_exceeded
    return SweepResult(
        task.key, row, violation,
        replay.render_trace(outcome.trace) if violation else None)


def run_sgl_task(task):
    graph = graphs.parse(task.graph)
    report = sgl.run_sgl(
        graph, task.agents,
        schedulers.get_scheduler(task.scheduler, seed=task.seed),
        uxs.provider_from_config(task.provider), cap=task.cap,
        phase_two_mode=task.phase_two_mode, **task.options)
    row = collections.OrderedDict([
        ('graph_id', task.graph_id), ('n', graph.node_count),
        ('k', len(task.agents)),
        ('labels', ','.join(str(agent[0]) for agent in task.agents)),
        ('scheduler', task.scheduler), ('seed', task.seed),
        ('terminated', not report.nonterminated),
        ('correct', report.correct), ('total_cost', report.total_cost),
        ('elided', sum(report.elided.values()))])
    violation = report.nonterminated or not report.correct
    return SweepResult(
        task.key, row, violation,
        replay.render_trace(report.trace) if violation else None)


def run_tasks(function, tasks, workers=None):
    """
    Results of ``function`` over ``tasks``, sorted by task key.
    """
    workers = sim_settings.WORKERS if workers is None else workers
    tasks = list(tasks)
    if workers <= 1:
        results = [function(task) for task in tasks]
    else:
        with concurrent.futures.ProcessPoolExecutor(
                max_workers=workers, initializer=django.setup) as executor:
            results = list(executor.map(function, tasks, chunksize=8))
    results.sort(key=lambda result: result.key)
    violations = sum(1 for result in results if result.violation)
    logger.info(
        'Sweep of %s runs on %s workers: %s violations',
        len(results), workers, violations)
    return results


def write_table(results, stream, header):
    stream.write(renderers.TSVRenderer().render(
        [result.row for result in results],
        renderer_context={'header': header}).decode('utf-8'))
