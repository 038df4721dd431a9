"""
Simulator settings, read from the ``AGENT_RENDEZVOUS`` Django setting.

For example your project's ``settings.py`` file might look like this::

    AGENT_RENDEZVOUS = {
        'MOVE_BUDGET': 8,
        'SCHEDULER_CLASSES': {
            'round_robin': 'agent_rendezvous.schedulers.RoundRobinScheduler',
        },
    }

Access settings through ``sim_settings``, as with DRF's ``api_settings``.
"""

from django.conf import settings
from django.core.signals import setting_changed

from rest_framework import settings as drf_settings

SETTING_NAME = 'AGENT_RENDEZVOUS'

DEFAULTS = {
    # Test corpus
    'CORPUS_MAX_NODES': 5,
    'LABELINGS_PER_TOPOLOGY': 25,
    'SEED': 0,

    # Engine liveness
    'MOVE_BUDGET': 8,
    'WAKE_BUDGET': 16,
    'FAIRNESS_BUDGET': 64,
    'STEP_CAP': 200000,

    # Exploration sequence search
    'UXS_SEARCH_BUDGET': 2000000,
    'UXS_RESTARTS': 8,

    # Exploration with a stationary token, None means corpus size + 1
    'EST_MAX_NODES': None,

    # Algorithm SGL
    'PHASE_TWO_MODE': 'elide',

    'SCHEDULER_CLASSES': {
        'round_robin': 'agent_rendezvous.schedulers.RoundRobinScheduler',
        'random': 'agent_rendezvous.schedulers.RandomScheduler',
        'stalker_avoider': 'agent_rendezvous.schedulers.StalkerAvoider',
    },

    'WORKERS': 1,
}

PHASE_TWO_MODES = ('exact', 'elide')


class SimulationSettings(drf_settings.APISettings):
    """
    ``APISettings`` reading the simulator's own Django setting.
    """

    @property
    def user_settings(self):
        if not hasattr(self, '_user_settings'):
            self._user_settings = getattr(settings, SETTING_NAME, {})
        return self._user_settings

    def __getattr__(self, attr):
        if attr == 'SCHEDULER_CLASSES':
            if attr not in self.defaults:  # pragma: no cover
                raise AttributeError(attr)
            value = dict(self.defaults[attr])
            value.update(self.user_settings.get(attr, {}))
            value = {
                name: drf_settings.perform_import(path, attr)
                for name, path in value.items()}
            self._cached_attrs.add(attr)
            setattr(self, attr, value)
            return value
        return super(SimulationSettings, self).__getattr__(attr)

    @property
    def est_max_nodes(self):
        if self.EST_MAX_NODES is not None:
            return self.EST_MAX_NODES
        return self.CORPUS_MAX_NODES + 1


sim_settings = SimulationSettings(None, DEFAULTS)


def reload_sim_settings(*args, **kwargs):
    if kwargs['setting'] == SETTING_NAME:
        sim_settings.reload()


setting_changed.connect(reload_sim_settings)
