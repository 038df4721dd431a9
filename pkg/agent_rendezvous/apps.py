from django.apps import AppConfig


class AgentRendezvousConfig(AppConfig):
    name = 'agent_rendezvous'
    verbose_name = 'Asynchronous agent rendezvous'
