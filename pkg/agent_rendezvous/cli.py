"""
The ``agent-rendezvous`` console script.

Runs the simulator's management commands under the operator project's
settings, accepting dashed command names such as ``sweep-rv``.
"""

import os
import sys

import inflection

from django.core import management

SETTINGS_MODULE = 'agent_rendezvous_project.settings'


def command_argv(argv):
    """
    ``argv`` with a dashed command name translated to the module name.
    """
    argv = list(argv)
    if len(argv) > 1 and not argv[1].startswith('-'):
        argv[1] = inflection.underscore(argv[1])
    return argv


def main(argv=None):
    os.environ.setdefault('DJANGO_SETTINGS_MODULE', SETTINGS_MODULE)
    management.execute_from_command_line(
        command_argv(sys.argv if argv is None else argv))
