"""
Django settings for the agent_rendezvous_project operator project.

The simulator has no database, URLs or templates: the project only exists
to install the ``agent_rendezvous`` app, so that its management commands
run, and to configure logging and the simulator itself.

For the full list of settings and their values, see
https://docs.djangoproject.com/en/stable/ref/settings/
"""

import os

# Build paths inside the project like this: os.path.join(BASE_DIR, ...)
BASE_DIR = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))

# Nothing is served; the key only satisfies Django's checks
SECRET_KEY = os.environ.get(
    'AGENT_RENDEZVOUS_SECRET_KEY', 'agent-rendezvous-not-served')

DEBUG = False

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    'rest_framework',
    'agent_rendezvous',
]

DATABASES = {}


# Internationalization

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_TZ = True


# Logging: the simulator's loggers go to stderr so tables and traces
# written to stdout stay machine-readable.

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'simple': {
            'format': '%(levelname)s %(name)s: %(message)s',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'stream': 'ext://sys.stderr',
            'formatter': 'simple',
        },
    },
    'loggers': {
        'agent_rendezvous': {
            'handlers': ['console'],
            'level': os.environ.get('AGENT_RENDEZVOUS_LOG_LEVEL', 'INFO'),
            'propagate': False,
        },
    },
}


AGENT_RENDEZVOUS = {
    'CORPUS_MAX_NODES': 5,
    'LABELINGS_PER_TOPOLOGY': 25,
    'SEED': 0,
    'PHASE_TWO_MODE': 'elide',
    'WORKERS': int(os.environ.get('AGENT_RENDEZVOUS_WORKERS', 1)),
}
