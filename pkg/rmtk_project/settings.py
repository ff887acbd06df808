"""
Django settings for rmtk_project project.

This configuration includes:
1. Environment variable loading via django-environ.
2. Application definition (one app per numerical module).
3. Numerical defaults (RMTK dict) and worker override (RMTK_THREADS).
4. Logging configuration (File & Console).
"""

import os
from pathlib import Path
import environ  # type: ignore

# 1. Initialize Environment Variables
# ------------------------------------------------------------------------------
env = environ.Env(
    # set casting, default value
    DEBUG=(bool, False),
    RMTK_LOG_LEVEL=(str, 'WARNING'),
)

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

# Read .env file
environ.Env.read_env(os.path.join(BASE_DIR, '.env'))


# 2. Core Settings
# ------------------------------------------------------------------------------
SECRET_KEY = env('SECRET_KEY', default='rmtk-local-only-key')

DEBUG = env('DEBUG')

ALLOWED_HOSTS = []


# 3. Application Definition
# ------------------------------------------------------------------------------
INSTALLED_APPS = [
    # Third-Party Apps
    'rest_framework',

    # Local Project Apps (Modular Monolith Structure)
    'core.apps.CoreConfig',
    'special.apps.SpecialConfig',
    'kernels.apps.KernelsConfig',
    'correlations.apps.CorrelationsConfig',
    'ensembles_mc.apps.EnsemblesMcConfig',
    'superint.apps.SuperintConfig',
]

# No persistence layer: everything is computed on demand.
DATABASES = {}

USE_TZ = True

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'


# 4. Numerical Defaults
# ------------------------------------------------------------------------------
# Read through core.config.ConfigurationManager; every CLI flag falls back here.
RMTK = {
    'QUAD_ABS_TOL': env.float('RMTK_QUAD_ABS_TOL', default=1e-11),
    'QUAD_REL_TOL': env.float('RMTK_QUAD_REL_TOL', default=1e-11),
    'QUAD_MAX_SUBDIVISIONS': env.int('RMTK_QUAD_MAX_SUBDIVISIONS', default=200),
    'ETA_LADDER': [0.04, 0.02, 0.01, 0.005, 0.0025],
    'CONTOUR_SHIFT': 1.0,
    'DEGENERACY_FLOOR': 1e-8,
    'JET_GUARD_TERMS': 4,
    'IMAG_RESIDUE_TOL': 1e-9,
    'MC_SAMPLES': env.int('RMTK_MC_SAMPLES', default=100000),
    'MC_SEED': env.int('RMTK_MC_SEED', default=0),
    'MC_CHUNK_SIZE': 2048,
    'MC_WORKERS': 1,
    'MC_ETA_FRACTION': 0.05,
    'MC_ETA_CLAMP': (1e-4, 0.1),
    'KRAMERS_PAIR_TOL': 1e-8,
    'CSV_DIGITS': 17,
}

# Overrides --workers when set.
RMTK_THREADS = env.int('RMTK_THREADS', default=None)


# 5. Rest Framework Configuration
# ------------------------------------------------------------------------------
# Serializers validate CLI run configurations only; there is no API surface.
REST_FRAMEWORK = {
    'UNAUTHENTICATED_USER': None,
}


# 6. Logging Configuration
# ------------------------------------------------------------------------------
# Logs to stderr and to a file in the /logs directory; stdout carries results.
LOG_DIR = os.path.join(BASE_DIR, 'logs')
os.makedirs(LOG_DIR, exist_ok=True)

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '{levelname} {asctime} {module} {message}',
            'style': '{',
        },
        'simple': {
            'format': '{levelname} {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'level': env('RMTK_LOG_LEVEL'),
            'class': 'logging.StreamHandler',
            'formatter': 'simple',
        },
        'file': {
            'level': 'INFO',
            'class': 'logging.FileHandler',
            'filename': os.path.join(LOG_DIR, 'rmtk.log'),
            'formatter': 'verbose',
        },
    },
    'loggers': {
        'django': {
            'handlers': ['console', 'file'],
            'level': 'WARNING',
            'propagate': True,
        },
        'core': {
            'handlers': ['console', 'file'],
            'level': 'DEBUG',
            'propagate': False,
        },
        'special': {
            'handlers': ['console', 'file'],
            'level': 'INFO',
            'propagate': False,
        },
        'kernels': {
            'handlers': ['console', 'file'],
            'level': 'INFO',
            'propagate': False,
        },
        'correlations': {
            'handlers': ['console', 'file'],
            'level': 'INFO',
            'propagate': False,
        },
        'ensembles_mc': {
            'handlers': ['console', 'file'],
            'level': 'DEBUG',
            'propagate': False,
        },
        'superint': {
            'handlers': ['console', 'file'],
            'level': 'DEBUG',
            'propagate': False,
        },
    },
}
