"""
Django settings for the cavity photodetection simulator.
"""

import math
from pathlib import Path
from decouple import config

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent


# ==================================================================
# SECURITY
# ==================================================================
SECRET_KEY = config('SECRET_KEY', default='django-insecure-change-me')
DEBUG = config('DEBUG', default=False, cast=bool)
ALLOWED_HOSTS = ['*']


# ==================================================================
# APPLICATION DEFINITION
# ==================================================================
INSTALLED_APPS = [
    # Third-party
    'rest_framework',
    # Project apps
    'detectors',
    'photodetection',
]

MIDDLEWARE = [
    'django.middleware.security.SecurityMiddleware',
    'django.middleware.common.CommonMiddleware',
]

ROOT_URLCONF = 'core.urls'

WSGI_APPLICATION = 'core.wsgi.application'


# ==================================================================
# DATABASE (none, every computation runs in memory)
# ==================================================================
DATABASES = {}


# ==================================================================
# INTERNATIONALIZATION
# ==================================================================
LANGUAGE_CODE = 'en-us'
TIME_ZONE = 'UTC'
USE_I18N = False
USE_TZ = True


# ==================================================================
# DJANGO REST FRAMEWORK
# ==================================================================
REST_FRAMEWORK = {
    'DEFAULT_RENDERER_CLASSES': [
        'rest_framework.renderers.JSONRenderer',
    ],
    'DEFAULT_PARSER_CLASSES': [
        'rest_framework.parsers.JSONParser',
    ],
    'DEFAULT_AUTHENTICATION_CLASSES': [],
    'DEFAULT_PERMISSION_CLASSES': [
        'rest_framework.permissions.AllowAny',
    ],
    'UNAUTHENTICATED_USER': None,
}


# ==================================================================
# SIMULATOR DEFAULTS
# ==================================================================
PHOTODETECTION = {
    'GRID_POINTS': config('PHOTODETECTION_GRID_POINTS', default=181, cast=int),
    'FIELD_DIM': config('PHOTODETECTION_FIELD_DIM', default=2, cast=int),
    'OMEGA_TAU': config('PHOTODETECTION_OMEGA_TAU', default=math.pi / 2, cast=float),
    'SEED': config('PHOTODETECTION_SEED', default=0, cast=int),
    'OUTPUT_FORMAT': config('PHOTODETECTION_OUTPUT_FORMAT', default='csv'),
}


# ==================================================================
# LOGGING
# ==================================================================
LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'simple': {
            'format': '{levelname} {name}: {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'simple',
        },
    },
    'loggers': {
        'detectors': {
            'handlers': ['console'],
            'level': config('LOG_LEVEL', default='WARNING'),
        },
        'photodetection': {
            'handlers': ['console'],
            'level': config('LOG_LEVEL', default='WARNING'),
        },
    },
}


# ==================================================================
# CELERY CONFIGURATION
# ==================================================================
CELERY_BROKER_URL = config('REDIS_URL', default='redis://redis:6379/0')
CELERY_RESULT_BACKEND = config('REDIS_URL', default='redis://redis:6379/0')
CELERY_ACCEPT_CONTENT = ['json']
CELERY_TASK_SERIALIZER = 'json'
CELERY_RESULT_SERIALIZER = 'json'
CELERY_TIMEZONE = 'UTC'
