"""
Django settings for the BispectralBench project.

The project has no web surface: the ``workbench`` app is driven through
management commands, and the database only holds named sessions and the
job log.

For the full list of settings and their values, see
https://docs.djangoproject.com/en/5.2/ref/settings/
"""

from pathlib import Path
import os

import dj_database_url

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent


# SECURITY WARNING: keep the secret key used in production secret!
SECRET_KEY = os.environ.get(
    "DJANGO_SECRET_KEY", "django-insecure-bispectral-workbench-local-only"
)

DEBUG = os.environ.get("DJANGO_DEBUG", "false").lower() in ("1", "true", "yes")

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    "django.contrib.contenttypes",
    "workbench",
]


# Database
# DATABASE_URL selects the backend; postgres:// URLs go through psycopg.

DATABASES = {
    "default": dj_database_url.config(
        default=f"sqlite:///{BASE_DIR / 'db.sqlite3'}",
        conn_max_age=600,
    )
}


# Internationalization

LANGUAGE_CODE = "en-us"

TIME_ZONE = "UTC"

USE_I18N = False

USE_TZ = True

DEFAULT_AUTO_FIELD = "django.db.models.BigAutoField"


# Logging

WORKBENCH_LOG_LEVEL = os.environ.get("WORKBENCH_LOG_LEVEL", "WARNING").upper()

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "verbose": {
            "format": "{asctime} {levelname} {name}: {message}",
            "style": "{",
        },
    },
    "handlers": {
        "console": {
            "class": "logging.StreamHandler",
            "formatter": "verbose",
        },
    },
    "loggers": {
        "workbench": {
            "handlers": ["console"],
            "level": WORKBENCH_LOG_LEVEL,
            "propagate": False,
        },
    },
}


# Workbench tunables, see workbench/conf.py for the defaults.

BISPECTRAL_WORKBENCH = {
    "NILPOTENCY_BOUND": 64,
    "DEFAULT_WAVE_ORDER": 20,
    "ASSET_DIR": BASE_DIR / "workbench" / "assets",
    "TRIPLE_DIRS": [],
}
