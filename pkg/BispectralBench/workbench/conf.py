"""Workbench settings with defaults.

Values come from the ``BISPECTRAL_WORKBENCH`` dictionary in the Django
settings module.  Outside a configured project the defaults apply, so the
algebra modules stay usable as a plain library.
"""

from pathlib import Path

from django.conf import settings
from django.core.exceptions import ImproperlyConfigured

DEFAULTS = {
    "NILPOTENCY_BOUND": 64,
    "DEFAULT_WAVE_ORDER": 20,
    "ASSET_DIR": Path(__file__).resolve().parent / "assets",
    "TRIPLE_DIRS": [],
}


def get(name):
    if name not in DEFAULTS:
        raise KeyError(f"unknown workbench setting: {name}")
    try:
        overrides = getattr(settings, "BISPECTRAL_WORKBENCH", {})
    except ImproperlyConfigured:
        overrides = {}
    return overrides.get(name, DEFAULTS[name])


def asset_dir(kind):
    """Directory holding bundled ``triples`` or ``jobs``."""
    return Path(get("ASSET_DIR")) / kind
