"""
Plugin loader for rotorwave.

External packages can contribute spectrum kinds by declaring in their
pyproject.toml:

[project.entry-points."rotorwave.spectra"]
my_band = "my_pkg.my_spectra"

The advertised module is imported and its `@rotorwave.spectra.register(...)`
decorators run exactly like the built-ins.
"""

from importlib.metadata import entry_points
import logging

logger = logging.getLogger(__name__)

_EP_GROUP = "rotorwave.spectra"


def load_plugins(group: str = _EP_GROUP) -> list[str]:
    """Import every entry point in *group*; returns the names that loaded."""
    loaded = []
    for ep in entry_points(group=group):
        try:
            ep.load()  # import side-effect
            loaded.append(ep.name)
            logger.debug("spectrum plugin loaded: %s", ep.value)
        except Exception as exc:
            logger.error("failed to load spectrum plugin %s: %s", ep.name, exc)
    return loaded
