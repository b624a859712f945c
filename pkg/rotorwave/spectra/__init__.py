"""
Spectrum registry.

Every energy law is a `SpectrumModel` subclass registered under a short
kind name with `@register("kind")`. `build_spectrum(descriptor)` turns a
descriptor dict ({"kind": ..., **fields}) back into a model; the CLI uses it
for the `spectrum` key of a run configuration, so the descriptor recorded in
a carpet sidecar or run manifest can be fed straight back into a new run.

External packages can add kinds by advertising a module under the
`rotorwave.spectra` entry-point group (see rotorwave.core.loader).
"""

from __future__ import annotations

import logging
from typing import Callable, Dict, Type

from rotorwave.core.errors import ConfigurationError
from rotorwave.spectra.base import SpectrumModel

logger = logging.getLogger(__name__)

_REGISTRY: Dict[str, Type[SpectrumModel]] = {}
_PLUGINS_LOADED = False  # guard so entry points are scanned once


def register(kind: str) -> Callable[[Type[SpectrumModel]], Type[SpectrumModel]]:
    def _decorator(cls: Type[SpectrumModel]) -> Type[SpectrumModel]:
        cls.kind = kind
        _REGISTRY[kind] = cls
        return cls

    return _decorator


def _discover_plugins() -> None:
    global _PLUGINS_LOADED
    if _PLUGINS_LOADED:
        return
    from rotorwave.core.loader import load_plugins

    load_plugins()
    _PLUGINS_LOADED = True


def registered_kinds() -> list[str]:
    _discover_plugins()
    return sorted(_REGISTRY)


def build_spectrum(descriptor: dict) -> SpectrumModel:
    _discover_plugins()
    data = dict(descriptor)
    kind = data.pop("kind", None)
    if kind not in _REGISTRY:
        raise ConfigurationError(
            f"unknown spectrum kind {kind!r}; known kinds: {registered_kinds()}"
        )
    logger.debug("building %s spectrum", kind)
    try:
        return _REGISTRY[kind].from_descriptor(data)
    except (KeyError, TypeError) as exc:
        raise ConfigurationError(f"malformed {kind} spectrum descriptor: {exc}") from exc


# built-in kinds register themselves on import
from rotorwave.spectra.models import IdealRotor, Tabulated  # noqa: E402

__all__ = ["SpectrumModel", "IdealRotor", "Tabulated", "register", "build_spectrum"]
