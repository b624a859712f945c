from rotorwave.ingest.amplitudes import (
    AmplitudeSet,
    load_amplitudes,
    save_amplitudes,
    surrogate_amplitudes,
)
from rotorwave.ingest.levels import LevelScheme, bundled_levels, load_levels, save_levels

__all__ = [
    "AmplitudeSet",
    "LevelScheme",
    "bundled_levels",
    "load_amplitudes",
    "load_levels",
    "save_amplitudes",
    "save_levels",
    "surrogate_amplitudes",
]
