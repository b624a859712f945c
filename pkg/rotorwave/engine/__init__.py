"""
Numerical kernels: spherical-harmonic basis, coherent states, propagation,
revival analysis, observables and carpets. Everything here works in natural
units (ħ = 1); physical units enter only through rotorwave.ingest and the CLI.
"""

from rotorwave.engine.coherent_state import CoherentStateParams, expand_cs, suggest_lmax
from rotorwave.engine.evolution import (
    TimeScales,
    autocorrelation,
    autocorrelation_series,
    propagate,
    timescales,
)
from rotorwave.engine.wavepacket import WavePacket

__all__ = [
    "CoherentStateParams",
    "TimeScales",
    "WavePacket",
    "autocorrelation",
    "autocorrelation_series",
    "expand_cs",
    "propagate",
    "suggest_lmax",
    "timescales",
]
