"""rotorwave.engine.evolution
=============================
Time evolution of a rotor wave packet and the two time scales that organize it.

Every stationary component picks up the phase exp(−iE_I t) (ħ = 1, energies
in whatever unit the spectrum uses, time in the reciprocal unit). Phases depend
on I only, so a packet quantized about any axis evolves the same way.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from rotorwave.core.errors import DomainError, ValidationError
from rotorwave.engine.wavepacket import WavePacket, autocorrelation
from rotorwave.spectra import IdealRotor, SpectrumModel

logger = logging.getLogger(__name__)

__all__ = [
    "TimeScales",
    "timescales",
    "propagate",
    "autocorrelation",
    "autocorrelation_series",
]


@dataclass(frozen=True, slots=True)
class TimeScales:
    t_cl: float
    t_rev: float
    i_bar: float
    # ideal rotor only: I(I+1) is even, so the motion already repeats at t_rev / 2
    fundamental_period: Optional[float] = None

    def to_dict(self) -> dict:
        return {
            "t_cl": self.t_cl,
            "t_rev": self.t_rev,
            "i_bar": self.i_bar,
            "fundamental_period": self.fundamental_period,
        }


def timescales(spectrum: SpectrumModel, i_bar: float) -> TimeScales:
    """
    Classical period 2π/|E′| and revival time 2π/|E″| at Ī.

    E″ is the coefficient of (I − Ī)² in the Taylor expansion of E_I, so the
    ideal rotor gives t_rev = 2π/B.
    """
    if not i_bar >= 1.0:
        raise DomainError(f"mean angular momentum must be at least 1, got {i_bar}")
    first, second = spectrum.derivatives(i_bar)
    if first == 0.0 or second == 0.0:
        raise ValidationError(
            f"spectrum has a vanishing derivative at I_bar={i_bar:g} (E'={first}, E''={second})"
        )
    t_cl = 2.0 * math.pi / abs(first)
    t_rev = 2.0 * math.pi / abs(second)
    fundamental = t_rev / 2.0 if isinstance(spectrum, IdealRotor) else None
    logger.debug("timescales at I_bar=%.4g: t_cl=%.6g t_rev=%.6g", i_bar, t_cl, t_rev)
    return TimeScales(t_cl=t_cl, t_rev=t_rev, i_bar=float(i_bar), fundamental_period=fundamental)


def level_energies(wp: WavePacket, spectrum: SpectrumModel) -> np.ndarray:
    """E_I for every row of the table; rows nobody occupies stay at zero."""
    energies = np.zeros(wp.l_max + 1)
    occupied = wp.occupied_i()
    if occupied.size:
        energies[occupied] = spectrum.energies(occupied)
    return energies


def propagate(wp: WavePacket, spectrum: SpectrumModel, t: float) -> WavePacket:
    """b_IM → b_IM·exp(−iE_I t)."""
    phases = np.exp(-1j * level_energies(wp, spectrum) * t)
    return wp.with_coeffs(wp.coeffs * phases[:, None])


def autocorrelation_series(
    wp0: WavePacket, spectrum: SpectrumModel, times
) -> np.ndarray:
    """⟨ψ(0)|ψ(t)⟩ = Σ_I w_I exp(−iE_I t) for every t, w_I the I-marginal weights."""
    times = np.atleast_1d(np.asarray(times, dtype=float))
    occupied = wp0.occupied_i()
    weights = wp0.i_weights()[occupied]
    energies = spectrum.energies(occupied)
    return np.exp(-1j * np.outer(times, energies)) @ weights
