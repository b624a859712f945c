"""rotorwave.engine.observables
===============================
Angular-momentum moments of a packet from exact ladder-operator matrix
elements on its (I, M) table, and the two estimators of the coherent-state
ellipticity:

    η = ⟨L_z⟩ / (2 ΔL_y²) = ±√(ΔL_x² / ΔL_y²).

Packets quantized along x are handled in their body frame (z′ = x, x′ = y,
y′ = z) and reported in the laboratory frame.
"""

from __future__ import annotations

import csv
import logging
import math
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Dict, List, Sequence, Tuple

import numpy as np

from rotorwave.core.errors import ArtifactIOError, UndefinedEstimatorError, ValidationError
from rotorwave.engine.evolution import autocorrelation_series, propagate
from rotorwave.engine.wavepacket import WavePacket
from rotorwave.spectra import SpectrumModel

logger = logging.getLogger(__name__)

_NORM_TOL = 1e-6
_VAR_FLOOR = 1e-12

OBSERVABLE_COLUMNS: Tuple[str, ...] = (
    "t",
    "mean_lz",
    "var_lx",
    "var_ly",
    "var_lz",
    "uncertainty_product",
    "min_uncertainty_rhs",
    "autocorrelation_modulus",
)


@dataclass(frozen=True, slots=True)
class AngularMomentumStats:
    mean_lz: float
    var_lx: float
    var_ly: float
    var_lz: float
    uncertainty_product: float
    min_uncertainty_rhs: float
    mean_lx: float = 0.0
    mean_ly: float = 0.0

    def to_dict(self) -> dict:
        return asdict(self)


def _ladder(coeffs: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """(L₊ψ, L₋ψ) as coefficient tables of the same shape."""
    l_max = coeffs.shape[0] - 1
    I = np.arange(l_max + 1)[:, None].astype(float)
    M = np.arange(-l_max, l_max + 1)[None, :].astype(float)
    casimir = I * (I + 1.0)
    up = np.sqrt(np.clip(casimir - M * (M + 1.0), 0.0, None))
    down = np.sqrt(np.clip(casimir - M * (M - 1.0), 0.0, None))

    raised = np.zeros_like(coeffs)
    lowered = np.zeros_like(coeffs)
    raised[:, 1:] = (up * coeffs)[:, :-1]
    lowered[:, :-1] = (down * coeffs)[:, 1:]
    return raised, lowered


def _moments(coeffs: np.ndarray, image: np.ndarray) -> Tuple[float, float]:
    """(⟨A⟩, Var A) for a Hermitian A given ψ and Aψ."""
    mean = float(np.vdot(coeffs, image).real)
    second = float(np.vdot(image, image).real)
    return mean, second - mean * mean


def angular_stats(wp: WavePacket) -> AngularMomentumStats:
    defect = abs(wp.norm_squared() - 1.0)
    if defect > _NORM_TOL:
        raise ValidationError(f"packet is not normalized (|norm^2 - 1| = {defect:.3e})")

    b = wp.coeffs
    raised, lowered = _ladder(b)
    frame: Dict[str, Tuple[float, float]] = {
        "x": _moments(b, (raised + lowered) / 2.0),
        "y": _moments(b, (raised - lowered) / 2j),
        "z": _moments(b, b * wp.m_values[None, :]),
    }
    if wp.axis == "x":
        # lab x = z', lab y = x', lab z = y'
        frame = {"x": frame["z"], "y": frame["x"], "z": frame["y"]}

    (mean_lx, var_lx), (mean_ly, var_ly), (mean_lz, var_lz) = frame["x"], frame["y"], frame["z"]
    return AngularMomentumStats(
        mean_lz=mean_lz,
        var_lx=var_lx,
        var_ly=var_ly,
        var_lz=var_lz,
        uncertainty_product=var_lx * var_ly,
        min_uncertainty_rhs=0.25 * mean_lz * mean_lz,
        mean_lx=mean_lx,
        mean_ly=mean_ly,
    )


def eta_relations(wp: WavePacket) -> Tuple[float, float]:
    """(⟨L_z⟩/(2ΔL_y²), sign(⟨L_z⟩)·√(ΔL_x²/ΔL_y²))"""
    stats = angular_stats(wp)
    if stats.var_ly < _VAR_FLOOR:
        raise UndefinedEstimatorError(
            f"var(L_y) = {stats.var_ly:.3e} is too small for the eta estimators"
        )
    from_lz = stats.mean_lz / (2.0 * stats.var_ly)
    from_ratio = math.copysign(math.sqrt(max(stats.var_lx, 0.0) / stats.var_ly), stats.mean_lz)
    return from_lz, from_ratio


def circular_lz_error(N: float) -> float:
    """⟨L_z⟩ − (N − ½) = 2N/(e^{4N} − 1) for the circular state."""
    return 2.0 * N / math.expm1(4.0 * N)


def circular_mean_lz(N: float) -> float:
    """Closed form N·coth(2N) − ½ of ⟨L_z⟩ for the circular state."""
    return (N - 0.5) + circular_lz_error(N)


def observables_series(
    wp0: WavePacket, spectrum: SpectrumModel, times: Sequence[float]
) -> List[dict]:
    """One row per time, keyed by OBSERVABLE_COLUMNS."""
    times = np.atleast_1d(np.asarray(times, dtype=float))
    moduli = np.abs(autocorrelation_series(wp0, spectrum, times))
    rows = []
    for t, modulus in zip(times, moduli):
        stats = angular_stats(propagate(wp0, spectrum, float(t)))
        rows.append(
            {
                "t": float(t),
                "mean_lz": stats.mean_lz,
                "var_lx": stats.var_lx,
                "var_ly": stats.var_ly,
                "var_lz": stats.var_lz,
                "uncertainty_product": stats.uncertainty_product,
                "min_uncertainty_rhs": stats.min_uncertainty_rhs,
                "autocorrelation_modulus": float(modulus),
            }
        )
    logger.debug("observables series: %d samples", len(rows))
    return rows


def write_observables_csv(rows: Sequence[dict], path: Path | str) -> Path:
    path = Path(path)
    try:
        with path.open("w", newline="", encoding="utf-8") as f:
            w = csv.writer(f, lineterminator="\n")
            w.writerow(OBSERVABLE_COLUMNS)
            for row in rows:
                w.writerow([format(row[col], ".9g") for col in OBSERVABLE_COLUMNS])
    except OSError as exc:
        raise ArtifactIOError(path, str(exc)) from exc
    return path
