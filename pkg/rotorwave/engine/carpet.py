"""rotorwave.engine.carpet
==========================
Quantum carpets: the θ-marginal density

    ρ(θ, t) = sin θ ∫₀^{2π} |Ψ(θ, φ, t)|² dφ

sampled on Gauss–Legendre nodes in θ ∈ [0, π] over a window of times. For a
packet quantized along z the φ integral is done analytically,

    ρ(θ, t) = sin θ · Σ_M |Σ_I b_IM(t) P̄_{I|M|}(cos θ)|²,

which for M = 0 only packets is 2π sin θ |Ψ(θ, 0, t)|². Packets quantized
along x are synthesized on a uniform azimuth grid in laboratory angles.
"""

from __future__ import annotations

import csv
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.signal import find_peaks

from rotorwave.core.errors import (
    ArtifactIOError,
    ConfigurationError,
    DataFileError,
    DomainError,
    ValidationError,
)
from rotorwave.core.report import write_report_obj
from rotorwave.engine.evolution import autocorrelation_series, level_energies
from rotorwave.engine.sphere_basis import gauss_legendre, iter_legendre_columns
from rotorwave.engine.wavepacket import WavePacket, lab_to_x_frame
from rotorwave.models.documents import CarpetMetadata
from rotorwave.settings import settings
from rotorwave.spectra import SpectrumModel

logger = logging.getLogger(__name__)

_NORM_TOL = 1e-6
_NODE_TOL = 1e-7


@dataclass(frozen=True, eq=False)
class CarpetGrid:
    theta_nodes: np.ndarray
    time_nodes: np.ndarray
    density: np.ndarray  # [theta, time]
    theta_weights: np.ndarray
    autocorrelation: Optional[np.ndarray] = None

    @property
    def shape(self) -> Tuple[int, int]:
        return self.density.shape

    @property
    def normalization(self) -> np.ndarray:
        """∫ρ dθ per time column."""
        return self.theta_weights @ self.density

    def column(self, j: int) -> np.ndarray:
        return self.density[:, j]


def theta_rule(theta_count: int) -> Tuple[np.ndarray, np.ndarray]:
    """Gauss–Legendre nodes and weights on [0, π], nodes ascending."""
    x, w = gauss_legendre(theta_count)
    half_pi = 0.5 * math.pi
    return half_pi * (x + 1.0), half_pi * w


def _trapezoid_weights(theta: np.ndarray) -> np.ndarray:
    gaps = np.diff(theta)
    w = np.zeros_like(theta)
    w[:-1] += 0.5 * gaps
    w[1:] += 0.5 * gaps
    return w


# --------------------------------------------------------------------------- #
# column kernels                                                              #
# --------------------------------------------------------------------------- #
class _AxialKernel:
    """z-quantized packets: Legendre columns at the θ nodes, reused for every t."""

    def __init__(self, wp0: WavePacket, energies: np.ndarray, theta: np.ndarray):
        self.coeffs = wp0.coeffs
        self.energies = energies
        self.sin_theta = np.sin(theta)
        l_max = wp0.l_max
        active = {abs(M) for _, M, _ in wp0.items()}
        self.columns = {
            m: col for m, col in iter_legendre_columns(l_max, np.cos(theta)) if m in active
        }
        self.signed = sorted({M for _, M, _ in wp0.items()})
        self.l_max = l_max
        logger.debug("carpet: %d azimuthal orders, %d theta nodes", len(self.signed), theta.size)

    def __call__(self, times: np.ndarray) -> np.ndarray:
        phases = np.exp(-1j * np.outer(self.energies, times))  # [I, t]
        block = np.zeros((self.sin_theta.size, times.size))
        for M in self.signed:
            evolved = self.coeffs[:, self.l_max + M][:, None] * phases
            radial = self.columns[abs(M)].T @ evolved  # [theta, t]
            block += np.abs(radial) ** 2
        return self.sin_theta[:, None] * block


class _SynthesisKernel:
    """
    x-quantized packets: the body-frame basis is tabulated once at the lab
    (θ, φ) mesh, so each time column is a phase update and a contraction.
    The azimuth rule is uniform and exact for |Ψ|².
    """

    def __init__(self, wp0: WavePacket, energies: np.ndarray, theta: np.ndarray):
        self.coeffs = wp0.coeffs
        self.energies = energies
        self.l_max = wp0.l_max
        # |Ψ|² has azimuthal bandwidth 2·l_max
        self.n_phi = 4 * wp0.l_max + 2
        phi = 2.0 * math.pi * np.arange(self.n_phi) / self.n_phi
        theta_mesh, phi_mesh = np.meshgrid(theta, phi, indexing="ij")
        self.mesh_shape = theta_mesh.shape
        body_theta, body_phi = lab_to_x_frame(theta_mesh.ravel(), phi_mesh.ravel())
        self.signed = sorted({M for _, M, _ in wp0.items()})
        active = {abs(M) for M in self.signed}
        self.columns = {
            m: col
            for m, col in iter_legendre_columns(self.l_max, np.cos(body_theta))
            if m in active
        }
        # Y^I_{-m} = (-1)^m P̄_Im e^{-imφ} / √(2π)
        self.azimuthal = {
            M: (-1.0) ** (M < 0 and M % 2) * np.exp(1j * M * body_phi) for M in self.signed
        }
        self.sin_theta = np.sin(theta)
        logger.debug(
            "carpet: x-frame basis for %d azimuthal orders on %dx%d mesh",
            len(self.signed),
            *self.mesh_shape,
        )

    def __call__(self, times: np.ndarray) -> np.ndarray:
        phases = np.exp(-1j * np.outer(self.energies, times))  # [I, t]
        block = np.zeros((self.sin_theta.size, times.size))
        for j in range(times.size):
            values = np.zeros(self.mesh_shape[0] * self.mesh_shape[1], dtype=complex)
            for M in self.signed:
                evolved = self.coeffs[:, self.l_max + M] * phases[:, j]
                values += (evolved @ self.columns[abs(M)]) * self.azimuthal[M]
            density = np.abs(values.reshape(self.mesh_shape)) ** 2 / (2.0 * math.pi)
            block[:, j] = np.sum(density, axis=1) * (2.0 * math.pi / self.n_phi)
        return self.sin_theta[:, None] * block


def carpet(
    wp0: WavePacket,
    spectrum: SpectrumModel,
    theta_count: int,
    t_start: float,
    t_end: float,
    t_count: int,
    *,
    threads: Optional[int] = None,
) -> CarpetGrid:
    if theta_count < 2 or t_count < 2:
        raise DomainError(f"carpet needs at least 2 nodes per axis, got {theta_count}x{t_count}")
    if not t_end > t_start:
        raise DomainError(f"empty time window [{t_start}, {t_end}]")
    cells = theta_count * t_count
    if cells > settings.carpet_max_cells:
        raise ConfigurationError(
            f"carpet of {theta_count}x{t_count} = {cells} cells exceeds the cap "
            f"of {settings.carpet_max_cells}"
        )
    defect = abs(wp0.norm_squared() - 1.0)
    if defect > _NORM_TOL:
        raise ValidationError(f"initial packet is not normalized (|norm^2 - 1| = {defect:.3e})")

    theta, weights = theta_rule(theta_count)
    times = np.linspace(t_start, t_end, t_count)
    energies = level_energies(wp0, spectrum)
    kernel_cls = _SynthesisKernel if wp0.axis == "x" else _AxialKernel
    kernel = kernel_cls(wp0, energies, theta)

    workers = max(1, threads or 1)
    chunks = np.array_split(np.arange(t_count), min(workers, t_count))
    density = np.zeros((theta_count, t_count))

    def fill(index: np.ndarray) -> None:
        # each chunk owns its columns
        density[:, index] = kernel(times[index])

    if workers == 1:
        for index in chunks:
            fill(index)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(fill, chunks))

    np.clip(density, 0.0, None, out=density)
    moduli = np.abs(autocorrelation_series(wp0, spectrum, times))
    logger.info("carpet %dx%d computed with %d worker(s)", theta_count, t_count, workers)
    return CarpetGrid(theta, times, density, weights, moduli)


# --------------------------------------------------------------------------- #
# recurrences                                                                 #
# --------------------------------------------------------------------------- #
def recurrence_peaks(
    times: Sequence[float], moduli: Sequence[float], min_height: float = 0.0
) -> List[int]:
    """Indices of interior local maxima of an autocorrelation series."""
    times = np.asarray(times, dtype=float)
    moduli = np.asarray(moduli, dtype=float)
    if times.shape != moduli.shape:
        raise ValidationError(f"{times.size} times but {moduli.size} moduli")
    peaks, _ = find_peaks(moduli, height=min_height)
    return [int(i) for i in peaks]


# --------------------------------------------------------------------------- #
# I/O                                                                         #
# --------------------------------------------------------------------------- #
def _fmt(value: float) -> str:
    return format(float(value), ".9g")


def carpet_export(grid: CarpetGrid, path: Path | str) -> Path:
    """CSV: header `theta,t_0,…`, then one row per θ node."""
    if grid.density.size == 0:
        raise ValidationError("refusing to export an empty carpet")
    path = Path(path)
    try:
        with path.open("w", newline="", encoding="utf-8") as f:
            w = csv.writer(f, lineterminator="\n")
            w.writerow(["theta"] + [_fmt(t) for t in grid.time_nodes])
            for theta, row in zip(grid.theta_nodes, grid.density):
                w.writerow([_fmt(theta)] + [_fmt(v) for v in row])
    except OSError as exc:
        raise ArtifactIOError(path, str(exc)) from exc
    logger.debug("carpet written to %s", path)
    return path


def read_carpet_csv(path: Path | str) -> CarpetGrid:
    """
    Read a grid written by `carpet_export`. θ weights are rebuilt from the
    Gauss–Legendre rule when the nodes match it, else from the trapezoid rule.
    """
    path = Path(path)
    try:
        with path.open(newline="", encoding="utf-8") as f:
            rows = list(csv.reader(f))
    except OSError as exc:
        raise ArtifactIOError(path, str(exc)) from exc
    if len(rows) < 2 or len(rows[0]) < 2:
        raise DataFileError(path, "carpet file has no data")
    width = len(rows[0])
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != width:
            raise DataFileError(path, f"expected {width} columns, got {len(row)}", lineno)
    try:
        times = np.array([float(v) for v in rows[0][1:]])
        body = np.array([[float(v) for v in row] for row in rows[1:]])
    except ValueError as exc:
        raise DataFileError(path, f"non-numeric entry: {exc}") from exc

    theta, density = body[:, 0], body[:, 1:]
    gl_theta, gl_weights = theta_rule(theta.size)
    if np.allclose(theta, gl_theta, rtol=0.0, atol=_NODE_TOL):
        weights = gl_weights
    else:
        logger.warning("%s: theta nodes are not Gauss-Legendre; using trapezoid weights", path)
        weights = _trapezoid_weights(theta)
    return CarpetGrid(theta, times, density, weights)


def write_carpet_metadata(
    grid: CarpetGrid,
    path: Path | str,
    *,
    spectrum: dict,
    wavepacket: dict,
    t_rev: Optional[float] = None,
    t_cl: Optional[float] = None,
) -> Path:
    """JSON sidecar describing how a carpet was produced."""
    doc = CarpetMetadata(
        spectrum=spectrum,
        wavepacket=wavepacket,
        t_rev=t_rev,
        t_cl=t_cl,
        theta_count=grid.shape[0],
        t_count=grid.shape[1],
        autocorrelation=[] if grid.autocorrelation is None else grid.autocorrelation.tolist(),
    )
    path = Path(path)
    write_report_obj(doc.model_dump(), path)
    return path
