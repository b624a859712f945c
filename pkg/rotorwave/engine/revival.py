"""rotorwave.engine.revival
===========================
Fractional revivals of a rotor packet.

At t = (m/n)·t_rev the quadratic phase exp(−2πi k² m/n) is periodic in k with
period l, so it is a finite Fourier sum Σ_s a_s exp(−2πi k s/l). For the ideal
rotor (k = I) this writes the evolved packet as Σ_s a_s Φ_s with

    Φ_s = exp(−iβ_s Î) ψ0,   β_s = 2π(s/l + m/n).

Features are read off the evolved packet itself: the local maxima of
|⟨R_z(α)ψ0|ψ_t⟩| over α locate them, and the part of ψ_t in each feature's
azimuthal sector is compared with the rotated ψ0. A feature is a clone when
that fidelity reaches the clone threshold, a mutant otherwise. The Gauss sum
only serves as a cross-check (the reported residual).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.signal import find_peaks

from rotorwave.core.errors import DomainError, ValidationError
from rotorwave.core.feature import DetectedFeature
from rotorwave.engine.sphere_basis import QuadratureGrid, synthesize
from rotorwave.engine.wavepacket import WavePacket
from rotorwave.models.documents import FeatureRecord, RevivalReportDocument
from rotorwave.settings import settings

logger = logging.getLogger(__name__)

_WEIGHT_FLOOR = 1e-12
_NOISE_FLOOR = 1e-6
_PEAK_PROMINENCE = 1e-3  # relative to the largest overlap
_NORM_TOL = 1e-6
_RESIDUAL_TOL = 1e-6
_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True, slots=True)
class FractionalTime:
    m: int
    n: int

    def __post_init__(self) -> None:
        if self.m < 1 or self.n < 1:
            raise DomainError(f"m and n must be positive integers, got m={self.m}, n={self.n}")
        if math.gcd(self.m, self.n) != 1:
            raise DomainError(f"m={self.m} and n={self.n} are not mutually prime")
        if self.m > self.n:
            raise DomainError(f"m/n = {self.m}/{self.n} lies outside (0, 1]")

    @property
    def fraction(self) -> float:
        return self.m / self.n

    def time(self, t_rev: float) -> float:
        return self.fraction * t_rev

    @classmethod
    def parse(cls, text: str) -> "FractionalTime":
        """'m/n' → FractionalTime."""
        try:
            m, n = (int(part) for part in text.split("/"))
        except ValueError as exc:
            raise DomainError(f"expected a fraction m/n, got {text!r}") from exc
        return cls(m, n)


def clone_count(n: int) -> int:
    if n < 1:
        raise DomainError(f"n must be positive, got {n}")
    return n // 2 if n % 2 == 0 else n


def _period(n: int) -> int:
    return n // 2 if n % 4 == 0 else n


@dataclass(frozen=True)
class RevivalDecomposition:
    ft: FractionalTime
    l: int
    a: np.ndarray
    predicted_clones: int

    def phase_sequence(self, k) -> np.ndarray:
        """Σ_s a_s exp(−2πi k s/l) at integer k."""
        k = np.atleast_1d(np.asarray(k))
        s = np.arange(self.l)
        return np.exp(-2j * math.pi * np.outer(k, s) / self.l) @ self.a

    def shifts(self) -> np.ndarray:
        """β_s = 2π(s/l + m/n) for every s."""
        return _TWO_PI * (np.arange(self.l) / self.l + self.ft.fraction)

    def active(self) -> List[int]:
        return [s for s in range(self.l) if abs(self.a[s]) ** 2 > _WEIGHT_FLOOR]


def gauss_coefficients(ft: FractionalTime) -> RevivalDecomposition:
    l = _period(ft.n)
    k = np.arange(l)
    quadratic = np.exp(-2j * math.pi * (k * k * ft.m % ft.n) / ft.n)
    a = np.fft.ifft(quadratic)
    a.setflags(write=False)
    return RevivalDecomposition(ft=ft, l=l, a=a, predicted_clones=clone_count(ft.n))


# --------------------------------------------------------------------------- #
# azimuthal overlap scan                                                      #
# --------------------------------------------------------------------------- #
def _check_normalized(wp: WavePacket, label: str) -> None:
    defect = abs(wp.norm_squared() - 1.0)
    if defect > _NORM_TOL:
        raise ValidationError(f"{label} is not normalized (|norm^2 - 1| = {defect:.3e})")


def _rotation_profile(components: np.ndarray, m_values: np.ndarray):
    """α ↦ |Σ_M c_M e^{iMα}|, the overlap of R_z(α)ψ0 with a target."""

    def profile(alpha):
        alpha = np.atleast_1d(np.asarray(alpha, dtype=float))
        return np.abs(np.exp(1j * np.outer(alpha, m_values)) @ components)

    return profile


def _scan_maxima(values: np.ndarray) -> List[int]:
    """Local maxima of a periodic scan; a flat scan yields its first point."""
    n = values.size
    tiled = np.concatenate([values, values, values])
    peaks, _ = find_peaks(tiled, prominence=_PEAK_PROMINENCE * float(np.max(values)))
    found = sorted({int(p) - n for p in peaks if n <= p < 2 * n})
    return found or [int(np.argmax(values))]


def _refine(profile, alpha: float, value: float, step: float) -> Tuple[float, float]:
    result = minimize_scalar(
        lambda a: -float(profile(a)[0]),
        bounds=(alpha - step, alpha + step),
        method="bounded",
        options={"xatol": 1e-10},
    )
    if result.success and -result.fun > value:
        alpha, value = float(result.x), float(-result.fun)
    return alpha % _TWO_PI, value


def _common_tables(wp_t: WavePacket, wp_0: WavePacket) -> Tuple[np.ndarray, np.ndarray]:
    if wp_t.axis != wp_0.axis:
        raise ValidationError(
            f"packets are quantized along different axes ({wp_t.axis} vs {wp_0.axis})"
        )
    l_max = max(wp_t.l_max, wp_0.l_max)
    return wp_t.padded(l_max), wp_0.padded(l_max)


def _check_scan(ft: FractionalTime, n_scan: int) -> None:
    if n_scan < 8 * ft.n:
        raise ValidationError(f"n_scan={n_scan} is below 8*n = {8 * ft.n}")


def _sector_owner(phi: np.ndarray, azimuths: List[float]) -> np.ndarray:
    """Index of the nearest feature azimuth for every φ node."""
    gaps = np.angle(np.exp(1j * (phi[None, :] - np.asarray(azimuths)[:, None])))
    return np.argmin(np.abs(gaps), axis=0)


def _sector_fidelities(
    table_t: np.ndarray, table_0: np.ndarray, azimuths: List[float]
) -> List[Tuple[float, float]]:
    """
    (fidelity, weight) of the part of wp_t inside each feature's azimuthal sector.

    The sphere is split at the midpoints between neighbouring azimuths. In
    sector S_j the fidelity is |⟨R_z(α_j)ψ0|1_S ψ_t⟩| / (‖ψ0‖·‖1_S ψ_t‖), which
    stays within [0, 1]; the weight is ‖1_S ψ_t‖².
    """
    l_max = table_0.shape[0] - 1
    grid = QuadratureGrid.for_lmax(l_max, 2)
    theta, phi = grid.mesh()
    weights = grid.weights
    psi_t = synthesize(table_t, theta, phi)
    norm_0 = math.sqrt(float(np.sum(weights * np.abs(synthesize(table_0, theta, phi)) ** 2)))
    owner = _sector_owner(grid.phi, azimuths)

    measured = []
    for j, alpha in enumerate(azimuths):
        mask = (owner == j)[None, :]
        rotated = synthesize(table_0, theta, phi - alpha)
        part = float(np.sum(weights * mask * np.abs(psi_t) ** 2))
        overlap = abs(complex(np.sum(weights * mask * np.conj(rotated) * psi_t)))
        fidelity = 0.0 if part <= 0.0 else min(1.0, overlap / (norm_0 * math.sqrt(part)))
        measured.append((fidelity, part))
    return measured


def _features(
    table_t: np.ndarray,
    table_0: np.ndarray,
    clone_threshold: float,
    n_scan: int,
) -> Tuple[List[DetectedFeature], float]:
    l_max = table_0.shape[0] - 1
    m_values = np.arange(-l_max, l_max + 1)
    profile = _rotation_profile(np.sum(np.conj(table_0) * table_t, axis=0), m_values)

    grid = _TWO_PI * np.arange(n_scan) / n_scan
    values = profile(grid)
    peak = float(np.max(values))
    if peak < _NOISE_FLOOR:
        return [], peak

    step = _TWO_PI / n_scan
    located = sorted(
        _refine(profile, float(grid[j]), float(values[j]), step) for j in _scan_maxima(values)
    )
    azimuths = [alpha for alpha, _ in located]
    features = []
    for (alpha, overlap), (fidelity, part) in zip(
        located, _sector_fidelities(table_t, table_0, azimuths)
    ):
        features.append(
            DetectedFeature(
                azimuth=alpha,
                fidelity=fidelity,
                kind="clone" if fidelity >= clone_threshold else "mutant",
                weight=part,
                overlap=overlap,
            )
        )
    return features, peak


def detect_features(
    wp_t: WavePacket,
    wp_0: WavePacket,
    ft: FractionalTime,
    clone_threshold: float | None = None,
    n_scan: int = 720,
) -> List[DetectedFeature]:
    """
    Locate and classify the revival components of `wp_t` relative to `wp_0`.

    Every local maximum of the rotated overlap becomes one feature, so the
    count reflects what `wp_t` contains rather than the ideal prediction.

    Returns an empty list (with a warning) when `wp_t` has no overlap above
    the noise floor with any azimuthal rotation of `wp_0`.
    """
    return analyze_revival(wp_t, wp_0, ft, clone_threshold, n_scan).features


@dataclass(frozen=True)
class RevivalReport:
    decomposition: RevivalDecomposition
    clone_threshold: float
    features: List[DetectedFeature] = field(default_factory=list)
    status: str = "ok"
    residual: float = 0.0

    @property
    def clones(self) -> List[DetectedFeature]:
        return [f for f in self.features if f.is_clone]

    @property
    def mutants(self) -> List[DetectedFeature]:
        return [f for f in self.features if not f.is_clone]

    def to_document(self) -> RevivalReportDocument:
        d = self.decomposition
        return RevivalReportDocument(
            m=d.ft.m,
            n=d.ft.n,
            l=d.l,
            q_predicted=d.predicted_clones,
            clone_threshold=self.clone_threshold,
            status=self.status,
            residual=self.residual,
            coefficients=[(float(c.real), float(c.imag)) for c in d.a],
            features=[FeatureRecord(**f.to_dict()) for f in self.features],
        )


def analyze_revival(
    wp_t: WavePacket,
    wp_0: WavePacket,
    ft: FractionalTime,
    clone_threshold: float | None = None,
    n_scan: int = 720,
) -> RevivalReport:
    threshold = settings.clone_threshold if clone_threshold is None else clone_threshold
    _check_scan(ft, n_scan)
    _check_normalized(wp_t, "evolved packet")
    _check_normalized(wp_0, "initial packet")
    table_t, table_0 = _common_tables(wp_t, wp_0)
    decomposition = gauss_coefficients(ft)

    spins = np.arange(table_0.shape[0])
    superposition = sum(
        decomposition.a[s] * np.exp(-1j * decomposition.shifts()[s] * spins)[:, None] * table_0
        for s in range(decomposition.l)
    )
    residual = float(np.linalg.norm(table_t - superposition))
    if residual > _RESIDUAL_TOL:
        logger.warning(
            "packet differs from the %d/%d Gauss-sum superposition by %.3e",
            ft.m,
            ft.n,
            residual,
        )

    features, peak = _features(table_t, table_0, threshold, n_scan)
    if not features:
        logger.warning(
            "degenerate scan: largest rotated overlap %.3e is below %.0e", peak, _NOISE_FLOOR
        )
        return RevivalReport(decomposition, threshold, [], "degenerate", residual)

    logger.debug(
        "revival %d/%d: %d features (%d clones), residual %.3e",
        ft.m,
        ft.n,
        len(features),
        sum(f.is_clone for f in features),
        residual,
    )
    return RevivalReport(decomposition, threshold, features, "ok", residual)
