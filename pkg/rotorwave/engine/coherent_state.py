"""rotorwave.engine.coherent_state
===================================
The two-parameter angular-momentum coherent state

    Ψ_{N,η}(θ, φ) = √(N / (2π sinh 2N)) · exp[N sinθ (cos φ + iη sin φ)]

and its expansion over Y^I_M by quadrature projection.

Writing x = sinθ cosφ and y = sinθ sinφ, Ψ = C·exp[N(x + iηy)], which is
annihilated by L_x + iη L_y. The circular state (η = 1) contains only M = I
components about z; the linear state (η = 0) is symmetric about the x axis
and is expanded in the x-quantized body frame, where only M = 0 survives.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from rotorwave.core.errors import DomainError, ResourceError, TruncationError, ValidationError
from rotorwave.engine.sphere_basis import QuadratureGrid, project
from rotorwave.engine.wavepacket import WavePacket
from rotorwave.settings import settings

logger = logging.getLogger(__name__)

_START_LMAX = 8
_TAIL_LOG_WEIGHT = 2.0 * math.log(1e-16)
_DEFECT_FLOOR = -1e-12


@dataclass(frozen=True, slots=True)
class CoherentStateParams:
    N: float
    eta: float

    def __post_init__(self) -> None:
        if not (self.N > 0.0 and math.isfinite(self.N)):
            raise DomainError(f"N must be a positive finite number, got {self.N}")
        if not -1.0 <= self.eta <= 1.0:
            raise DomainError(f"eta must lie in [-1, 1], got {self.eta}")

    @property
    def axis(self) -> str:
        return "x" if self.eta == 0.0 else "z"

    def log_prefactor(self) -> float:
        # log sinh(2N) without overflow
        two_n = 2.0 * self.N
        log_sinh = two_n + math.log1p(-math.exp(-2.0 * two_n)) - math.log(2.0)
        return 0.5 * (math.log(self.N) - math.log(2.0 * math.pi) - log_sinh)


def _amplitude(params: CoherentStateParams, x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return np.exp(params.log_prefactor() + params.N * x) * np.exp(1j * params.N * params.eta * y)


def evaluate_cs(params: CoherentStateParams, theta, phi):
    """Closed-form amplitude at laboratory angles; scalars or arrays."""
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    sin_theta = np.sin(theta)
    value = _amplitude(params, sin_theta * np.cos(phi), sin_theta * np.sin(phi))
    return complex(value) if value.ndim == 0 else value


def _frame_amplitude(params: CoherentStateParams):
    """Ψ as a function of the angles of the frame the expansion uses."""
    if params.axis == "z":
        return lambda theta, phi: evaluate_cs(params, theta, phi)

    def body(theta, phi):
        # body z' = lab x, x' = lab y
        return _amplitude(params, np.cos(theta), np.sin(theta) * np.cos(phi))

    return body


def bandwidth(params: CoherentStateParams) -> int:
    """
    Order beyond which the I-weights of Ψ_{N,η} drop below 1e-32.

    Uses the circular-state weights (2N)^{2I+1} / ((2I+1)! sinh 2N), whose
    tail bounds that of every η.
    """
    two_n = 2.0 * params.N
    log_sinh = two_n + math.log1p(-math.exp(-2.0 * two_n)) - math.log(2.0)
    I = int(params.N)
    while True:
        j = 2 * I + 1
        log_weight = j * math.log(two_n) - math.lgamma(j + 1) - log_sinh
        if j > two_n and log_weight < _TAIL_LOG_WEIGHT:
            return I
        I += 1


def _projection_grid(params: CoherentStateParams, l_max: int, oversample: int) -> QuadratureGrid:
    # content up to `bandwidth` must not alias into orders ≤ l_max
    band = bandwidth(params)
    base = QuadratureGrid.for_lmax(l_max, oversample)
    return QuadratureGrid(
        n_theta=max(base.n_theta, (band + l_max) // 2 + 2),
        n_phi=max(base.n_phi, band + l_max + 1),
    )


def _project_cs(params: CoherentStateParams, l_max: int, oversample: Optional[int]) -> np.ndarray:
    grid = _projection_grid(params, l_max, oversample or settings.quadrature_oversample)
    return project(_frame_amplitude(params), l_max, grid)


def expand_cs(
    params: CoherentStateParams,
    l_max: int,
    tol: float,
    *,
    renormalize: bool = False,
    oversample: Optional[int] = None,
) -> WavePacket:
    """
    Project Ψ_{N,η} onto Y^I_M for I ≤ l_max.

    The quadrature resolves the packet's full bandwidth, so the achieved norm
    defect 1 − Σ|b_IM|² recorded on the packet is the true truncation loss; if
    it does not meet `tol` a TruncationError reports it. `renormalize` rescales
    the table to unit norm afterwards (the recorded defect is kept).
    """
    if l_max < 0:
        raise DomainError(f"l_max must be non-negative, got {l_max}")
    coeffs = _project_cs(params, l_max, oversample)
    defect = 1.0 - float(np.sum(np.abs(coeffs) ** 2))
    logger.debug("expand_cs N=%s eta=%s l_max=%d defect=%.3e", params.N, params.eta, l_max, defect)
    if defect < _DEFECT_FLOOR:
        raise ValidationError(f"projection exceeds unit norm by {-defect:.3e} at l_max={l_max}")
    if defect >= tol:
        raise TruncationError(l_max, defect, tol)

    wp = WavePacket(coeffs, tol=tol, norm_defect=defect, axis=params.axis)
    if renormalize:
        wp = WavePacket(
            coeffs / math.sqrt(wp.norm_squared()), tol=tol, norm_defect=defect, axis=params.axis
        )
    return wp


def suggest_lmax(params: CoherentStateParams, tol: float) -> int:
    """
    Smallest truncation order whose norm defect is below `tol`.

    Doubles a trial order until its projection meets `tol`, then reads the
    smallest sufficient order off the cumulative I-weights of that table.
    """
    if not tol > 0.0:
        raise DomainError(f"tol must be positive, got {tol}")
    cap = settings.lmax_cap
    l_max = _START_LMAX
    while True:
        coeffs = _project_cs(params, l_max, None)
        cumulative = np.cumsum(np.sum(np.abs(coeffs) ** 2, axis=1))
        defects = 1.0 - cumulative
        hits = np.nonzero(defects < tol)[0]
        if hits.size:
            found = int(hits[0])
            logger.debug(
                "suggest_lmax N=%s eta=%s tol=%.1e -> %d", params.N, params.eta, tol, found
            )
            return found
        if l_max >= cap:
            raise ResourceError(
                f"norm defect {defects[-1]:.3e} still above tol={tol:.1e} at the l_max cap {cap}"
            )
        l_max = min(2 * l_max, cap)
