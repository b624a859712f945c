"""rotorwave.engine.sphere_basis
================================
Fully normalized associated Legendre functions, complex spherical harmonics
(Condon–Shortley phase, e^{iMφ} azimuth) and a Gauss–Legendre × uniform
azimuth quadrature used to project functions on the sphere onto Y^I_M.

Normalization: Y^I_M(θ, φ) = P̄_IM(cos θ) e^{iMφ} / √(2π) with
∫_{-1}^{1} P̄_IM(x)² dx = 1.

Coefficient tables are complex arrays of shape (l_max + 1, 2·l_max + 1);
entry [I, M + l_max] holds b_IM and entries with |M| > I are zero.
"""

from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterator, List, Tuple

import numpy as np
from scipy.special import roots_legendre

from rotorwave.core.errors import ConfigurationError, DomainError

logger = logging.getLogger(__name__)

_LOG_P00 = -0.5 * math.log(2.0)
_SQRT_2PI = math.sqrt(2.0 * math.pi)
# mantissas are pulled back by this factor whenever they grow past it
_RESCALE = 1e150
_LOG_RESCALE = math.log(_RESCALE)


###############################################################################
# 0.  Index type ##############################################################
###############################################################################
@dataclass(frozen=True, slots=True)
class HarmonicIndex:
    I: int
    M: int

    def __post_init__(self) -> None:
        _check_index(self.I, self.M, allow_negative_m=True)


def _check_index(I: int, M: int, *, allow_negative_m: bool) -> None:
    if I < 0:
        raise DomainError(f"angular momentum I must be non-negative, got {I}")
    low = -I if allow_negative_m else 0
    if not low <= M <= I:
        raise DomainError(f"invalid harmonic index (I={I}, M={M})")


def table_shape(l_max: int) -> Tuple[int, int]:
    return l_max + 1, 2 * l_max + 1


def valid_mask(l_max: int) -> np.ndarray:
    """Boolean mask of the (I, M) slots with |M| ≤ I."""
    I = np.arange(l_max + 1)[:, None]
    M = np.arange(-l_max, l_max + 1)[None, :]
    return np.abs(M) <= I


###############################################################################
# 1.  Legendre recurrences ####################################################
###############################################################################
def _recurrence_coeffs(l: int, m: int) -> Tuple[float, float]:
    denom = l * l - m * m
    a = math.sqrt((4.0 * l * l - 1.0) / denom)
    if l == m + 1:
        return a, 0.0
    b = math.sqrt(((l - 1) ** 2 - m * m) * (2.0 * l + 1.0) / ((2.0 * l - 3.0) * denom))
    return a, b


def _log_sectoral_constant(m: int) -> float:
    """log of |P̄_mm| / sin^m θ."""
    acc = _LOG_P00
    for k in range(1, m + 1):
        acc += 0.5 * math.log((2.0 * k + 1.0) / (2.0 * k))
    return acc


def normalized_legendre(I: int, M: int, x: float) -> float:
    """
    P̄_IM(x) for 0 ≤ M ≤ I.

    The sectoral seed P̄_MM is carried as (sign, log-magnitude) and the upward
    recurrence in I runs on a rescaled mantissa, so neither the seed nor the
    recurrence overflows or underflows for I ≤ 200 away from the poles.
    """
    _check_index(I, M, allow_negative_m=False)
    if abs(x) > 1.0:
        raise DomainError(f"argument must lie in [-1, 1], got {x}")

    sin_theta = math.sqrt((1.0 - x) * (1.0 + x))
    if M > 0 and sin_theta == 0.0:
        return 0.0

    log_scale = _log_sectoral_constant(M) + (M * math.log(sin_theta) if M else 0.0)
    p_prev, p = 0.0, (-1.0) ** M
    for l in range(M + 1, I + 1):
        a, b = _recurrence_coeffs(l, M)
        p_prev, p = p, a * x * p - b * p_prev
        if abs(p) > _RESCALE:
            p /= _RESCALE
            p_prev /= _RESCALE
            log_scale += _LOG_RESCALE
    if p == 0.0:
        return 0.0
    return math.copysign(math.exp(math.log(abs(p)) + log_scale), p)


def _check_arguments(l_max: int, x) -> np.ndarray:
    if l_max < 0:
        raise DomainError(f"l_max must be non-negative, got {l_max}")
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(np.abs(x) > 1.0):
        raise DomainError("Legendre arguments must lie in [-1, 1]")
    return x


def iter_legendre_columns(l_max: int, x) -> Iterator[Tuple[int, np.ndarray]]:
    """
    Yield (m, column) for m = 0 … l_max where column[I, k] = P̄_Im(x_k)
    (rows I < m are zero). One column is alive at a time, so memory stays
    O(l_max · len(x)) even at l_max = 400.
    """
    x = _check_arguments(l_max, x)
    sin_theta = np.sqrt((1.0 - x) * (1.0 + x))
    with np.errstate(divide="ignore"):
        log_sin = np.log(sin_theta)

    log_const = _LOG_P00
    for m in range(l_max + 1):
        if m:
            log_const += 0.5 * math.log((2.0 * m + 1.0) / (2.0 * m))
            log_scale = log_const + m * log_sin
        else:
            log_scale = np.full(x.size, log_const)
        column = np.zeros((l_max + 1, x.size))
        p_prev = np.zeros(x.size)
        p = np.full(x.size, (-1.0) ** m)
        column[m] = p * np.exp(log_scale)
        for l in range(m + 1, l_max + 1):
            a, b = _recurrence_coeffs(l, m)
            p_prev, p = p, a * x * p - b * p_prev
            big = np.abs(p) > _RESCALE
            if big.any():
                p[big] /= _RESCALE
                p_prev[big] /= _RESCALE
                log_scale = np.where(big, log_scale + _LOG_RESCALE, log_scale)
            column[l] = p * np.exp(log_scale)
        yield m, column


def legendre_table(l_max: int, x) -> np.ndarray:
    """
    Vectorized P̄_IM for all 0 ≤ M ≤ I ≤ l_max.

    Returns an array of shape (l_max + 1, l_max + 1, len(x)) indexed
    [I, M, node]; slots with M > I are zero.
    """
    x = _check_arguments(l_max, x)
    out = np.zeros((l_max + 1, l_max + 1, x.size))
    for m, column in iter_legendre_columns(l_max, x):
        out[:, m, :] = column
    return out


###############################################################################
# 2.  Spherical harmonics #####################################################
###############################################################################
def ylm(idx: HarmonicIndex, theta: float, phi: float) -> complex:
    m = abs(idx.M)
    value = normalized_legendre(idx.I, m, math.cos(theta)) * cmath.exp(1j * m * phi) / _SQRT_2PI
    if idx.M < 0:
        return (-1) ** m * value.conjugate()
    return value


def synthesize(coeffs: np.ndarray, theta, phi) -> np.ndarray:
    """Σ_IM b_IM Y^I_M(θ, φ) on broadcast angle arrays."""
    coeffs = np.asarray(coeffs, dtype=complex)
    l_max = coeffs.shape[0] - 1
    theta, phi = np.broadcast_arrays(np.asarray(theta, float), np.asarray(phi, float))
    shape = theta.shape
    theta, phi = theta.ravel(), phi.ravel()
    total = np.zeros(theta.size, dtype=complex)
    for m, column in iter_legendre_columns(l_max, np.cos(theta)):
        f_plus = coeffs[:, l_max + m] @ column
        total += f_plus * np.exp(1j * m * phi)
        if m:
            f_minus = (-1.0) ** m * (coeffs[:, l_max - m] @ column)
            total += f_minus * np.exp(-1j * m * phi)
    return (total / _SQRT_2PI).reshape(shape)


###############################################################################
# 3.  Quadrature ##############################################################
###############################################################################
@lru_cache(maxsize=32)
def gauss_legendre(n: int) -> Tuple[np.ndarray, np.ndarray]:
    x, w = roots_legendre(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


@dataclass(frozen=True)
class QuadratureGrid:
    """
    Gauss–Legendre in cos θ times uniform azimuth. Integrates
    x^k e^{iMφ} exactly for k ≤ 2·n_theta − 1 and |M| < n_phi.
    """

    n_theta: int
    n_phi: int

    def __post_init__(self) -> None:
        if self.n_theta < 1 or self.n_phi < 1:
            raise ConfigurationError(
                f"quadrature needs positive node counts, got ({self.n_theta}, {self.n_phi})"
            )

    @classmethod
    def for_lmax(cls, l_max: int, oversample: int = 1) -> "QuadratureGrid":
        oversample = max(int(oversample), 1)
        return cls(n_theta=oversample * (l_max + 1), n_phi=oversample * (2 * l_max + 1))

    @property
    def x(self) -> np.ndarray:
        return gauss_legendre(self.n_theta)[0]

    @property
    def theta(self) -> np.ndarray:
        return np.arccos(self.x)

    @property
    def phi(self) -> np.ndarray:
        return 2.0 * np.pi * np.arange(self.n_phi) / self.n_phi

    @property
    def weights(self) -> np.ndarray:
        """Solid-angle weights, shape (n_theta, n_phi); they sum to 4π."""
        w_x = gauss_legendre(self.n_theta)[1]
        return np.outer(w_x, np.full(self.n_phi, 2.0 * np.pi / self.n_phi))

    @property
    def nodes(self) -> List[Tuple[float, float, float]]:
        th, ph = np.meshgrid(self.theta, self.phi, indexing="ij")
        return list(zip(th.ravel().tolist(), ph.ravel().tolist(), self.weights.ravel().tolist()))

    def mesh(self) -> Tuple[np.ndarray, np.ndarray]:
        return np.meshgrid(self.theta, self.phi, indexing="ij")

    def integrate(self, values: np.ndarray):
        return np.sum(self.weights * values)

    def resolves(self, l_max: int) -> bool:
        return self.n_theta >= l_max + 1 and self.n_phi >= 2 * l_max + 1


def project(
    f: Callable[[np.ndarray, np.ndarray], np.ndarray],
    l_max: int,
    grid: QuadratureGrid,
) -> np.ndarray:
    """
    b_IM = ∫ conj(Y^I_M) f dΩ for I ≤ l_max.

    `f` is called once with the (n_theta, n_phi) meshes of θ and φ. The
    azimuthal integral is an FFT over the uniform φ nodes, the polar one a
    Gauss–Legendre sum against the P̄ table.
    """
    if l_max < 0:
        raise DomainError(f"l_max must be non-negative, got {l_max}")
    if not grid.resolves(l_max):
        raise ConfigurationError(
            f"grid ({grid.n_theta}×{grid.n_phi}) under-resolves l_max={l_max}; "
            f"need n_theta ≥ {l_max + 1} and n_phi ≥ {2 * l_max + 1}"
        )
    logger.debug("projecting onto l_max=%d with %d×%d nodes", l_max, grid.n_theta, grid.n_phi)

    theta, phi = grid.mesh()
    values = np.asarray(f(theta, phi), dtype=complex)
    # F_M(θ_i) = ∫ f e^{-iMφ} dφ
    spectrum = np.fft.fft(values, axis=1) * (2.0 * np.pi / grid.n_phi)
    w_x = gauss_legendre(grid.n_theta)[1]
    coeffs = np.zeros(table_shape(l_max), dtype=complex)
    for m, column in iter_legendre_columns(l_max, grid.x):
        weighted = column * w_x[None, :]
        coeffs[:, l_max + m] = weighted @ spectrum[:, m]
        if m:
            coeffs[:, l_max - m] = (-1.0) ** m * (weighted @ spectrum[:, -m % grid.n_phi])
    coeffs /= _SQRT_2PI
    coeffs[~valid_mask(l_max)] = 0.0
    return coeffs
