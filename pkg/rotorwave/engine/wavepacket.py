"""rotorwave.engine.wavepacket
==============================
`WavePacket` – an immutable truncated expansion Σ b_IM Y^I_M together with
the truncation bookkeeping (tolerance, achieved norm defect) and the axis
along which its table is quantized.

A table quantized along "x" lives in the body frame z′ = x, x′ = y, y′ = z
of the laboratory; `evaluate` maps laboratory angles into that frame.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Literal, Tuple

import numpy as np

from rotorwave.core.errors import ArtifactIOError, DomainError, ValidationError
from rotorwave.engine.sphere_basis import synthesize, table_shape, valid_mask
from rotorwave.models.documents import WavePacketDocument

logger = logging.getLogger(__name__)

Axis = Literal["z", "x"]


@dataclass(frozen=True, eq=False)
class WavePacket:
    coeffs: np.ndarray
    tol: float = 0.0
    norm_defect: float = field(default=float("nan"))
    axis: Axis = "z"

    def __post_init__(self) -> None:
        table = np.array(self.coeffs, dtype=complex)
        if table.ndim != 2 or table.shape != table_shape(table.shape[0] - 1):
            raise ValidationError(f"coefficient table has shape {table.shape}")
        if self.axis not in ("z", "x"):
            raise ValidationError(f"unknown quantization axis {self.axis!r}")
        l_max = table.shape[0] - 1
        if np.any(table[~valid_mask(l_max)] != 0):
            raise ValidationError("coefficients present at |M| > I")
        table.setflags(write=False)
        object.__setattr__(self, "coeffs", table)
        if np.isnan(self.norm_defect):
            object.__setattr__(self, "norm_defect", 1.0 - self.norm_squared())

    # ------------------------------------------------------------------ #
    # construction helpers                                               #
    # ------------------------------------------------------------------ #
    @classmethod
    def from_entries(
        cls, entries, *, tol: float = 0.0, axis: Axis = "z"
    ) -> "WavePacket":
        """Build from an iterable of (I, M, amplitude)."""
        entries = list(entries)
        if not entries:
            raise ValidationError("a wave packet needs at least one coefficient")
        l_max = max(int(I) for I, _, _ in entries)
        table = np.zeros(table_shape(l_max), dtype=complex)
        for I, M, amp in entries:
            if abs(M) > I or I < 0:
                raise DomainError(f"invalid harmonic index (I={I}, M={M})")
            table[I, M + l_max] += amp
        return cls(table, tol=tol, axis=axis)

    def with_coeffs(self, coeffs: np.ndarray) -> "WavePacket":
        """Same bookkeeping, new table (norm defect carried over)."""
        return WavePacket(coeffs, tol=self.tol, norm_defect=self.norm_defect, axis=self.axis)

    # ------------------------------------------------------------------ #
    # queries                                                            #
    # ------------------------------------------------------------------ #
    @property
    def l_max(self) -> int:
        return self.coeffs.shape[0] - 1

    @property
    def m_values(self) -> np.ndarray:
        return np.arange(-self.l_max, self.l_max + 1)

    def coefficient(self, I: int, M: int) -> complex:
        if I < 0 or abs(M) > I:
            raise DomainError(f"invalid harmonic index (I={I}, M={M})")
        if I > self.l_max:
            return 0j
        return complex(self.coeffs[I, M + self.l_max])

    def items(self) -> Iterator[Tuple[int, int, complex]]:
        """Non-zero (I, M, b_IM) in (I, M) order."""
        for I, col in zip(*np.nonzero(self.coeffs)):
            yield int(I), int(col) - self.l_max, complex(self.coeffs[I, col])

    def norm_squared(self) -> float:
        return float(np.sum(np.abs(self.coeffs) ** 2))

    def i_weights(self) -> np.ndarray:
        """Σ_M |b_IM|² for every I ≤ l_max."""
        return np.sum(np.abs(self.coeffs) ** 2, axis=1)

    def occupied_i(self) -> np.ndarray:
        return np.nonzero(self.i_weights() > 0.0)[0]

    def mean_i(self) -> float:
        w = self.i_weights()
        return float(np.dot(np.arange(self.l_max + 1), w) / np.sum(w))

    def is_axially_symmetric(self) -> bool:
        """True when only M = 0 components are present."""
        off = np.delete(self.coeffs, self.l_max, axis=1)
        return not np.any(off)

    def padded(self, l_max: int) -> np.ndarray:
        if l_max < self.l_max:
            raise ValidationError(f"cannot pad l_max={self.l_max} down to {l_max}")
        out = np.zeros(table_shape(l_max), dtype=complex)
        shift = l_max - self.l_max
        out[: self.l_max + 1, shift : shift + 2 * self.l_max + 1] = self.coeffs
        return out

    def rotate_z(self, alpha: float) -> "WavePacket":
        """Rotation about the quantization axis: b_IM → b_IM e^{−iMα}."""
        return self.with_coeffs(self.coeffs * np.exp(-1j * self.m_values * alpha)[None, :])

    def renormalized(self) -> "WavePacket":
        n2 = self.norm_squared()
        if n2 == 0.0:
            raise ValidationError("cannot renormalize an empty packet")
        return WavePacket(
            self.coeffs / np.sqrt(n2), tol=self.tol, norm_defect=self.norm_defect, axis=self.axis
        )

    def evaluate(self, theta, phi) -> np.ndarray:
        """Ψ at laboratory angles (θ, φ)."""
        theta = np.asarray(theta, dtype=float)
        phi = np.asarray(phi, dtype=float)
        if self.axis == "x":
            theta, phi = lab_to_x_frame(theta, phi)
        return synthesize(self.coeffs, theta, phi)

    def descriptor(self) -> dict:
        """Short summary for manifests and carpet sidecars."""
        return {
            "l_max": self.l_max,
            "axis": self.axis,
            "tol": self.tol,
            "norm_defect": self.norm_defect,
            "mean_i": self.mean_i(),
            "axially_symmetric": self.is_axially_symmetric(),
        }

    # ------------------------------------------------------------------ #
    # serialization                                                      #
    # ------------------------------------------------------------------ #
    def to_document(self) -> WavePacketDocument:
        rows = [(I, M, float(b.real), float(b.imag)) for I, M, b in self.items()]
        return WavePacketDocument(
            l_max=self.l_max,
            tol=self.tol,
            norm_defect=self.norm_defect,
            axis=self.axis,
            coeffs=rows,
        )

    def to_dict(self) -> dict:
        return self.to_document().model_dump()

    @classmethod
    def from_dict(cls, data: dict) -> "WavePacket":
        doc = WavePacketDocument.model_validate(data)
        table = np.zeros(table_shape(doc.l_max), dtype=complex)
        for I, M, re, im in doc.coeffs:
            if I > doc.l_max or abs(M) > I:
                raise ValidationError(f"row (I={I}, M={M}) outside l_max={doc.l_max}")
            table[I, M + doc.l_max] = complex(re, im)
        return cls(table, tol=doc.tol, norm_defect=doc.norm_defect, axis=doc.axis)

    def save(self, path: Path | str) -> None:
        path = Path(path)
        try:
            path.write_text(json.dumps(self.to_dict(), indent=2, sort_keys=True))
        except OSError as exc:
            raise ArtifactIOError(path, str(exc)) from exc

    @classmethod
    def load(cls, path: Path | str) -> "WavePacket":
        path = Path(path)
        try:
            return cls.from_dict(json.loads(path.read_text()))
        except OSError as exc:
            raise ArtifactIOError(path, str(exc)) from exc


def lab_to_x_frame(theta: np.ndarray, phi: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    # body z' = lab x, x' = lab y, y' = lab z
    x = np.sin(theta) * np.cos(phi)
    y = np.sin(theta) * np.sin(phi)
    z = np.cos(theta)
    return np.arccos(np.clip(x, -1.0, 1.0)), np.arctan2(z, y)


def autocorrelation(wp_a: WavePacket, wp_b: WavePacket) -> complex:
    """<a|b> = Σ conj(a_IM) b_IM, zero-padding the shorter table."""
    if wp_a.axis != wp_b.axis:
        raise ValidationError(
            f"packets are quantized along different axes ({wp_a.axis} vs {wp_b.axis})"
        )
    l_max = max(wp_a.l_max, wp_b.l_max)
    return complex(np.vdot(wp_a.padded(l_max), wp_b.padded(l_max)))
