"""
Excitation amplitude tables and the Gaussian surrogate.

File columns, `#` comments allowed:

    I re            real amplitude, M = 0
    I re im         complex amplitude, M = 0
    I M re im       complex amplitude for an explicit M

Sets are normalized on load; a warning is logged when the stored norm is
off by more than 1e-3.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Literal, Tuple

import numpy as np

from rotorwave.core.errors import DataFileError, DomainError, ValidationError
from rotorwave.engine.wavepacket import WavePacket
from rotorwave.ingest.tables import parse_float, parse_int, read_table, write_table

logger = logging.getLogger(__name__)

_NORM_WARN = 1e-3

Entry = Tuple[int, int, complex]


@dataclass(frozen=True)
class AmplitudeSet:
    entries: Tuple[Entry, ...]
    provenance: Literal["file", "surrogate"] = "file"
    source: str = ""

    def __post_init__(self) -> None:
        if not self.entries:
            raise ValidationError("amplitude set is empty")

    def norm_squared(self) -> float:
        return float(sum(abs(c) ** 2 for _, _, c in self.entries))

    def mean_i(self) -> float:
        weights = np.array([abs(c) ** 2 for _, _, c in self.entries])
        spins = np.array([I for I, _, _ in self.entries], dtype=float)
        return float(np.dot(spins, weights) / np.sum(weights))

    def is_axially_symmetric(self) -> bool:
        return all(M == 0 for _, M, _ in self.entries)

    def to_wavepacket(self) -> WavePacket:
        return WavePacket.from_entries(self.entries)

    def descriptor(self) -> dict:
        return {
            "provenance": self.provenance,
            "source": self.source,
            "count": len(self.entries),
            "mean_i": self.mean_i(),
        }


def _normalized(entries, path=None, *, warn: bool = True) -> Tuple[Entry, ...]:
    norm2 = sum(abs(c) ** 2 for _, _, c in entries)
    if norm2 == 0.0:
        raise ValidationError(f"amplitudes{f' in {path}' if path else ''} are all zero")
    if warn and abs(norm2 - 1.0) > _NORM_WARN:
        where = f" in {path}" if path else ""
        logger.warning("amplitudes%s had norm^2 = %.6g; renormalized", where, norm2)
    scale = 1.0 / math.sqrt(norm2)
    return tuple((I, M, c * scale) for I, M, c in entries)


def _parse_record(path: Path, lineno: int, fields) -> Entry:
    n = len(fields)
    if n not in (2, 3, 4):
        raise DataFileError(path, f"expected 2, 3 or 4 columns, got {n}", lineno)
    I = parse_int(path, lineno, fields[0], "I")
    M = parse_int(path, lineno, fields[1], "M") if n == 4 else 0
    values = [parse_float(path, lineno, tok, "amplitude") for tok in fields[(2 if n == 4 else 1):]]
    re = values[0]
    im = values[1] if len(values) > 1 else 0.0
    if I < 0 or abs(M) > I:
        raise DataFileError(path, f"invalid harmonic index (I={I}, M={M})", lineno)
    return I, M, complex(re, im)


def load_amplitudes(path: Path | str) -> AmplitudeSet:
    table = read_table(path)
    seen = set()
    entries = []
    odd = set()
    for lineno, fields in table.records:
        I, M, c = _parse_record(table.path, lineno, fields)
        if (I, M) in seen:
            raise DataFileError(table.path, f"duplicate entry for (I={I}, M={M})", lineno)
        seen.add((I, M))
        if I % 2:
            odd.add(I)
        entries.append((I, M, c))
    if odd:
        logger.warning(
            "%s: odd I present %s; ground-band excitation populates even I only",
            table.path,
            sorted(odd),
        )

    entries.sort(key=lambda e: (e[0], e[1]))
    return AmplitudeSet(
        _normalized(entries, table.path),
        provenance="file",
        source=table.meta.get("source", str(table.path)),
    )


def save_amplitudes(amplitudes: AmplitudeSet, path: Path | str) -> Path:
    rows = [f"{I} {M} {c.real!r} {c.imag!r}" for I, M, c in amplitudes.entries]
    return write_table(path, {"source": amplitudes.source}, ["# I M re im", *rows])


def surrogate_amplitudes(
    i_bar: float, sigma: float, i_max: int, even_only: bool = True
) -> AmplitudeSet:
    """Real Gaussian weights c_I ∝ exp(−(I − Ī)²/(2σ²)), M = 0."""
    if not sigma > 0.0:
        raise DomainError(f"sigma must be positive, got {sigma}")
    if i_max < i_bar:
        raise DomainError(f"i_max={i_max} is below i_bar={i_bar}")
    spins = np.arange(0, int(i_max) + 1, 2 if even_only else 1)
    weights = np.exp(-((spins - i_bar) ** 2) / (2.0 * sigma * sigma))
    entries = [(int(I), 0, complex(w)) for I, w in zip(spins, weights) if w > 0.0]
    if not entries:
        raise ValidationError(f"surrogate weights vanish for i_bar={i_bar}, sigma={sigma}")
    source = f"surrogate(i_bar={i_bar:g}, sigma={sigma:g}, i_max={i_max}, even_only={even_only})"
    return AmplitudeSet(_normalized(entries, warn=False), provenance="surrogate", source=source)
