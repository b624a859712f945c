"""Experimental rotational level schemes (`I E_keV` per line)."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Optional, Tuple

from rotorwave.core.errors import DataFileError
from rotorwave.ingest.tables import parse_float, parse_int, read_table, write_table
from rotorwave.settings import settings
from rotorwave.spectra import Tabulated

logger = logging.getLogger(__name__)

_BUNDLED_U238 = "u238_ground_band.txt"


@dataclass(frozen=True)
class LevelScheme:
    nucleus_label: str
    levels: Tuple[Tuple[int, float], ...]  # (I, E in keV)
    source: str = ""

    def to_spectrum(self, energy_unit_kev: Optional[float] = None) -> Tabulated:
        """Tabulated spectrum with energies in units of `energy_unit_kev`."""
        unit = settings.energy_unit_kev if energy_unit_kev is None else energy_unit_kev
        return Tabulated(tuple((I, E / unit) for I, E in self.levels))


def _check(path: Path, rows) -> None:
    for lineno, I, E in rows:
        if I < 0 or I % 2:
            raise DataFileError(path, f"level I={I} is not an even non-negative integer", lineno)
    for (_, i0, e0), (lineno, i1, e1) in zip(rows, rows[1:]):
        if i1 <= i0:
            raise DataFileError(path, f"I={i1} does not increase past I={i0}", lineno)
        if e1 < e0:
            raise DataFileError(
                path, f"energy {e1} keV of I={i1} is below {e0} keV of I={i0}", lineno
            )
    if not any(I == 0 and E == 0.0 for _, I, E in rows):
        raise DataFileError(path, "ground state (I=0, E=0) is missing")


def load_levels(path: Path | str) -> LevelScheme:
    table = read_table(path)
    rows = []
    for lineno, fields in table.records:
        if len(fields) != 2:
            raise DataFileError(
                table.path, f"expected 'I E_keV', got {len(fields)} columns", lineno
            )
        I = parse_int(table.path, lineno, fields[0], "I")
        E = parse_float(table.path, lineno, fields[1], "energy")
        rows.append((lineno, I, E))
    _check(table.path, rows)

    label = table.meta.get("nucleus", table.path.stem)
    logger.debug("loaded %d levels of %s from %s", len(rows), label, table.path)
    return LevelScheme(
        nucleus_label=label,
        levels=tuple((I, E) for _, I, E in rows),
        source=table.meta.get("source", ""),
    )


def save_levels(scheme: LevelScheme, path: Path | str) -> Path:
    rows = [f"{I} {E!r}" for I, E in scheme.levels]
    return write_table(path, {"nucleus": scheme.nucleus_label, "source": scheme.source}, rows)


def bundled_levels() -> LevelScheme:
    """The ²³⁸U ground band shipped with the package."""
    ref = resources.files("rotorwave.data").joinpath(_BUNDLED_U238)
    with resources.as_file(ref) as path:
        return load_levels(path)
