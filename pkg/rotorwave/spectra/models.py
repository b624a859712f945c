"""Built-in energy laws: the ideal rigid rotor and a tabulated level scheme."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Dict, Iterable, Tuple

import numpy as np

from rotorwave.core.errors import DomainError, SpectrumCoverageError, ValidationError
from rotorwave.spectra import register
from rotorwave.spectra.base import SpectrumModel

logger = logging.getLogger(__name__)

_MAX_STEP = 2  # contiguous (1) or even-only (2) bands


def _as_levels(I: Iterable[int]) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(I))
    if arr.size and (np.any(arr < 0) or np.any(arr != np.round(arr))):
        raise DomainError(f"angular momenta must be non-negative integers, got {arr.tolist()}")
    return arr.astype(int)


@register("ideal")
@dataclass(frozen=True, slots=True)
class IdealRotor(SpectrumModel):
    """E_I = B·I(I+1)."""

    B: float

    def __post_init__(self) -> None:
        if not (self.B > 0.0 and math.isfinite(self.B)):
            raise DomainError(f"rotational constant B must be positive, got {self.B}")

    def energies(self, I: Iterable[int]) -> np.ndarray:
        arr = _as_levels(I)
        return self.B * arr * (arr + 1.0)

    def derivatives(self, i_bar: float) -> Tuple[float, float]:
        return self.B * (2.0 * i_bar + 1.0), self.B

    def descriptor(self) -> dict:
        return {"kind": self.kind, "B": self.B}

    @classmethod
    def from_descriptor(cls, data: dict) -> "IdealRotor":
        return cls(B=float(data["B"]))


@register("tabulated")
@dataclass(frozen=True, slots=True)
class Tabulated(SpectrumModel):
    """
    Level energies looked up from a table of (I, E_I) pairs.

    Phases use the tabulated energies directly; `derivatives` takes central
    differences with the band's own spacing h around the level nearest Ī
    (h = 2 for an even-only ground band); sparser bands are refused.
    """

    levels: Tuple[Tuple[int, float], ...]

    def __post_init__(self) -> None:
        rows = tuple((int(I), float(E)) for I, E in self.levels)
        if not rows:
            raise ValidationError("a tabulated spectrum needs at least one level")
        for (i0, e0), (i1, e1) in zip(rows, rows[1:]):
            if i1 <= i0:
                raise ValidationError(f"level I={i1} does not follow I={i0} in increasing order")
            if e1 < e0:
                raise ValidationError(f"energy of I={i1} ({e1}) is below that of I={i0} ({e0})")
        object.__setattr__(self, "levels", rows)

    @property
    def _table(self) -> Dict[int, float]:
        return dict(self.levels)

    def energies(self, I: Iterable[int]) -> np.ndarray:
        arr = _as_levels(I)
        table = self._table
        missing = [int(i) for i in arr if int(i) not in table]
        if missing:
            raise SpectrumCoverageError(missing)
        return np.array([table[int(i)] for i in arr], dtype=float)

    def derivatives(self, i_bar: float) -> Tuple[float, float]:
        spins = np.array([I for I, _ in self.levels])
        energies = np.array([E for _, E in self.levels])
        k = int(np.argmin(np.abs(spins - i_bar)))
        i0 = int(spins[k])
        if k == 0 or k == len(spins) - 1:
            step = int(spins[1] - spins[0]) if len(spins) > 1 else 1
            raise SpectrumCoverageError(
                [i0 - step, i0 + step], context=f"finite differences at I_bar={i_bar:g}"
            )
        h_lo = i0 - int(spins[k - 1])
        h_hi = int(spins[k + 1]) - i0
        if h_lo != h_hi:
            h = min(h_lo, h_hi)
            raise SpectrumCoverageError(
                [i0 - h, i0 + h], context=f"finite differences at I_bar={i_bar:g}"
            )
        if h_lo > _MAX_STEP:
            missing = [i for i in (i0 - 2, i0 - 1, i0 + 1, i0 + 2) if i >= 0]
            raise SpectrumCoverageError(
                missing, context=f"level spacing {h_lo} at I_bar={i_bar:g} is too sparse"
            )
        h = float(h_lo)
        e_minus, e_zero, e_plus = energies[k - 1], energies[k], energies[k + 1]
        first = (e_plus - e_minus) / (2.0 * h)
        second = (e_plus - 2.0 * e_zero + e_minus) / (2.0 * h * h)
        logger.debug("finite differences at I=%d (h=%d): E'=%g E''=%g", i0, h_lo, first, second)
        return float(first), float(second)

    def descriptor(self) -> dict:
        return {"kind": self.kind, "levels": [[I, E] for I, E in self.levels]}

    @classmethod
    def from_descriptor(cls, data: dict) -> "Tabulated":
        return cls(levels=tuple((int(I), float(E)) for I, E in data["levels"]))
