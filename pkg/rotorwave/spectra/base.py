from abc import ABC, abstractmethod
from typing import Iterable, Tuple

import numpy as np


class SpectrumModel(ABC):
    """Energy law E_I of a rotor band, in natural units (ħ = 1)."""

    kind: str = "abstract"

    @abstractmethod
    def energies(self, I: Iterable[int]) -> np.ndarray:
        """E_I for every requested I; raises SpectrumCoverageError on gaps."""

    @abstractmethod
    def derivatives(self, i_bar: float) -> Tuple[float, float]:
        """(E′, E″) at Ī, E″ being the coefficient of (I − Ī)²."""

    @abstractmethod
    def descriptor(self) -> dict: ...

    @classmethod
    @abstractmethod
    def from_descriptor(cls, data: dict) -> "SpectrumModel": ...
