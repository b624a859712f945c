# rotorwave/core/errors.py
from __future__ import annotations

from pathlib import Path
from typing import Iterable, Optional


class RotorwaveError(Exception):
    """Base class for every error raised by the library."""


class DomainError(RotorwaveError, ValueError):
    """Invalid harmonic index or out-of-range physical parameter."""


class ConfigurationError(RotorwaveError):
    """Grid, resource cap or run-configuration problem."""


class ValidationError(RotorwaveError):
    """An object violates its invariants (norm, shape, emptiness)."""


class TruncationError(RotorwaveError):
    """Requested tolerance is not reachable at the given truncation order."""

    def __init__(self, l_max: int, achieved_defect: float, tol: float):
        self.l_max = l_max
        self.achieved_defect = achieved_defect
        self.tol = tol
        super().__init__(
            f"norm defect {achieved_defect:.3e} at l_max={l_max} does not meet tol={tol:.3e}"
        )


class ResourceError(RotorwaveError):
    """A search would exceed the configured resource cap."""


class SpectrumCoverageError(RotorwaveError):
    """The spectrum lacks levels required by a packet or a time-scale estimate."""

    def __init__(self, missing: Iterable[int], context: str = ""):
        self.missing = sorted(set(int(i) for i in missing))
        where = f" ({context})" if context else ""
        super().__init__(f"spectrum has no level for I = {self.missing}{where}")


class UndefinedEstimatorError(RotorwaveError):
    """The eta estimators need a non-vanishing var(L_y)."""


class DataFileError(RotorwaveError):
    """Parse or invariant failure in a level or amplitude file."""

    def __init__(self, path: Path | str, message: str, line: Optional[int] = None):
        self.path = Path(path)
        self.line = line
        loc = f"{self.path}:{line}" if line is not None else str(self.path)
        super().__init__(f"{loc}: {message}")


class ArtifactIOError(RotorwaveError):
    """Writing or reading an artifact failed."""

    def __init__(self, path: Path | str, reason: str):
        self.path = Path(path)
        super().__init__(f"cannot access {self.path}: {reason}")
