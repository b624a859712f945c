from __future__ import annotations
from dataclasses import dataclass, asdict
from typing import Any, Literal


@dataclass(frozen=True)
class DetectedFeature:
    """One fractional-revival component located by the azimuthal overlap scan."""

    azimuth: float
    fidelity: float
    kind: Literal["clone", "mutant"]
    weight: float = 0.0
    overlap: float = 0.0

    @property
    def is_clone(self) -> bool:
        return self.kind == "clone"

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)
