# rotorwave/models/config.py

from __future__ import annotations

from pathlib import Path
from typing import Any, Dict, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

Command = Literal["expand", "observables", "revivals", "carpet"]


class SurrogateSpec(BaseModel):
    """Gaussian amplitude surrogate; on the command line `ibar,sigma,imax`."""

    model_config = ConfigDict(extra="forbid")

    i_bar: float
    sigma: float = Field(gt=0.0)
    i_max: int = Field(ge=0)
    even_only: bool = True

    @model_validator(mode="before")
    @classmethod
    def _from_text(cls, value: Any) -> Any:
        if isinstance(value, str):
            parts = [p.strip() for p in value.split(",")]
            if len(parts) != 3:
                raise ValueError(f"expected 'ibar,sigma,imax', got {value!r}")
            return {"i_bar": parts[0], "sigma": parts[1], "i_max": parts[2]}
        if isinstance(value, (list, tuple)):
            return dict(zip(("i_bar", "sigma", "i_max", "even_only"), value))
        return value

    @model_validator(mode="after")
    def _window(self) -> "SurrogateSpec":
        if self.i_max < self.i_bar:
            raise ValueError(f"i_max={self.i_max} is below i_bar={self.i_bar}")
        return self


class RunConfig(BaseModel):
    """
    Everything a CLI run needs. Built from an optional JSON/YAML file and
    overridden by explicitly passed flags; recorded verbatim in the manifest.
    """

    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    command: Command

    # coefficient source: coherent state, amplitude file or surrogate
    N: Optional[float] = Field(default=None, gt=0.0)
    eta: Optional[float] = Field(default=None, ge=-1.0, le=1.0)
    lmax: Optional[int] = Field(default=None, ge=0)
    tol: float = Field(default=1e-10, gt=0.0)
    amplitudes: Optional[Path] = None
    surrogate: Optional[SurrogateSpec] = None

    # spectrum: ideal rotor, level file, or a registered descriptor such as
    # the one a carpet sidecar records ({"kind": ..., **fields})
    B: Optional[float] = Field(default=None, gt=0.0)
    levels: Optional[Path] = None
    spectrum: Optional[Dict[str, Any]] = None

    # revivals
    m: int = Field(default=1, ge=1)
    n: int = Field(default=1, ge=1)
    n_scan: Optional[int] = Field(default=None, ge=8)
    clone_threshold: Optional[float] = Field(default=None, gt=0.0, le=1.0)

    # time window in units of t_rev, grids
    t0: float = 0.0
    t1: float = 1.0
    tsteps: int = Field(default=101, ge=2)
    thetas: int = Field(default=181, ge=2)

    out: Path = Path("rotorwave-out")
    threads: int = Field(default=1, ge=1)

    @field_validator("surrogate", mode="before")
    @classmethod
    def _surrogate_text(cls, value: Any) -> Any:
        return SurrogateSpec.model_validate(value) if value is not None else None

    @field_validator("spectrum")
    @classmethod
    def _spectrum_kind(cls, value: Optional[Dict[str, Any]]) -> Optional[Dict[str, Any]]:
        if value is not None and not isinstance(value.get("kind"), str):
            raise ValueError("a spectrum descriptor needs a string 'kind'")
        return value

    @model_validator(mode="after")
    def _sources(self) -> "RunConfig":
        if (self.N is None) != (self.eta is None):
            raise ValueError("--N and --eta must be given together")
        sources = [
            name
            for name, present in (
                ("coherent state (--N/--eta)", self.N is not None),
                ("--amplitudes", self.amplitudes is not None),
                ("--surrogate", self.surrogate is not None),
            )
            if present
        ]
        if len(sources) != 1:
            raise ValueError(
                f"exactly one coefficient source is required, got {sources or 'none'}"
            )

        spectra = [
            s
            for s, v in (("--B", self.B), ("--levels", self.levels), ("spectrum", self.spectrum))
            if v is not None
        ]
        if len(spectra) > 1:
            raise ValueError(f"at most one spectrum may be given, got {spectra}")
        if self.command != "expand" and not spectra:
            raise ValueError(
                f"'{self.command}' needs a spectrum (--B, --levels or a spectrum descriptor)"
            )

        paths = [p.resolve() for p in (self.amplitudes, self.levels, self.out) if p is not None]
        if len(set(paths)) != len(paths):
            raise ValueError("input and output paths must be distinct")

        if self.command in ("observables", "carpet") and not self.t1 > self.t0:
            raise ValueError(f"empty time window: t0={self.t0}, t1={self.t1}")
        if self.command == "revivals" and self.m > self.n:
            raise ValueError(f"m/n = {self.m}/{self.n} lies outside (0, 1]")
        return self

    @property
    def is_coherent_state(self) -> bool:
        return self.N is not None

    @classmethod
    def from_sources(
        cls, command: str, file_data: Optional[Dict[str, Any]], flags: Dict[str, Any]
    ) -> "RunConfig":
        """File values first, then every flag that was actually passed."""
        merged: Dict[str, Any] = dict(file_data or {})
        merged.pop("command", None)
        merged.update({k: v for k, v in flags.items() if v is not None})
        merged["command"] = command
        return cls.model_validate(merged)

    def manifest_view(self) -> dict:
        return self.model_dump(mode="json")
