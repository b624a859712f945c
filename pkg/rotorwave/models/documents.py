# rotorwave/models/documents.py

from typing import List, Literal, Optional, Tuple

from pydantic import BaseModel, Field


class WavePacketDocument(BaseModel):
    """JSON interchange form of a WavePacket."""

    l_max: int = Field(ge=0)
    tol: float = 0.0
    norm_defect: float
    axis: Literal["z", "x"] = "z"
    coeffs: List[Tuple[int, int, float, float]] = Field(
        default_factory=list, description="Rows of [I, M, re, im] for non-zero b_IM."
    )


class FeatureRecord(BaseModel):
    azimuth: float
    fidelity: float
    kind: Literal["clone", "mutant"]
    weight: float = Field(description="Share of |wp_t|² inside the feature's azimuthal sector.")
    overlap: float = Field(description="|<R_z(azimuth) wp_0 | wp_t>| at the feature.")


class RevivalReportDocument(BaseModel):
    m: int
    n: int
    l: int
    q_predicted: int
    clone_threshold: float
    status: Literal["ok", "degenerate"] = "ok"
    residual: float = 0.0
    coefficients: List[Tuple[float, float]]
    features: List[FeatureRecord]


class CarpetMetadata(BaseModel):
    spectrum: dict
    wavepacket: dict
    t_rev: Optional[float] = None
    t_cl: Optional[float] = None
    theta_count: int
    t_count: int
    autocorrelation: List[float] = Field(default_factory=list)
