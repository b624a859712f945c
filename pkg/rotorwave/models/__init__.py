from rotorwave.models.config import RunConfig, SurrogateSpec
from rotorwave.models.documents import (
    CarpetMetadata,
    FeatureRecord,
    RevivalReportDocument,
    WavePacketDocument,
)

__all__ = [
    "CarpetMetadata",
    "FeatureRecord",
    "RevivalReportDocument",
    "RunConfig",
    "SurrogateSpec",
    "WavePacketDocument",
]
