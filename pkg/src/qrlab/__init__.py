"""qrlab: QR code (versions 1-3) encoding, corruption and error-correction analysis."""
from ._backend import BACKEND
from .codec import AUTO, DecodeReport, decode, encode
from .corruption import CorruptionKind, CorruptionSpec, burst_errors, derive_rng, flip_errors
from .errors import (
    CapacityExceeded,
    DecodeFailure,
    FormatUnreadable,
    PayloadMalformed,
    QrlabError,
    RsFailure,
)
from .symbol_model import CodeGeometry, EccLevel, Region, geometry, region_map

__version__ = "0.1.0"

__all__ = [
    "AUTO",
    "BACKEND",
    "CapacityExceeded",
    "CodeGeometry",
    "CorruptionKind",
    "CorruptionSpec",
    "DecodeFailure",
    "DecodeReport",
    "EccLevel",
    "FormatUnreadable",
    "PayloadMalformed",
    "QrlabError",
    "Region",
    "RsFailure",
    "burst_errors",
    "decode",
    "derive_rng",
    "encode",
    "flip_errors",
    "geometry",
    "region_map",
]
