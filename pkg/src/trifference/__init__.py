"""Classification of trifferent (perfect 3-hash) codes up to equivalence."""

from .core import (
    Code,
    SymbolCounts,
    decode,
    encode,
    hamming_distance,
    is_trifferent,
    min_distance,
    residual_subcode,
    symbol_counts,
    tau,
    triple_trifferent,
)
from .equivalence import CanonicalResult, GroupElement, apply, canonical_form, orbit_oracle

__version__ = "0.1.0"

__all__ = [
    "Code",
    "SymbolCounts",
    "CanonicalResult",
    "GroupElement",
    "apply",
    "canonical_form",
    "decode",
    "encode",
    "hamming_distance",
    "is_trifferent",
    "min_distance",
    "orbit_oracle",
    "residual_subcode",
    "symbol_counts",
    "tau",
    "triple_trifferent",
]
