from .distributions import (ConditionalDistribution, DegreeDistribution,
                            DistributionFormatError, conditional_distribution)
from .hypergeom import hypergeom_matrix, log_binom
from .lt import CodedSymbol, encode_neighbors, lt_encode, sample_degree, split_id, symbol_id
from .peeling import PeelingDecoder, RecoveryState, SymbolGraph, peel_decode, strip_known
from .precode import Precode, PrecodeSpec, precode_decode, precode_encode

__all__ = [
    "CodedSymbol", "ConditionalDistribution", "DegreeDistribution",
    "DistributionFormatError", "PeelingDecoder", "Precode", "PrecodeSpec",
    "RecoveryState", "SymbolGraph", "conditional_distribution", "encode_neighbors",
    "hypergeom_matrix", "log_binom", "lt_encode", "peel_decode", "precode_decode",
    "precode_encode", "sample_degree", "split_id", "strip_known", "symbol_id",
]
