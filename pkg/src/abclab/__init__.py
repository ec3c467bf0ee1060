"""abclab: exact experiments around abc triples, heights on Gamma_n and their analogues.

The sweep kernels run from a compiled extension when it is built, otherwise
from pure Python; ``abclab.kernels.BACKEND`` names the one in use.
"""
from .arith import LogSum, factorize, radical
from .errors import AbclabError, DomainError, NumericError, SupportError, UsageError
from .gamma import AbcTriple, build_gamma_point, quality, verify_triple

__version__ = "0.1.0"

__all__ = [
    "AbcTriple",
    "AbclabError",
    "DomainError",
    "LogSum",
    "NumericError",
    "SupportError",
    "UsageError",
    "build_gamma_point",
    "factorize",
    "quality",
    "radical",
    "verify_triple",
]
