"""Certified evaluation of the polygon circumscribing constant, the
Kepler-Bouwkamp constant and their prime / nonprime analogs."""
from .mp_core import PrecisionContext, make_context
from .series import ConstantId, ConstantResult, Method, certify, evaluate, ln_K, ln_Kp

__all__ = [
    "ConstantId",
    "ConstantResult",
    "Method",
    "PrecisionContext",
    "certify",
    "evaluate",
    "ln_K",
    "ln_Kp",
    "make_context",
]
__version__ = "0.1.0"
