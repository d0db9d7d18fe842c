"""Exact algebra for matrix bispectral functions Psi = e^{xz} M(x, z)."""
from __future__ import annotations

from .expkernel import ExpKernel, apply_left, apply_right
from .matrix import MatRF
from .operators import DiffOp, minimal_ad_order
from .poly import BiPoly
from .ratfunc import RatFunc
from .scalar import ExtField

__version__ = "0.1.0"

__all__ = [
    "BiPoly", "DiffOp", "ExpKernel", "ExtField", "MatRF", "RatFunc",
    "apply_left", "apply_right", "minimal_ad_order",
]
