"""Exact, weight-truncated vertex rings over Z, Z/n and their polynomial rings."""

from .basering import Integers, ModN, Poly, Product, parse_ring
from .cli import build_instance, parse_instance, run_suite
from .errors import TruncationEscape, VrxError, WindowRejected
from .report import CheckReport

__all__ = [
    "CheckReport",
    "Integers",
    "ModN",
    "Poly",
    "Product",
    "TruncationEscape",
    "VrxError",
    "WindowRejected",
    "build_instance",
    "parse_instance",
    "parse_ring",
    "run_suite",
]
