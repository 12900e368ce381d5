"""Exact-arithmetic toolkit for elliptic-curve torsion families, isogeny
descent rank bounds, conductor prime-support counts, and desk-scale
verification of modular-degree valuation inequalities."""

from . import arith, config, curves, descent2, descent3, families, polys, stats, watkins
from .config import Config
from .curves import LongWeierstrass, ShortWeierstrass
from .descent2 import HomogeneousSpace, SelmerEstimate
from .families import E2Param
from .watkins import DatasetRecord, WatkinsReport

__version__ = "0.1.0"

__all__ = [
    "arith",
    "config",
    "curves",
    "descent2",
    "descent3",
    "families",
    "polys",
    "stats",
    "watkins",
    "Config",
    "E2Param",
    "DatasetRecord",
    "HomogeneousSpace",
    "LongWeierstrass",
    "SelmerEstimate",
    "ShortWeierstrass",
    "WatkinsReport",
    "__version__",
]
