"""Exact p-adic dynamics of rational maps over Q."""

from ultradyn.exactnum import INF, PAdicApprox, hensel_lift, val
from ultradyn.poly import Poly
from ultradyn.ratfunc import Mobius, RatMap, parse_map

__version__ = "0.1.0"
SCHEMA = "ultradyn/1"

__all__ = [
    "INF",
    "Mobius",
    "PAdicApprox",
    "Poly",
    "RatMap",
    "SCHEMA",
    "hensel_lift",
    "parse_map",
    "val",
]
