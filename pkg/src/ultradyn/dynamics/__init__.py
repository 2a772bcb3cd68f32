"""Periodic points, thresholds, attraction certificates, PCF and reduction checks."""

from ultradyn.dynamics.attraction import (
    AttractionCertificate,
    attraction_disk,
    critical_value_disk_check,
    find_attracted_critical,
    find_attracted_critical_cycle,
)
from ultradyn.dynamics.pcf import PCFCertificate, PCFConfig, pcf_check
from ultradyn.dynamics.periodic import classify, count_attracting_cycles, fixed_points
from ultradyn.dynamics.reduction import ReductionReport, good_reduction
from ultradyn.dynamics.thresholds import EpsilonThreshold, epsilon

__all__ = [
    "AttractionCertificate",
    "EpsilonThreshold",
    "PCFCertificate",
    "PCFConfig",
    "ReductionReport",
    "attraction_disk",
    "classify",
    "count_attracting_cycles",
    "critical_value_disk_check",
    "epsilon",
    "find_attracted_critical",
    "find_attracted_critical_cycle",
    "fixed_points",
    "good_reduction",
    "pcf_check",
]
