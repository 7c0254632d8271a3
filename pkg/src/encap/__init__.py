"""Potential structural complexity (P.S.C.) of encapsulated software systems.

Count how many directed dependencies a system could form given how its units
are grouped into regions and how many of them are visible outside, across flat,
layered and tree-shaped encapsulation contexts.
"""

from __future__ import annotations

from .model import (
    CapExceeded,
    FlatSystem,
    HierNode,
    HierTree,
    LabeledCodebase,
    LayeredSystem,
    RegionCounts,
    UniformSpec,
    ValidationError,
    flat_from_counts,
    tree_from_parents,
    uniform_system,
)
from .psc import (
    enumerate_psc_oracle,
    psc_unencapsulated,
    r_h,
    r_min,
    recommend_regions,
    s_min,
    system_psc,
    uniform_psc,
)
from .metrics import amc_check, configuration_efficiency, ihv_percent

__version__ = "0.1.0"

__all__ = [
    "CapExceeded", "FlatSystem", "HierNode", "HierTree", "LabeledCodebase", "LayeredSystem",
    "RegionCounts", "UniformSpec", "ValidationError", "flat_from_counts", "tree_from_parents",
    "uniform_system", "enumerate_psc_oracle", "psc_unencapsulated", "r_h", "r_min",
    "recommend_regions", "s_min", "system_psc", "uniform_psc", "amc_check",
    "configuration_efficiency", "ihv_percent",
]
