"""Potential structural complexity in the non-hierarchical context.

Closed forms for single regions and whole systems, the laws that fall out of
the uniform-system formula, and an explicit edge-enumeration oracle that shares
no arithmetic with the closed forms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .model import CapExceeded, FlatSystem, UniformSpec, ValidationError

DEFAULT_NODE_CAP = 2000


@dataclass(frozen=True)
class PscBreakdown:
    internal: int
    external: int

    @property
    def total(self) -> int:
        return self.internal + self.external


def psc_unencapsulated(n: int) -> int:
    """Every ordered pair of distinct nodes: n(n-1)."""
    if n < 0:
        raise ValidationError("n must be >= 0")
    return n * (n - 1)


def region_internal_psc(size: int) -> int:
    if size < 0:
        raise ValidationError("size must be >= 0")
    return size * (size - 1)


def region_external_psc(size: int, h_total: int, h_region: int) -> int:
    """Edges leaving a region: each of its nodes may target every violating node elsewhere."""
    if size < 0 or h_region < 0:
        raise ValidationError("counts must be >= 0")
    if h_region > h_total:
        raise ValidationError(f"region violations {h_region} exceed system violations {h_total}")
    if h_region > size:
        raise ValidationError(f"region violations {h_region} exceed region size {size}")
    return size * (h_total - h_region)


def system_psc(sys: FlatSystem) -> PscBreakdown:
    h = sys.h
    internal = sum(region_internal_psc(reg.size) for reg in sys.regions)
    external = sum(region_external_psc(reg.size, h, reg.violating) for reg in sys.regions)
    return PscBreakdown(internal, external)


def enumerate_psc_oracle(sys: FlatSystem, cap: int = DEFAULT_NODE_CAP) -> int:
    """Count the edges of the maximally-connected graph by walking it node by node.

    Each node is materialised with its region label and visibility; an edge
    tail -> head exists when head is another node of the tail's region, or
    head is a violating node of some other region.
    """
    n = sys.n
    if n > cap:
        raise CapExceeded(f"refusing to enumerate {n} nodes (cap {cap})")
    nodes: list[tuple[int, bool]] = []
    for label, reg in enumerate(sys.regions):
        nodes.extend((label, False) for _ in range(reg.hidden))
        nodes.extend((label, True) for _ in range(reg.violating))
    by_region: dict[int, list[int]] = {}
    public: list[int] = []
    for idx, (label, vis) in enumerate(nodes):
        by_region.setdefault(label, []).append(idx)
        if vis:
            public.append(idx)

    edges = 0
    for tail, (label, _) in enumerate(nodes):
        for head in by_region[label]:
            if head != tail:
                edges += 1
        for head in public:
            if nodes[head][0] != label:
                edges += 1
    return edges


def _positive(name: str, value: float) -> float:
    if value <= 0:
        raise ValidationError(f"{name} must be > 0 (law undefined), got {value}")
    return float(value)


def uniform_psc(spec: UniformSpec | tuple[float, float, float]) -> float:
    """n(n/r - 1 + (r-1)p) for a uniformly distributed system."""
    if not isinstance(spec, UniformSpec):
        spec = UniformSpec(*spec)
    n, r, p = spec.n, spec.r, spec.p
    return n * (n / r - 1 + (r - 1) * p)


def r_min(n: float, p: float) -> float:
    """Region count minimising uniform P.S.C.: sqrt(n/p)."""
    return math.sqrt(n / _positive("p", p))


def r_h(n: float, p: float) -> float:
    """Region count at which uniform P.S.C. climbs back to n(n-1)."""
    return n / _positive("p", p)


def s_min(n: float, p: float) -> float:
    """Lowest uniform P.S.C. over unconstrained (real) r: n(2 sqrt(np) - 1 - p)."""
    p = _positive("p", p)
    return n * (2 * math.sqrt(n * p) - 1 - p)


def optimal_region_size(n: float, p: float) -> float:
    return math.sqrt(n * _positive("p", p))


def required_violation_for_size(region_size: float, n: float) -> float:
    if region_size < 1:
        raise ValidationError("region_size must be >= 1")
    if n < region_size:
        raise ValidationError("n must be >= region_size")
    return region_size**2 / n


def recommend_regions(n: int, p: float) -> int:
    """Whole-number region count: the better of floor/ceil of r_min, ties to the smaller."""
    best = r_min(n, p)
    lo = max(1, math.floor(best))
    hi = max(1, math.ceil(best))
    if uniform_psc(UniformSpec(n, hi, p)) < uniform_psc(UniformSpec(n, lo, p)):
        return hi
    return lo
