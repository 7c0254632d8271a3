"""Relative information hiding: layered (1-D) and recursive-tree (2-D) contexts.

The enumerators count edges from the visibility rules directly and are the
authority. The closed forms are kept next to them for comparison only; the
tree formula in particular drops the nodes-per-subsystem factor on its
external term, so it agrees with enumeration only when each subsystem holds a
single node.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from itertools import count
from typing import Sequence

from .model import (
    CapExceeded,
    HierNode,
    HierTree,
    LayeredSystem,
    RegionCounts,
    ValidationError,
)
from .psc import DEFAULT_NODE_CAP

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class LayeredUniformSpec:
    n: int
    r: int
    L: int
    r_L: int
    d: int
    p: float

    def __post_init__(self) -> None:
        if self.r != self.L * self.r_L:
            raise ValidationError(f"r={self.r} must equal L*r_L={self.L * self.r_L}")
        if not 0 <= self.d <= self.L - 1:
            raise ValidationError(f"penetration d={self.d} must lie in [0, {self.L - 1}]")


@dataclass(frozen=True)
class HierUniformSpec:
    n: int
    r: int
    k: int
    b: int
    p: float

    def __post_init__(self) -> None:
        if self.r != full_tree_size(self.b, self.k):
            raise ValidationError(f"r={self.r} is not a full {self.b}-ary tree of depth {self.k}")


def full_tree_size(b: int, k: int) -> int:
    return sum(b**i for i in range(k + 1))


# -- layered -----------------------------------------------------------------


def layered_psc_enumerated(sys: LayeredSystem, cap: int = DEFAULT_NODE_CAP) -> int:
    """Edges formable when units see their own subsystem plus the public units
    of every other subsystem in their own layer or up to ``d`` layers below."""
    if sys.n > cap:
        raise CapExceeded(f"refusing to enumerate {sys.n} nodes (cap {cap})")
    d = sys.d
    total = 0
    for li, layer in enumerate(sys.layers):
        lo = max(0, li - d)
        for si, reg in enumerate(layer):
            targets = 0
            for lj in range(lo, li + 1):
                for sj, other in enumerate(sys.layers[lj]):
                    if (lj, sj) != (li, si):
                        targets += other.violating
            # every unit of the subsystem reaches its peers and the same targets
            for _ in range(reg.size):
                total += reg.size - 1 + targets
    return total


def layered_psc_formula(spec: LayeredUniformSpec) -> float:
    n, r, L, r_L, d, p = spec.n, spec.r, spec.L, spec.r_L, spec.d, spec.p
    return n * (n / r - 1) + (r_L**2 * (d + 1) * (L - d / 2) - r) * p * n / r


def layered_uniform_system(n: int, r: int, L: int, p: int, d: int | None = None) -> LayeredSystem:
    if r % L or n % r:
        raise ValidationError(f"(n={n}, r={r}, L={L}) is not a uniform layering")
    size = n // r
    if p > size:
        raise ValidationError(f"p={p} exceeds subsystem size {size}")
    reg = RegionCounts(size - p, p)
    return LayeredSystem(tuple(tuple(reg for _ in range(r // L)) for _ in range(L)), d)


def layered_from_split(split: Sequence[int], region: RegionCounts, d: int | None = None) -> LayeredSystem:
    """Layers holding ``split[i]`` copies of ``region``, bottom layer first."""
    return LayeredSystem(tuple(tuple(region for _ in range(c)) for c in split), d)


# -- two-dimensional hierarchy -----------------------------------------------


def _visible_indices(tree: HierTree, idx: int) -> set[int]:
    seen: set[int] = set()
    cur = idx
    while tree.parent[cur] is not None:
        par = tree.parent[cur]
        seen.add(par)  # type: ignore[arg-type]
        seen.update(c for c in tree.children[par] if c != cur)  # type: ignore[index]
        cur = par  # type: ignore[assignment]
    return seen


def visible_subsystems(tree: HierTree, name: str) -> frozenset[str]:
    """Subsystems whose public units ``name`` may depend on: ancestors, siblings,
    and siblings of every ancestor. Children and their descendants are excluded,
    as is the subsystem itself."""
    idx = tree.index(name)
    return frozenset(tree.names[i] for i in _visible_indices(tree, idx))


def hier_psc_enumerated(tree: HierTree, cap: int = DEFAULT_NODE_CAP) -> int:
    if tree.n > cap:
        raise CapExceeded(f"refusing to enumerate {tree.n} nodes (cap {cap})")
    total = 0
    for idx, reg in enumerate(tree.counts):
        targets = sum(tree.counts[j].violating for j in _visible_indices(tree, idx))
        for _ in range(reg.size):
            total += reg.size - 1 + targets
    return total


def hier_psc_formula(spec: HierUniformSpec) -> float:
    n, r, k, b, p = spec.n, spec.r, spec.k, spec.b, spec.p
    return n * (n / r - 1) + p * sum(i * b ** (i + 1) for i in range(1, k + 1))


def hier_formula_check(spec: HierUniformSpec) -> tuple[int, float]:
    """Enumerated and closed-form P.S.C. side by side; mismatches are logged."""
    tree = full_tree(spec.b, spec.k, even_split(spec.n, spec.r), int(spec.p))
    enumerated = hier_psc_enumerated(tree)
    formula = hier_psc_formula(spec)
    if enumerated != formula:
        log.info(
            "tree closed form disagrees with enumeration for %s: enumerated=%d formula=%g",
            spec, enumerated, formula,
        )
    return enumerated, formula


def even_split(n: int, r: int) -> list[int]:
    """Sizes differing by at most one; the larger sizes come first."""
    q, m = divmod(n, r)
    return [q + 1] * m + [q] * (r - m)


def _tree_from_parent_list(parent: Sequence[int | None], sizes: Sequence[int], p: int) -> HierTree:
    if len(sizes) != len(parent):
        raise ValidationError("need one size per subsystem")
    kids: list[list[int]] = [[] for _ in parent]
    for i, par in enumerate(parent):
        if par is not None:
            kids[par].append(i)

    def build(i: int) -> HierNode:
        size = sizes[i]
        vis = min(p, size)
        return HierNode(f"s{i}", RegionCounts(size - vis, vis), tuple(build(c) for c in kids[i]))

    return HierTree(build(0))


def grown_tree(r: int, sizes: Sequence[int], p: int, span: int = 2) -> HierTree:
    """Tree of ``r`` subsystems added one at a time in breadth-first order, each
    parent taking ``span`` children before the next parent starts.

    ``sizes`` are assigned in that same order (root first).
    """
    if r < 1:
        raise ValidationError("need at least one subsystem")
    parent = [None] + [(i - 1) // span for i in range(1, r)]
    return _tree_from_parent_list(parent, sizes, p)


def full_tree(b: int, k: int, sizes: Sequence[int], p: int) -> HierTree:
    """Full ``b``-ary tree with ``k`` levels above the root."""
    return grown_tree(full_tree_size(b, k), sizes, p, span=b)


def chain_tree(sizes: Sequence[int], p: int) -> HierTree:
    return _tree_from_parent_list([None] + list(range(len(sizes) - 1)), sizes, p)


def full_tree_depths(b: int, max_r: int) -> list[int]:
    """Depths k whose full b-ary tree has at most ``max_r`` subsystems."""
    out = []
    for k in count():
        if full_tree_size(b, k) > max_r:
            break
        out.append(k)
    return out
