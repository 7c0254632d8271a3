"""Value types for encapsulated systems.

Everything here is a frozen dataclass holding counts: how many nodes a region
holds and how many of them are visible outside it. No metric math lives here.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence


class ValidationError(ValueError):
    """Raised when a system description breaks a structural constraint."""


class CapExceeded(ValueError):
    """Raised when an enumeration would exceed its configured node cap."""


def _check_count(name: str, value: object) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValidationError(f"{name} must be an integer, got {value!r}")
    if value < 0:
        raise ValidationError(f"{name} must be >= 0, got {value}")
    return value


@dataclass(frozen=True)
class RegionCounts:
    """One encapsulated region: information-hidden and violating (public) nodes."""

    hidden: int
    violating: int

    def __post_init__(self) -> None:
        _check_count("hidden", self.hidden)
        _check_count("violating", self.violating)

    @property
    def size(self) -> int:
        return self.hidden + self.violating

    def is_empty(self) -> bool:
        return self.size == 0


@dataclass(frozen=True)
class FlatSystem:
    """A non-hierarchical encapsulated system: an ordered list of regions.

    Empty regions are kept (they are legal input) but are ignored by ``r``.
    """

    regions: tuple[RegionCounts, ...] = ()

    def __post_init__(self) -> None:
        regions = tuple(self.regions)
        for reg in regions:
            if not isinstance(reg, RegionCounts):
                raise ValidationError(f"expected RegionCounts, got {reg!r}")
        object.__setattr__(self, "regions", regions)

    @property
    def n(self) -> int:
        return sum(reg.size for reg in self.regions)

    @property
    def h(self) -> int:
        return sum(reg.violating for reg in self.regions)

    @property
    def r(self) -> int:
        return sum(1 for reg in self.regions if not reg.is_empty())

    def nonempty(self) -> tuple[RegionCounts, ...]:
        return tuple(reg for reg in self.regions if not reg.is_empty())

    def sizes(self) -> list[int]:
        return [reg.size for reg in self.nonempty()]

    def is_uniform(self) -> bool:
        regs = self.nonempty()
        if not regs:
            return True
        first = regs[0]
        return all(reg.size == first.size and reg.violating == first.violating for reg in regs)

    def __iter__(self) -> Iterator[RegionCounts]:
        return iter(self.regions)

    def __len__(self) -> int:
        return len(self.regions)


def flat_from_counts(pairs: Iterable[Sequence[int]]) -> FlatSystem:
    """Build a FlatSystem from ``(hidden, violating)`` pairs, preserving order."""
    return FlatSystem(tuple(RegionCounts(int_check(h), int_check(v)) for h, v in pairs))


def int_check(value: object) -> int:
    # numpy integers are fine, bools and floats are not
    if hasattr(value, "__index__") and not isinstance(value, bool):
        return value.__index__()  # type: ignore[union-attr]
    raise ValidationError(f"count must be an integer, got {value!r}")


def uniform_system(n: int, r: int, p: int) -> FlatSystem:
    """r regions of n/r nodes each, p of which are violating."""
    if r < 1:
        raise ValidationError("r must be >= 1")
    if n < 1:
        raise ValidationError("n must be >= 1")
    if n % r:
        raise ValidationError(f"{r} regions do not divide {n} nodes")
    size = n // r
    if p < 0 or p > size:
        raise ValidationError(f"p={p} must lie in [0, {size}]")
    return FlatSystem(tuple(RegionCounts(size - p, p) for _ in range(r)))


@dataclass(frozen=True)
class UniformSpec:
    """The (n, r, p) triple behind every closed-form law.

    r and p may be real: laws return non-integer optima and real systems have
    a fractional average violation h/r.
    """

    n: float
    r: float
    p: float

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValidationError(f"n must be >= 1, got {self.n}")
        if self.r < 1:
            raise ValidationError(f"r must be >= 1, got {self.r}")
        if self.p < 0:
            raise ValidationError(f"p must be >= 0, got {self.p}")

    @property
    def realizable(self) -> bool:
        vals = (self.n, self.r, self.p)
        if any(float(v) != int(v) for v in vals):
            return False
        n, r, p = (int(v) for v in vals)
        return n % r == 0 and p <= n // r


@dataclass(frozen=True)
class LayeredSystem:
    """Subsystems grouped into layers; ``layers[0]`` is the bottom layer.

    ``penetration`` is how many layers below its own a unit may reach. ``None``
    means every layer below (the rule used throughout the layering experiments).
    """

    layers: tuple[tuple[RegionCounts, ...], ...]
    penetration: int | None = None

    def __post_init__(self) -> None:
        layers = tuple(tuple(layer) for layer in self.layers)
        for layer in layers:
            for reg in layer:
                if not isinstance(reg, RegionCounts):
                    raise ValidationError(f"expected RegionCounts, got {reg!r}")
        if self.penetration is not None:
            _check_count("penetration", self.penetration)
        object.__setattr__(self, "layers", layers)

    @property
    def L(self) -> int:
        return len(self.layers)

    @property
    def d(self) -> int:
        """Effective penetration, clamped to the number of layers below the top."""
        deepest = max(self.L - 1, 0)
        if self.penetration is None:
            return deepest
        return min(self.penetration, deepest)

    @property
    def n(self) -> int:
        return sum(reg.size for layer in self.layers for reg in layer)

    @property
    def h(self) -> int:
        return sum(reg.violating for layer in self.layers for reg in layer)

    @property
    def r(self) -> int:
        return sum(1 for layer in self.layers for reg in layer if not reg.is_empty())

    def flatten(self) -> FlatSystem:
        return FlatSystem(tuple(reg for layer in self.layers for reg in layer))


@dataclass(frozen=True)
class HierNode:
    name: str
    counts: RegionCounts
    children: tuple["HierNode", ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "children", tuple(self.children))


@dataclass(frozen=True)
class HierTree:
    """A recursive subsystem hierarchy with a single root.

    Subsystems are indexed in breadth-first order; ``parent[i]`` is the index of
    the parent of subsystem ``i`` (``None`` for the root).
    """

    root: HierNode
    names: tuple[str, ...] = field(init=False, repr=False, compare=False)
    counts: tuple[RegionCounts, ...] = field(init=False, repr=False, compare=False)
    parent: tuple[int | None, ...] = field(init=False, repr=False, compare=False)
    children: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        names: list[str] = []
        counts: list[RegionCounts] = []
        parent: list[int | None] = []
        kids: list[list[int]] = []
        seen: set[int] = set()
        queue: deque[tuple[HierNode, int | None]] = deque([(self.root, None)])
        while queue:
            node, par = queue.popleft()
            if id(node) in seen:
                raise ValidationError(f"subsystem {node.name!r} appears twice (cycle or shared node)")
            seen.add(id(node))
            idx = len(names)
            names.append(node.name)
            counts.append(node.counts)
            parent.append(par)
            kids.append([])
            if par is not None:
                kids[par].append(idx)
            for child in node.children:
                queue.append((child, idx))
        if len(set(names)) != len(names):
            raise ValidationError("subsystem names must be unique")
        object.__setattr__(self, "names", tuple(names))
        object.__setattr__(self, "counts", tuple(counts))
        object.__setattr__(self, "parent", tuple(parent))
        object.__setattr__(self, "children", tuple(tuple(k) for k in kids))

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"unknown subsystem {name!r}") from None

    def depth_of(self, idx: int) -> int:
        depth = 0
        while self.parent[idx] is not None:
            idx = self.parent[idx]  # type: ignore[assignment]
            depth += 1
        return depth

    @property
    def depth(self) -> int:
        """Number of levels above the root."""
        return max(self.depth_of(i) for i in range(len(self.names)))

    def span(self, idx: int) -> int:
        return len(self.children[idx])

    @property
    def n(self) -> int:
        return sum(c.size for c in self.counts)

    @property
    def h(self) -> int:
        return sum(c.violating for c in self.counts)

    @property
    def r(self) -> int:
        return len(self.names)

    def flatten(self) -> FlatSystem:
        return FlatSystem(self.counts)

    def preorder(self) -> Iterator[tuple[HierNode, HierNode | None]]:
        """Yield ``(node, parent)`` depth-first, children in declared order."""
        stack: list[tuple[HierNode, HierNode | None]] = [(self.root, None)]
        while stack:
            node, par = stack.pop()
            yield node, par
            for child in reversed(node.children):
                stack.append((child, node))


def tree_from_parents(
    entries: Sequence[tuple[str, str | None, RegionCounts]],
) -> HierTree:
    """Build a HierTree from ``(name, parent_name, counts)`` rows in any order."""
    by_name: dict[str, tuple[str | None, RegionCounts]] = {}
    order: list[str] = []
    for name, par, counts in entries:
        if name in by_name:
            raise ValidationError(f"duplicate subsystem {name!r}")
        by_name[name] = (par, counts)
        order.append(name)
    roots = [name for name in order if by_name[name][0] is None]
    if len(roots) != 1:
        raise ValidationError(f"expected exactly one root, found {len(roots)}")
    kids: dict[str, list[str]] = {name: [] for name in order}
    for name in order:
        par = by_name[name][0]
        if par is None:
            continue
        if par not in by_name:
            raise ValidationError(f"subsystem {name!r} has unknown parent {par!r}")
        kids[par].append(name)

    reached: set[str] = set()

    def build(name: str) -> HierNode:
        reached.add(name)
        return HierNode(name, by_name[name][1], tuple(build(c) for c in kids[name]))

    # iterative reachability first, so a cycle cannot recurse forever
    stack = [roots[0]]
    seen = {roots[0]}
    while stack:
        cur = stack.pop()
        for c in kids[cur]:
            if c not in seen:
                seen.add(c)
                stack.append(c)
    if len(seen) != len(order):
        orphans = sorted(set(order) - seen)
        raise ValidationError(f"subsystems not reachable from the root (cycle?): {orphans}")
    return HierTree(build(roots[0]))


@dataclass(frozen=True)
class LabeledCodebase:
    """Named regions holding ``(type_name, is_public)`` entries, as scanned from source."""

    regions: Mapping[str, tuple[tuple[str, bool], ...]]
    skipped: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        frozen = {str(k): tuple((str(t), bool(v)) for t, v in entries) for k, entries in self.regions.items()}
        object.__setattr__(self, "regions", dict(sorted(frozen.items())))
        object.__setattr__(self, "skipped", tuple(self.skipped))

    def region_counts(self) -> dict[str, RegionCounts]:
        out = {}
        for name, entries in self.regions.items():
            public = sum(1 for _, vis in entries if vis)
            out[name] = RegionCounts(len(entries) - public, public)
        return out

    def collapse(self) -> FlatSystem:
        """Counts only, regions sorted by name."""
        return FlatSystem(tuple(self.region_counts().values()))

    @staticmethod
    def display_name(region: str) -> str:
        return region if region else "(default)"
