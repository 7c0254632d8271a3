"""Experiment drivers that turn the P.S.C. machinery into data series.

Stochastic drivers are seeded through ``numpy.random.SeedSequence``; every
independent unit of work (one random system, one evolving system, one census
chunk) gets its own spawned child sequence, so results do not depend on how
work is split across processes.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Iterator, Literal, Mapping, Sequence

import numpy as np

from .hierarchy import (
    even_split,
    full_tree,
    full_tree_depths,
    full_tree_size,
    grown_tree,
    hier_psc_enumerated,
    layered_from_split,
    layered_psc_enumerated,
    layered_uniform_system,
)
from .metrics import MetricsReport, configuration_efficiency, efficiency_from_values
from .model import CapExceeded, FlatSystem, RegionCounts, UniformSpec, ValidationError
from .psc import psc_unencapsulated, s_min, system_psc, uniform_psc

Context = Literal["unencapsulated", "flat", "layered", "hier2d"]


@dataclass(frozen=True)
class Series:
    name: str
    points: tuple[tuple[float, float], ...]
    metadata: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        pts = tuple((x, y) for x, y in self.points)
        for (x0, _), (x1, _) in zip(pts, pts[1:]):
            if not x1 > x0:
                raise ValidationError(f"series {self.name!r}: x must be strictly increasing ({x0} then {x1})")
        object.__setattr__(self, "points", pts)

    @property
    def xs(self) -> list[float]:
        return [x for x, _ in self.points]

    @property
    def ys(self) -> list[float]:
        return [y for _, y in self.points]

    def as_dict(self) -> dict[float, float]:
        return dict(self.points)

    def argmin(self) -> float:
        return min(self.points, key=lambda pt: (pt[1], pt[0]))[0]


@dataclass(frozen=True)
class RandomSystemParams:
    n: int = 100
    system_count: int = 1000
    seed: int = 0


def _pmap(fn: Callable[[Any], Any], tasks: Sequence[Any], jobs: int = 1) -> list[Any]:
    """Ordered map, optionally across processes. Output order never depends on ``jobs``."""
    if jobs <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=min(jobs, len(tasks))) as pool:
        return list(pool.map(fn, tasks))


def _children(seed: int | Sequence[int], count: int) -> list[np.random.SeedSequence]:
    return np.random.SeedSequence(seed).spawn(count)


# -- fixed-system / varied-region / growth ------------------------------------


def nonincreasing_compositions(n: int, r: int, max_part: int | None = None) -> Iterator[tuple[int, ...]]:
    """Ways to put n nodes into r unlabelled subsystems (parts may be zero), largest first."""
    if max_part is None:
        max_part = n
    if r == 0:
        if n == 0:
            yield ()
        return
    for first in range(min(n, max_part), -1, -1):
        if first * r < n:
            break
        for rest in nonincreasing_compositions(n - first, r - 1, first):
            yield (first, *rest)


def positive_compositions(n: int, r: int) -> Iterator[tuple[int, ...]]:
    """Ordered compositions of n into r positive parts, first part largest first."""
    if r == 1:
        if n >= 1:
            yield (n,)
        return
    for first in range(n - r + 1, 0, -1):
        for rest in positive_compositions(n - first, r - 1):
            yield (first, *rest)


def _region(size: int, p: int) -> RegionCounts:
    vis = min(p, size)
    return RegionCounts(size - vis, vis)


def fixed_system_sweep(n: int, r: int, p: int) -> Series:
    if r < 2:
        raise ValidationError("the fixed-system experiment needs r >= 2")
    splits = list(nonincreasing_compositions(n, r))
    points = []
    for i, split in enumerate(splits):
        sys = FlatSystem(tuple(_region(k, p) for k in split))
        points.append((float(i), float(system_psc(sys).total)))
    return Series(
        f"fixed-system n={n} r={r} p={p}",
        tuple(points),
        {"n": n, "r": r, "p": p, "context": "flat", "splits": splits},
    )


def _uniform_splits(n: int, p: int) -> Iterator[int]:
    for r in range(1, n + 1):
        if n % r == 0 and p <= n // r:
            yield r


def layered_min_for_layers(n: int, L: int, p: int) -> tuple[int, int] | None:
    """Lowest enumerated P.S.C. with L layers over uniform (r, r_L) splits, as (psc, r)."""
    best = None
    for r in _uniform_splits(n, p):
        if r % L:
            continue
        val = layered_psc_enumerated(layered_uniform_system(n, r, L, p))
        if best is None or val < best[0]:
            best = (val, r)
    return best


def hier_grown_psc(n: int, r: int, p: int, span: int = 2) -> int:
    return hier_psc_enumerated(grown_tree(r, even_split(n, r), p, span))


def varied_region_sweep(n: int, p: int, context: Context = "flat") -> Series:
    if n < 1:
        raise ValidationError("n must be >= 1")
    meta: dict[str, Any] = {"n": n, "p": p, "context": context}
    points: list[tuple[float, float]] = []
    if context == "flat":
        for r in _uniform_splits(n, p):
            points.append((float(r), uniform_psc(UniformSpec(n, r, p))))
    elif context == "layered":
        chosen = {}
        for L in range(1, n + 1):
            best = layered_min_for_layers(n, L, p)
            if best is not None:
                points.append((float(L), float(best[0])))
                chosen[L] = best[1]
        meta["subsystems"] = chosen
    elif context == "hier2d":
        for r in range(1, n // max(p, 1) + 1):
            points.append((float(r), float(hier_grown_psc(n, r, p))))
        meta["span"] = 2
    else:
        raise ValidationError(f"unknown context {context!r}")
    return Series(f"varied-region {context} n={n} p={p}", tuple(points), meta)


def min_psc(n: int, p: int, context: Context) -> float | None:
    """Lowest P.S.C. attainable by n nodes in a context; None when nothing is realizable."""
    if context == "unencapsulated":
        return float(psc_unencapsulated(n))
    if context == "flat":
        rs = range(1, int(n // p) + 1) if p > 0 else range(1, 2)
        vals = [uniform_psc(UniformSpec(n, r, p)) for r in rs]
        return min(vals) if vals else None
    if context == "layered":
        vals = []
        for r in _uniform_splits(n, p):
            for L in range(1, r + 1):
                if r % L == 0:
                    vals.append(layered_psc_enumerated(layered_uniform_system(n, r, L, p)))
        return float(min(vals)) if vals else None
    if context == "hier2d":
        vals = [hier_grown_psc(n, r, p) for r in _uniform_splits(n, p)]
        return float(min(vals)) if vals else None
    raise ValidationError(f"unknown context {context!r}")


def system_growth(n_max: int, p: int, context: Context) -> Series:
    if n_max < 1:
        raise ValidationError("n_max must be >= 1")
    points = []
    for n in range(1, n_max + 1):
        val = min_psc(n, p, context)
        if val is not None:
            points.append((float(n), val))
    return Series(f"growth {context} p={p}", tuple(points), {"p": p, "context": context})


def layered_split_sweep(subsystems: int = 12, layers: int = 3, region: RegionCounts = RegionCounts(1, 1)) -> Series:
    """Every way of stacking identical subsystems into non-empty layers (bottom first)."""
    splits = list(positive_compositions(subsystems, layers))
    points = []
    for i, split in enumerate(splits):
        points.append((float(i), float(layered_psc_enumerated(layered_from_split(split, region)))))
    return Series(
        f"layer splits {subsystems} over {layers}",
        tuple(points),
        {"subsystems": subsystems, "layers": layers, "region": region, "splits": splits},
    )


def span_of_control_study(n: int, p: int = 1, spans: Iterable[int] | None = None) -> dict[int, tuple[int, int]]:
    """Best full b-ary tree for each span b: ``{b: (psc, depth)}``. Nodes are split
    as evenly as possible, root first."""
    if spans is None:
        spans = range(2, max(n, 3))
    out: dict[int, tuple[int, int]] = {}
    for b in spans:
        best = None
        for k in full_tree_depths(b, n // max(p, 1)):
            r = full_tree_size(b, k)
            val = hier_psc_enumerated(full_tree(b, k, even_split(n, r), p))
            if best is None or val < best[0]:
                best = (val, k)
        if best is not None:
            out[b] = best
    return out


# -- random systems -------------------------------------------------------------


def random_composition(rng: np.random.Generator, n: int, r: int) -> list[int]:
    """Uniform over compositions of n into r positive parts (stars and bars)."""
    if r == 1:
        return [n]
    cuts = np.sort(rng.choice(n - 1, size=r - 1, replace=False) + 1)
    bounds = np.concatenate(([0], cuts, [n]))
    return [int(x) for x in np.diff(bounds)]


def random_flat_system(rng: np.random.Generator, n: int) -> FlatSystem:
    r = int(rng.integers(1, n + 1))
    sizes = random_composition(rng, n, r)
    regs = []
    for size in sizes:
        vis = int(rng.integers(1, size + 1))
        regs.append(RegionCounts(size - vis, vis))
    return FlatSystem(tuple(regs))


def _random_system_task(args: tuple[np.random.SeedSequence, int]) -> FlatSystem:
    ss, n = args
    return random_flat_system(np.random.default_rng(ss), n)


def random_systems(params: RandomSystemParams, jobs: int = 1) -> list[tuple[FlatSystem, MetricsReport]]:
    tasks = [(ss, params.n) for ss in _children(params.seed, params.system_count)]
    systems = _pmap(_random_system_task, tasks, jobs)
    return [(sys, configuration_efficiency(sys)) for sys in systems]


def _fast_efficiency(sizes: Sequence[int], pubs: Sequence[int]) -> float:
    n = sum(sizes)
    h = sum(pubs)
    s = sum(k * k for k in sizes) - n + n * h - sum(k * v for k, v in zip(sizes, pubs))
    return efficiency_from_values(n, s, h / len(sizes))


def _mean_efficiency_task(args: tuple[np.random.SeedSequence, int, int]) -> float:
    ss, n, samples = args
    total = 0.0
    for child in ss.spawn(samples):
        sys = random_flat_system(np.random.default_rng(child), n)
        regs = sys.regions
        total += _fast_efficiency([g.size for g in regs], [g.violating for g in regs])
    return total / samples


def average_efficiency_curve(n_values: Sequence[int], samples_per_n: int, seed: int, jobs: int = 1) -> Series:
    ns = sorted(set(int(n) for n in n_values))
    if any(n < 2 for n in ns):
        raise ValidationError("every n must be >= 2")
    tasks = [(ss, n, samples_per_n) for ss, n in zip(_children(seed, len(ns)), ns)]
    means = _pmap(_mean_efficiency_task, tasks, jobs)
    return Series(
        "average configuration efficiency",
        tuple((float(n), m) for n, m in zip(ns, means)),
        {"samples_per_n": samples_per_n, "seed": seed},
    )


def capped_system(n: int, cap: int, p: int) -> FlatSystem:
    if cap < 1:
        raise ValidationError("cap must be >= 1")
    sizes = [cap] * (n // cap) + ([n % cap] if n % cap else [])
    return FlatSystem(tuple(_region(k, p) for k in sizes))


def capped_growth_curve(n_max: int, cap: int, p: int = 1, n_min: int = 2, step: int = 1) -> Series:
    points = []
    for n in range(max(n_min, 2), n_max + 1, step):
        rep = configuration_efficiency(capped_system(n, cap, p))
        if rep.defined:
            points.append((float(n), rep.c_e))
    return Series(f"capped growth cap={cap} p={p}", tuple(points), {"cap": cap, "p": p})


# -- ad hoc evolution -------------------------------------------------------------


Visibility = Literal["coin", "ihv"]


def _pick_node(rng: np.random.Generator, sizes: list[int], pubs: list[int]) -> tuple[int, bool]:
    x = int(rng.integers(sum(sizes)))
    i = 0
    while x >= sizes[i]:
        x -= sizes[i]
        i += 1
    return i, x < pubs[i]


def evolve_step(rng: np.random.Generator, sizes: list[int], pubs: list[int], visibility: Visibility = "coin") -> str:
    """Apply one ad hoc update in place and return its kind.

    Updates keep the subsystem count fixed and every subsystem non-empty with at
    least one public unit; a drawn update that would break this is skipped.
    """
    r = len(sizes)
    op = int(rng.integers(3))
    if op == 0:
        i = int(rng.integers(r))
        n, h = sum(sizes), sum(pubs)
        chance = 0.5 if visibility == "coin" else h / n
        sizes[i] += 1
        if rng.random() < chance:
            pubs[i] += 1
        return "add"
    i, public = _pick_node(rng, sizes, pubs)
    if op == 1:
        if sizes[i] == 1 or (public and pubs[i] == 1):
            return "skip"
        sizes[i] -= 1
        if public:
            pubs[i] -= 1
        return "remove"
    if r < 2 or sizes[i] == 1 or (public and pubs[i] == 1):
        return "skip"
    j = int(rng.integers(r - 1))
    j = j if j < i else j + 1
    sizes[i] -= 1
    sizes[j] += 1
    if public:
        pubs[i] -= 1
        pubs[j] += 1
    return "move"


def _evolve_task(args: tuple[np.random.SeedSequence, FlatSystem, int, str]) -> tuple[float, ...]:
    ss, sys, steps, visibility = args
    rng = np.random.default_rng(ss)
    regs = sys.nonempty()
    sizes = [g.size for g in regs]
    pubs = [g.violating for g in regs]
    out = [_fast_efficiency(sizes, pubs)]
    for _ in range(steps):
        evolve_step(rng, sizes, pubs, visibility)  # type: ignore[arg-type]
        out.append(_fast_efficiency(sizes, pubs))
    return tuple(out)


def adhoc_evolution(
    initial: Sequence[FlatSystem], steps: int, seed: int, visibility: Visibility = "coin", jobs: int = 1
) -> list[Series]:
    """Configuration efficiency of each system after every ad hoc update (step 0 = start)."""
    for sys in initial:
        if sys.n == 0:
            raise ValidationError("initial systems must be non-empty")
        if any(g.violating == 0 for g in sys.nonempty()):
            raise ValidationError("every subsystem needs at least one public unit")
    tasks = [(ss, sys, steps, visibility) for ss, sys in zip(_children(seed, len(initial)), initial)]
    runs = _pmap(_evolve_task, tasks, jobs)
    return [
        Series(f"system {i}", tuple((float(t), y) for t, y in enumerate(ys)), {"seed": seed, "visibility": visibility})
        for i, ys in enumerate(runs)
    ]


# -- A.M.C. census ----------------------------------------------------------------


Reference = Literal["theory", "same_r"]


@dataclass(frozen=True)
class CensusResult:
    n: int
    r: int
    mode: str
    reference: str
    configurations: int
    comparable: int
    amc_count: int
    class_minima: Mapping[int, int]

    @property
    def amc_fraction(self) -> float:
        return self.amc_count / self.comparable if self.comparable else 0.0

    @property
    def min_gap_percent(self) -> float:
        """Largest relative shortfall of the lowest A.M.C. below its reference, over all
        violation classes; NaN when no A.M.C. was found."""
        gaps = [
            (ref - low) / ref * 100.0
            for p, low in self.class_minima.items()
            for ref in [_reference(self.n, self.r, p, self.reference)]
        ]
        return max(gaps) if gaps else float("nan")


def _reference(n: int, r: int, p: int, reference: str) -> float:
    if reference == "theory":
        return s_min(n, p)
    return uniform_psc(UniformSpec(n, r, p))


def census_configuration_count(n: int, r: int) -> int:
    """Configurations of n nodes in r ordered regions, each region with >= 1 public node."""
    return math.comb(n + r - 1, 2 * r - 1)


def _census_thresholds(n: int, r: int, reference: str) -> dict[int, float]:
    out = {}
    for p in range(1, n // r + 1):
        if reference == "same_r" and n % r:
            continue
        out[p] = _reference(n, r, p, reference)
    return out


def _exhaustive_census(n: int, r: int, reference: str) -> tuple[int, int, int, dict[int, int]]:
    thresholds = _census_thresholds(n, r, reference)
    uniform_size = n // r if n % r == 0 else None
    total = comparable = amc = 0
    minima: dict[int, int] = {}
    sizes = [0] * r
    pubs = [0] * r

    # psc = sum(k^2) - n + n*h - sum(k*h_i)
    def regions(i: int, left: int, sq: int, h: int, cross: int) -> None:
        nonlocal total, comparable, amc
        if i == r - 1:
            k = left
            for v in range(1, k + 1):
                sizes[i], pubs[i] = k, v
                total += 1
                hh = h + v
                if hh % r:
                    continue
                p = hh // r
                thr = thresholds.get(p)
                if thr is None:
                    continue
                comparable += 1
                if uniform_size is not None and all(s == uniform_size for s in sizes) and all(x == p for x in pubs):
                    continue
                s = sq + k * k - n + n * hh - cross - k * v
                if s < thr:
                    amc += 1
                    if s < minima.get(p, s + 1):
                        minima[p] = s
            return
        for k in range(1, left - (r - 1 - i) + 1):
            for v in range(1, k + 1):
                sizes[i], pubs[i] = k, v
                regions(i + 1, left - k, sq + k * k, h + v, cross + k * v)

    regions(0, n, 0, 0, 0)
    return total, comparable, amc, minima


def _sample_chunk(args: tuple[np.random.SeedSequence, int, int, int, str]) -> tuple[int, int, int, dict[int, int]]:
    ss, n, r, count, reference = args
    rng = np.random.default_rng(ss)
    m = n + r
    # a uniform (2r-1)-subset of the m-1 gaps gives a uniform composition of m into 2r parts
    keys = rng.random((count, m - 1))
    cuts = np.sort(np.argpartition(keys, 2 * r - 2, axis=1)[:, : 2 * r - 1], axis=1) + 1
    bounds = np.concatenate([np.zeros((count, 1), dtype=np.int64), cuts, np.full((count, 1), m)], axis=1)
    parts = np.diff(bounds, axis=1)
    pubs = parts[:, :r]
    sizes = pubs + parts[:, r:] - 1
    h = pubs.sum(axis=1)
    s = (sizes * sizes).sum(axis=1) - n + n * h - (sizes * pubs).sum(axis=1)

    thresholds = _census_thresholds(n, r, reference)
    thr = np.full(n + 1, -np.inf)
    for p, val in thresholds.items():
        thr[p] = val
    ok = (h % r == 0) & np.isfinite(thr[np.minimum(h // r, n)])
    p_arr = h // r
    uniform = (sizes == sizes[:, :1]).all(axis=1) & (pubs == pubs[:, :1]).all(axis=1)
    hit = ok & ~uniform & (s < thr[np.minimum(p_arr, n)])
    minima: dict[int, int] = {}
    for p in np.unique(p_arr[hit]):
        minima[int(p)] = int(s[hit & (p_arr == p)].min())
    return count, int(ok.sum()), int(hit.sum()), minima


def amc_census(
    n: int,
    r: int,
    mode: Literal["exhaustive", "sampled"] = "exhaustive",
    *,
    samples: int = 200_000,
    seed: int = 0,
    reference: Reference = "theory",
    jobs: int = 1,
    cap: int = 3_000_000,
    chunk: int = 50_000,
) -> CensusResult:
    """Share of A.M.C.s among configurations of n nodes over r regions.

    A configuration gives each region a size and a public count of at least one.
    It is comparable when its mean violation p = h/r is whole. With
    ``reference="theory"`` an A.M.C. is a non-uniform comparable configuration
    whose P.S.C. lies below n(2 sqrt(np) - 1 - p); with ``"same_r"`` the bar is
    the uniform system of the same r (which also requires r | n).

    Sampling draws configurations uniformly, via a composition of n + r into 2r
    positive parts (public counts, then private counts plus one).
    """
    if r < 1 or n < r:
        raise ValidationError("need 1 <= r <= n")
    if reference not in ("theory", "same_r"):
        raise ValidationError(f"unknown reference {reference!r}")
    if mode == "exhaustive":
        size = census_configuration_count(n, r)
        if size > cap:
            raise CapExceeded(f"{size} configurations exceed the exhaustive cap of {cap}; use sampling")
        total, comparable, amc, minima = _exhaustive_census(n, r, reference)
    elif mode == "sampled":
        counts = [chunk] * (samples // chunk) + ([samples % chunk] if samples % chunk else [])
        tasks = [(ss, n, r, c, reference) for ss, c in zip(_children(seed, len(counts)), counts)]
        total = comparable = amc = 0
        minima = {}
        for t, c, a, mins in _pmap(_sample_chunk, tasks, jobs):
            total += t
            comparable += c
            amc += a
            for p, v in mins.items():
                minima[p] = min(v, minima.get(p, v))
    else:
        raise ValidationError(f"unknown census mode {mode!r}")
    return CensusResult(n, r, mode, reference, total, comparable, amc, dict(sorted(minima.items())))

