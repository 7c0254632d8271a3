"""Figure reproduction as tables (header + rows), ready for CSV output.

``scale="small"`` trims sample counts and step counts so every figure runs in
seconds; ``scale="paper"`` uses the full workloads.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable

from . import experiments as ex
from .model import UniformSpec, ValidationError
from .psc import psc_unencapsulated, uniform_psc

Table = tuple[list[str], list[list[Any]]]


@dataclass(frozen=True)
class Workload:
    random_systems: int
    census_samples: int
    efficiency_samples: int
    evolution_steps: int
    capped_step: int


SCALES = {
    "small": Workload(random_systems=1000, census_samples=200_000, efficiency_samples=200, evolution_steps=1000, capped_step=10),
    "paper": Workload(random_systems=1000, census_samples=2_000_000, efficiency_samples=1000, evolution_steps=5000, capped_step=1),
}


def _series_rows(series: ex.Series) -> list[list[Any]]:
    return [[_num(x), y] for x, y in series.points]


def _num(x: float) -> Any:
    return int(x) if float(x).is_integer() else x


def _fig3(seed: int, w: Workload, jobs: int) -> Table:
    return ["nodes", "psc"], [[n, psc_unencapsulated(n)] for n in range(1, 101)]


def _fig15(seed: int, w: Workload, jobs: int) -> Table:
    return ["regions", "psc"], _series_rows(ex.varied_region_sweep(12, 1, "flat"))


def _fig17(seed: int, w: Workload, jobs: int) -> Table:
    return ["regions", "psc"], _series_rows(ex.varied_region_sweep(100, 1, "flat"))


def _fig18(seed: int, w: Workload, jobs: int) -> Table:
    rows = []
    for p in range(1, 5):
        for x, y in ex.varied_region_sweep(100, p, "flat").points:
            rows.append([p, _num(x), y])
    return ["violations", "regions", "psc"], rows


def _growth_table(contexts: list[ex.Context], n_max: int = 100) -> Table:
    cols = {c: ex.system_growth(n_max, 1, c).as_dict() for c in contexts}
    rows = []
    for n in range(1, n_max + 1):
        rows.append([n] + [cols[c].get(float(n), float("nan")) for c in contexts])
    return ["nodes", *contexts], rows


def _fig16(seed: int, w: Workload, jobs: int) -> Table:
    return _growth_table(["unencapsulated", "flat"])


def _fig29(seed: int, w: Workload, jobs: int) -> Table:
    return _growth_table(["unencapsulated", "flat", "layered"])


def _fig35(seed: int, w: Workload, jobs: int) -> Table:
    return _growth_table(["unencapsulated", "flat", "layered", "hier2d"])


def _fig19(seed: int, w: Workload, jobs: int) -> Table:
    systems = ex.random_systems(ex.RandomSystemParams(100, w.random_systems, seed), jobs=jobs)
    rows = []
    for i, (sys, rep) in enumerate(systems):
        rows.append([i, sys.r, sys.h, rep.s, uniform_psc(UniformSpec(100, sys.r, 1))])
    return ["system", "regions", "public", "psc", "uniform_p1"], rows


def _census_rows(seed: int, w: Workload, jobs: int) -> list[ex.CensusResult]:
    out = [ex.amc_census(100, 2, "exhaustive")]
    for r in (3, 4, 5):
        out.append(ex.amc_census(100, r, "sampled", samples=w.census_samples, seed=seed, jobs=jobs))
    return out


def _fig20(seed: int, w: Workload, jobs: int) -> Table:
    rows = [
        [c.r, c.mode, c.configurations, c.comparable, c.amc_count, c.amc_fraction * 100]
        for c in _census_rows(seed, w, jobs)
    ]
    return ["regions", "mode", "configurations", "comparable", "amc", "amc_percent"], rows


def _fig21(seed: int, w: Workload, jobs: int) -> Table:
    rows = [[c.r, c.mode, c.min_gap_percent] for c in _census_rows(seed, w, jobs)]
    return ["regions", "mode", "min_gap_percent"], rows


def _fig22(seed: int, w: Workload, jobs: int) -> Table:
    ns = [10, 20, 50, 100, 200, 500, 1000]
    series = ex.average_efficiency_curve(ns, w.efficiency_samples, seed, jobs=jobs)
    return ["nodes", "mean_c_e"], _series_rows(series)


def _fig23(seed: int, w: Workload, jobs: int) -> Table:
    starts = [sys for sys, _ in ex.random_systems(ex.RandomSystemParams(100, 10, seed))]
    runs = ex.adhoc_evolution(starts, w.evolution_steps, seed, jobs=jobs)
    rows = []
    for i, s in enumerate(runs):
        rows.extend([i, _num(x), y] for x, y in s.points)
    return ["system", "step", "c_e"], rows


def _fig24(seed: int, w: Workload, jobs: int) -> Table:
    return ["nodes", "c_e"], _series_rows(ex.capped_growth_curve(2000, 10, 1, step=w.capped_step))


def _fig27(seed: int, w: Workload, jobs: int) -> Table:
    s = ex.layered_split_sweep(12, 3)
    rows = [[i, *split, y] for i, (split, y) in enumerate(zip(s.metadata["splits"], s.ys))]
    return ["split", "bottom", "middle", "top", "psc"], rows


def _fig28(seed: int, w: Workload, jobs: int) -> Table:
    s = ex.varied_region_sweep(100, 1, "layered")
    rows = [[_num(x), s.metadata["subsystems"][int(x)], y] for x, y in s.points]
    return ["layers", "subsystems", "psc"], rows


def _fig34(seed: int, w: Workload, jobs: int) -> Table:
    return ["regions", "psc"], _series_rows(ex.varied_region_sweep(100, 1, "hier2d"))


FIGURES: dict[int, Callable[[int, Workload, int], Table]] = {
    3: _fig3, 15: _fig15, 16: _fig16, 17: _fig17, 18: _fig18, 19: _fig19, 20: _fig20,
    21: _fig21, 22: _fig22, 23: _fig23, 24: _fig24, 27: _fig27, 28: _fig28, 29: _fig29,
    34: _fig34, 35: _fig35,
}


def figure_table(fig: int, seed: int = 0, scale: str = "small", jobs: int = 1) -> Table:
    if fig not in FIGURES:
        raise ValidationError(f"unknown figure {fig}; choose from {sorted(FIGURES)}")
    if scale not in SCALES:
        raise ValidationError(f"unknown scale {scale!r}")
    return FIGURES[fig](seed, SCALES[scale], jobs)
