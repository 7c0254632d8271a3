"""System-level metrics: configuration efficiency, I.H.V. and A.M.C. detection."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .model import FlatSystem, UniformSpec, ValidationError
from .psc import psc_unencapsulated, r_min, s_min, system_psc, uniform_psc


@dataclass(frozen=True)
class MetricsReport:
    n: int
    r: int
    h: int
    p_bar: float
    s: int
    s_max: int
    s_min: float
    s_min_p1: float
    c_i_raw: float
    c_i: float
    c_e: float
    ihv_percent: float
    r_min: float
    defined: bool = True

    def as_row(self) -> dict[str, object]:
        return {
            "nodes": self.n,
            "regions": self.r,
            "public": self.h,
            "psc": self.s,
            "s_min": self.s_min,
            "s_max": self.s_max,
            "c_e": self.c_e,
            "ihv_percent": self.ihv_percent,
            "r_min": self.r_min,
        }


@dataclass(frozen=True)
class AmcVerdict:
    comparable: bool
    is_amc: bool
    psc: int
    uniform_psc_same_r: float
    s_min_theory: float
    below_theory: bool


def ihv_percent(n: int, h: int) -> float:
    """Share of nodes that are visible outside their region, in percent."""
    if n < 1:
        raise ValidationError("n must be >= 1")
    if not 0 <= h <= n:
        raise ValidationError(f"h={h} must lie in [0, n={n}]")
    return 100.0 * h / n


def inefficiency(s: float, smin: float, smax: float) -> float:
    """Unclamped (s - s_min)/(s_max - s_min). A zero-width band means s == s_max."""
    width = smax - smin
    if width <= 0:
        return 1.0
    return (s - smin) / width


def efficiency_from_values(n: int, s: float, p_bar: float) -> float:
    """c_e for a system of n nodes with P.S.C. ``s`` and mean violation ``p_bar``."""
    raw = inefficiency(s, s_min(n, p_bar), psc_unencapsulated(n))
    return 1.0 - min(1.0, max(0.0, raw))


_NAN = float("nan")


def configuration_efficiency(sys: FlatSystem) -> MetricsReport:
    """Full metrics for a flat system.

    s_min is taken at the system's own mean violation h/r; the p=1 bound is
    carried alongside as ``s_min_p1``. Systems with fewer than two nodes, or
    without any public node, come back with ``defined=False``.
    """
    n, r, h = sys.n, sys.r, sys.h
    s = system_psc(sys).total
    s_max = psc_unencapsulated(n)
    ihv = ihv_percent(n, h) if n else _NAN
    if n < 2 or h == 0:
        return MetricsReport(
            n=n, r=r, h=h, p_bar=h / r if r else _NAN, s=s, s_max=s_max,
            s_min=_NAN, s_min_p1=s_min(n, 1) if n else _NAN,
            c_i_raw=_NAN, c_i=_NAN, c_e=_NAN, ihv_percent=ihv, r_min=_NAN, defined=False,
        )
    p_bar = h / r
    smin = s_min(n, p_bar)
    raw = inefficiency(s, smin, s_max)
    c_i = min(1.0, max(0.0, raw))
    return MetricsReport(
        n=n, r=r, h=h, p_bar=p_bar, s=s, s_max=s_max, s_min=smin, s_min_p1=s_min(n, 1),
        c_i_raw=raw, c_i=c_i, c_e=1.0 - c_i, ihv_percent=ihv, r_min=r_min(n, p_bar),
    )


def amc_check(sys: FlatSystem) -> AmcVerdict:
    """Is this a non-uniform system whose P.S.C. undercuts its uniform equivalent?

    The equivalent keeps n, r and the per-region violation h/r, so it exists only
    when r divides both n and h. ``below_theory`` compares against the
    unconstrained-r minimum instead.
    """
    n, r, h = sys.n, sys.r, sys.h
    s = system_psc(sys).total
    if r == 0 or h == 0:
        return AmcVerdict(False, False, s, _NAN, _NAN, False)
    theory = s_min(n, h / r)
    below = s < theory
    if n % r or h % r or h // r > n // r:
        return AmcVerdict(False, False, s, _NAN, theory, below)
    same_r = uniform_psc(UniformSpec(n, r, h // r))
    is_amc = (not sys.is_uniform()) and s < same_r
    return AmcVerdict(True, is_amc, s, same_r, theory, below)


def is_defined(x: float) -> bool:
    return not math.isnan(x)
