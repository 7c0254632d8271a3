from __future__ import annotations

import math

import pytest
from hypothesis import given, strategies as st

from encap.metrics import (
    amc_check,
    configuration_efficiency,
    efficiency_from_values,
    ihv_percent,
    inefficiency,
    is_defined,
)
from encap.model import FlatSystem, RegionCounts, ValidationError, flat_from_counts, uniform_system
from encap.psc import psc_unencapsulated

anomalous = flat_from_counts([(33, 12), (5, 50)])


def test_known_configuration_is_anomalous():
    v = amc_check(anomalous)
    assert v.psc == 7860
    assert v.comparable and v.is_amc
    assert v.uniform_psc_same_r == 8000
    assert v.s_min_theory == pytest.approx(7935.5287, abs=1e-4)
    assert v.below_theory


def test_uniform_systems_are_never_anomalous():
    v = amc_check(uniform_system(100, 2, 31))
    assert v.comparable and not v.is_amc


def test_incomparable_configuration():
    v = amc_check(flat_from_counts([(2, 1), (1, 2)]))  # h = 3 over r = 2
    assert not v.comparable and not v.is_amc


regions = st.builds(lambda hidden, vis: RegionCounts(hidden, vis), st.integers(0, 8), st.integers(1, 8))


@given(st.lists(regions, min_size=1, max_size=8))
def test_efficiency_is_a_fraction(regs):
    rep = configuration_efficiency(FlatSystem(tuple(regs)))
    if rep.n < 2:
        assert not rep.defined
        return
    assert 0.0 <= rep.c_e <= 1.0
    assert rep.c_e == pytest.approx(1 - rep.c_i)
    assert rep.s <= rep.s_max


def test_single_region_scores_zero():
    rep = configuration_efficiency(flat_from_counts([(40, 2)]))
    assert rep.s == rep.s_max
    assert rep.c_e == 0


def test_optimal_uniform_system_scores_one():
    rep = configuration_efficiency(uniform_system(100, 10, 1))
    assert rep.s == rep.s_min == 1800
    assert rep.c_e == 1


def test_zero_width_band_scores_zero():
    # every node public in one-node regions: s_min equals s_max
    rep = configuration_efficiency(uniform_system(5, 5, 1))
    assert rep.s == psc_unencapsulated(5)
    assert rep.c_e == 0


def test_undefined_cases():
    empty = configuration_efficiency(FlatSystem())
    assert not empty.defined and math.isnan(empty.c_e)
    hidden = configuration_efficiency(flat_from_counts([(3, 0), (2, 0)]))
    assert not hidden.defined and not is_defined(hidden.c_e)


def test_ihv():
    assert ihv_percent(4, 2) == 50
    assert ihv_percent(240, 60) == 25
    with pytest.raises(ValidationError):
        ihv_percent(0, 0)
    with pytest.raises(ValidationError):
        ihv_percent(4, 5)


def test_inefficiency_unclamped():
    assert inefficiency(5, 10, 20) == -0.5
    assert inefficiency(7, 7, 7) == 1.0


def test_high_efficiency_sample_row():
    # 240 nodes, P.S.C. 19042, 25% public; with a mean of 3.5 public per package
    assert efficiency_from_values(240, 19042, 3.5) == pytest.approx(0.86, abs=0.01)


SAMPLE_SYSTEMS = [
    (135, 16956, 0.09, 93), (240, 19042, 0.86, 25), (283, 61633, 0.37, 72), (316, 99540, 0.0, 100),
    (366, 133590, 0.0, 100), (384, 132298, 0.12, 89), (468, 194991, 0.13, 89), (4244, 17619836, 0.02, 98),
    (39114, 933916300, 0.4, 61),
]


@pytest.mark.parametrize("n, s, ce, ihv", SAMPLE_SYSTEMS)
def test_sample_system_arithmetic_is_consistent(n, s, ce, ihv):
    # some whole number of public nodes reproduces the rounded percentage
    assert any(round(ihv_percent(n, h)) == ihv for h in range(n + 1))
    assert s <= psc_unencapsulated(n)
    if ihv == 100:
        # everything public: no hiding at all, so the maximum is reached
        assert s == psc_unencapsulated(n) and ce == 0
