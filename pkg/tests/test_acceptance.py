#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""End-to-end checks of the published figures the models must reproduce."""

from dataclasses import replace
import math

import numpy as np
import pytest

from src.atmosphere import HVProfile
from src.atmosphere import fried_r0
from src.constants import DefaultParams
from src.geometry import EllipticalOrbit
from src.geometry import heo_dwell_above_station
from src.geometry import min_altitude_for_double_link
from src.geometry import symmetric_double_link
from src.geometry import time_from_perigee
from src.oracle import run_validation_suite
from src.rates import ClassicalComms
from src.rates import HardwareParams
from src.rates import SchemeKind
from src.rates import decay_expectation
from src.rates import decay_expectation_direct
from src.rates import ndif_pmf
from src.rates import ndif_tail
from src.rates import qkd_time_required
from src.rates import repeater_rate_bounds
from src.rates import teleportation_rate
from src.scenarios import geo_teleport_headline
from src.scenarios import preset_scenarios
from src.scenarios import qkd_feasibility_grid
from src.scenarios import run_sweep


def test_geo_link_budget_near_40_db():
    assert 38.0 <= geo_teleport_headline().link_db <= 41.0


def test_headline_rate_and_times():
    report = geo_teleport_headline()
    assert 0.018 / 2 <= report.spdc_rate_per_s <= 0.018 * 2
    # published "about 16 hrs" at 0.018 /s; ours runs at the lower computed rate
    assert report.spdc_time_s == pytest.approx(1000.0 / report.spdc_rate_per_s)
    assert 12.0 <= report.spdc_time_s / 3600.0 <= 24.0
    for _, rate, seconds, gain in report.sps_variants:
        assert gain == pytest.approx(rate / report.spdc_rate_per_s)
        assert 10.0 - 1e-9 <= gain <= 15.0 + 1e-9
        assert 1.0 <= seconds / 3600.0 <= 2.0


def test_molniya_period():
    orbit = EllipticalOrbit(6.0e5, 4.0e7)
    assert orbit.eccentricity() == pytest.approx(0.74, abs=0.005)
    period_min = 2.0 * time_from_perigee(orbit, math.pi) / 60.0
    assert period_min == pytest.approx(718.0, rel=0.02)


def test_dual_downlink_min_altitude():
    alt = min_altitude_for_double_link(4.5e6, math.radians(45.0))
    assert alt == pytest.approx(4.2e6, rel=0.10)


def test_leo_horizon_transition():
    feasible = [symmetric_double_link(6.0e5, d, "chord")[1]
                for d in np.arange(4.0e6, 6.0e6, 1.0e4)]
    edge = 4.0e6 + 1.0e4 * feasible.index(False)
    assert edge == pytest.approx(5.0e6, rel=0.05)


def test_heo_dwell_over_seven_hours():
    dwell = heo_dwell_above_station(EllipticalOrbit(6.0e5, 4.0e7),
                                    math.radians(45.0))
    assert dwell >= 7.0 * 3600.0


def test_fried_parameter():
    profile = HVProfile()
    r0 = fried_r0(profile, 785e-9)
    assert r0 == pytest.approx(0.075, rel=0.40)
    assert fried_r0(profile, 785e-9, math.radians(60.0)) == pytest.approx(
        r0 * 2.0 ** (-0.6), rel=1e-9)
    assert fried_r0(profile, 1550e-9) == pytest.approx(
        r0 * (1550.0 / 785.0) ** 1.2, rel=1e-9)


@pytest.mark.parametrize("p", [0.9, 0.5, 0.1, 1e-3])
def test_stochastic_closed_forms(p):
    total = float(np.sum(ndif_pmf(p, np.arange(2000)))) + ndif_tail(p, 2000)
    assert total == pytest.approx(1.0, abs=1e-12)
    for ratio in (1e-4, 1e-2, 1.0):
        assert decay_expectation(p, ratio, 1.0) == pytest.approx(
            decay_expectation_direct(p, ratio, 1.0), rel=1e-10)


def test_monte_carlo_acceptance_run():
    report = run_validation_suite(seed=42, trials=1_000_000)
    frame = report.to_frame()
    assert report.passed, frame[~frame["passed"]]
    band = frame[frame["name"].str.contains("in band")]
    assert len(band) == 9


def test_qkd_feasibility_logic():
    hw = HardwareParams(rep_rate_hz=1e9)
    assert qkd_time_required(0.0, "wcp", hw) == 1e-4
    assert qkd_time_required(20.0, "wcp", hw) == pytest.approx(
        10.0 * qkd_time_required(20.0, "eps", hw))
    assert qkd_time_required(20.0, "eps", hw) == pytest.approx(
        100.0 * qkd_time_required(20.0, "eps", replace(hw, multiplex_factor=100)))
    grid = qkd_feasibility_grid()
    for (orbit, protocol), rows in grid.groupby(["orbit", "protocol"]):
        ok = rows.sort_values("total_db")["feasible"].tolist()
        # once infeasible, higher loss never becomes feasible again
        assert ok == sorted(ok, reverse=True)


def test_scheme_ratio_identity_across_sweep():
    rows = run_sweep(preset_scenarios()["leo-teleport-eps50"]).rows
    rows = rows[~rows["infeasible_horizon"] & (rows["rate_memoryless"] > 0)]
    hw = HardwareParams()
    memory = hw.eta_store * hw.eta_retrieve * hw.eta_qnd
    for _, row in rows.iterrows():
        wait = math.exp(-3.0 * row["ground_distance_m"] / 2.99792458e8 / hw.t1_s)
        assert row["rate_two_memory"] == pytest.approx(
            row["rate_memoryless"] * memory**2 * wait, rel=1e-9)


def test_source_efficiency_scales_rates_fiftyfold():
    presets = preset_scenarios()
    low = run_sweep(presets["geo-teleport-eps1"]).rows
    high = run_sweep(presets["geo-teleport-eps50"]).rows
    mask = low["rate_memoryless"] > 0
    ratio = high.loc[mask, "rate_memoryless"] / low.loc[mask, "rate_memoryless"]
    assert np.allclose(ratio, 50.0)


def test_limit_cases():
    hw = HardwareParams(eta_det=1.0, eta_sps=1.0, eta_store=1.0,
                        eta_retrieve=1.0, eta_qnd=1.0, t1_s=math.inf)
    p_ave = 1e-6
    rates = {s: teleportation_rate(s, hw, p_ave, ClassicalComms(1.0e6))
             for s in (SchemeKind.MEMORYLESS, SchemeKind.ONE_MEMORY_BOB,
                       SchemeKind.TWO_MEMORY)}
    # perfect memories that never decay change nothing
    assert rates[SchemeKind.ONE_MEMORY_BOB] == pytest.approx(
        rates[SchemeKind.MEMORYLESS])
    assert rates[SchemeKind.TWO_MEMORY] == pytest.approx(
        rates[SchemeKind.MEMORYLESS])
    bounds = repeater_rate_bounds(hw, 1.0)
    assert bounds.lower == pytest.approx(bounds.upper)
    assert decay_expectation(1.0, 1.0, 1.0) == 1.0
    default = teleportation_rate(SchemeKind.TWO_MEMORY, HardwareParams(), p_ave)
    colocated = teleportation_rate(SchemeKind.TWO_MEMORY, HardwareParams(),
                                   p_ave, ClassicalComms(0.0))
    assert default == colocated
    comms = ClassicalComms(1.0e6)
    far = teleportation_rate(SchemeKind.TWO_MEMORY, HardwareParams(), p_ave,
                             comms)
    assert far < colocated
    assert far / colocated == pytest.approx(
        math.exp(-3.0 * comms.dt0_s / HardwareParams().t1_s))
