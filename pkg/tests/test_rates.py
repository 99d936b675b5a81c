#!/usr/bin/env python3
# -*- coding: utf-8 -*-

from dataclasses import replace
import math

from hypothesis import given
from hypothesis import strategies as st
import numpy as np
import pytest

from src.constants import DefaultParams
from src.errors import ArgumentError
from src.errors import DegenerateRate
from src.errors import InfeasibleRate
from src.errors import SchemeMismatch
from src.rates import ClassicalComms
from src.rates import HardwareParams
from src.rates import Protocol
from src.rates import SchemeKind
from src.rates import bsm_probability
from src.rates import decay_expectation
from src.rates import decay_expectation_direct
from src.rates import expected_order_statistics
from src.rates import hardware_defaults
from src.rates import ndif_pmf
from src.rates import ndif_tail
from src.rates import pass_window_verdict
from src.rates import qkd_time_required
from src.rates import repeater_rate_bounds
from src.rates import repeater_teleportation_rate
from src.rates import swap_probability
from src.rates import teleportation_rate
from src.rates import time_for_events

P_AVE_GEO = 1.443e-8
probabilities = st.floats(1e-3, 1.0)


def spdc(eta=0.05):
    return HardwareParams(rep_rate_hz=1e9, eta_eps=eta, eta_sps=eta)


def test_memoryless_geo_headline():
    rate = teleportation_rate(SchemeKind.MEMORYLESS, spdc(), P_AVE_GEO)
    assert rate == pytest.approx(0.01461, rel=2e-3)
    hours = time_for_events(rate, 1000) / 3600.0
    assert hours == pytest.approx(19.0, rel=0.02)


@pytest.mark.parametrize("eta_sps,gain", [(0.75, 15.0), (0.5, 10.0)])
def test_single_photon_source_gain(eta_sps, gain):
    base = teleportation_rate(SchemeKind.MEMORYLESS, spdc(), P_AVE_GEO)
    better = teleportation_rate(SchemeKind.MEMORYLESS,
                                replace(spdc(), eta_sps=eta_sps), P_AVE_GEO)
    assert better / base == pytest.approx(gain)


def test_bsm_probability():
    hw = HardwareParams()
    assert bsm_probability(hw) == pytest.approx(0.30375)
    assert bsm_probability(hw, halved=True) == pytest.approx(0.151875)


def test_scheme_ordering_colocated(hw):
    rates = {s: teleportation_rate(s, hw, 1e-6) for s in SchemeKind
             if s is not SchemeKind.TWO_LINK_REPEATER}
    assert rates[SchemeKind.MEMORYLESS] > rates[SchemeKind.ONE_MEMORY_BOB]
    assert rates[SchemeKind.ONE_MEMORY_BOB] > rates[SchemeKind.TWO_MEMORY]
    assert rates[SchemeKind.ONE_MEMORY_BOB] == pytest.approx(
        2.0 * rates[SchemeKind.ONE_MEMORY_ALICE])


def test_memory_waiting_decays_with_distance(hw):
    near = teleportation_rate(SchemeKind.TWO_MEMORY, hw, 1e-6)
    far = teleportation_rate(SchemeKind.TWO_MEMORY, hw, 1e-6,
                             ClassicalComms(3.0e6))
    # three light-time waits of 10 ms against a 100 ms memory
    assert far / near == pytest.approx(math.exp(-0.3), rel=1e-3)


def test_multiplexing_scales_rate():
    one = teleportation_rate(SchemeKind.MEMORYLESS, HardwareParams(), 1e-6)
    ten = teleportation_rate(SchemeKind.MEMORYLESS,
                             HardwareParams(multiplex_factor=10), 1e-6)
    assert ten == pytest.approx(10.0 * one)


def test_zero_p_ave_gives_zero_rate(hw):
    assert teleportation_rate(SchemeKind.MEMORYLESS, hw, 0.0) == 0.0


def test_repeater_not_a_single_satellite_scheme(hw):
    with pytest.raises(SchemeMismatch):
        teleportation_rate(SchemeKind.TWO_LINK_REPEATER, hw, 1e-6)


@given(p=probabilities)
def test_ndif_pmf_normalised(p):
    n = np.arange(400)
    total = float(np.sum(ndif_pmf(p, n))) + ndif_tail(p, 400)
    assert total == pytest.approx(1.0, abs=1e-12)


def test_ndif_pmf_values():
    assert ndif_pmf(0.5, 0) == pytest.approx(1.0 / 3.0)
    assert ndif_pmf(0.5, 1) == pytest.approx(1.0 / 3.0)
    assert ndif_pmf(1.0, 0) == 1.0
    assert ndif_pmf(1.0, 3) == 0.0
    with pytest.raises(ArgumentError):
        ndif_pmf(0.0, 1)
    with pytest.raises(ArgumentError):
        ndif_pmf(0.5, -1)


@given(p=probabilities, ratio=st.sampled_from([1e-4, 1e-2, 1.0]))
def test_decay_closed_form_matches_sum(p, ratio):
    closed = decay_expectation(p, ratio, 1.0)
    direct = decay_expectation_direct(p, ratio, 1.0)
    assert closed == pytest.approx(direct, rel=1e-10)


def test_decay_expectation_limits():
    assert decay_expectation(1.0, 1.0, 1.0) == 1.0
    assert decay_expectation(0.3, 0.0, 1.0) == 1.0
    assert decay_expectation(0.3, 1.0, math.inf) == 1.0
    assert 0.0 < decay_expectation(0.3, 1e-2, 1.0) < 1.0


def test_decay_expectation_small_p_precision():
    p, ratio = 1e-9, 1e-12
    x = 2.0 * ratio
    q = math.exp(-x)
    expected = p / (2 - p) + 2 * p * (1 - p) * q / ((2 - p) * (p + x - p * x))
    assert decay_expectation(p, ratio, 1.0) == pytest.approx(expected, rel=1e-6)


def test_swap_prefactor(hw):
    assert swap_probability(hw, 1.0) == pytest.approx(0.033215, rel=1e-4)
    assert swap_probability(hw, 0.5, n_dif=0) == pytest.approx(0.033215,
                                                               rel=1e-4)
    fixed = swap_probability(hw, 0.5, n_dif=1)
    assert fixed == pytest.approx(0.033215 * math.exp(-2e-8), rel=1e-4)


@given(p=probabilities)
def test_order_statistics(p):
    n_min, n_max = expected_order_statistics(p)
    assert n_min <= 1.0 / p <= n_max
    assert n_min + n_max == pytest.approx(2.0 / p)


@given(p=st.floats(1e-6, 1.0))
def test_repeater_band_ordered(p):
    bounds = repeater_rate_bounds(HardwareParams(), p)
    assert bounds.lower <= bounds.midpoint <= bounds.upper
    assert bounds.time_lower_s <= bounds.time_upper_s


def test_repeater_zero_probability():
    with pytest.raises(DegenerateRate):
        repeater_rate_bounds(HardwareParams(), 0.0)


def test_repeater_station_distance_applied_once(hw):
    comms = ClassicalComms(1.0e6)
    near = repeater_teleportation_rate(hw, 1e-3)
    far = repeater_teleportation_rate(hw, 1e-3, comms)
    # two exp(-dt0/T1) waits and one exp(-dt1/T1) wait, dt0 = dt1 = L0/c
    assert far / near == pytest.approx(math.exp(-3.0 * comms.dt0_s / hw.t1_s))
    assert repeater_rate_bounds(hw, 1e-3).midpoint * hw.eta_retrieve**2 * (
        bsm_probability(hw)) * hw.multiplex_factor == pytest.approx(near)


def test_repeater_rate_which(hw):
    lo = repeater_teleportation_rate(hw, 1e-3, which="lower")
    hi = repeater_teleportation_rate(hw, 1e-3, which="upper")
    mid = repeater_teleportation_rate(hw, 1e-3)
    assert lo <= mid <= hi
    with pytest.raises(ArgumentError):
        repeater_teleportation_rate(hw, 1e-3, which="best")


def test_repeater_beats_direct_at_high_loss():
    hw = HardwareParams(eta_eps=0.5)
    p_half = 1e-4
    direct = teleportation_rate(SchemeKind.MEMORYLESS, hw, p_half**2)
    repeater = repeater_teleportation_rate(hw, p_half * hw.eta_eps)
    assert repeater > direct


def test_time_for_events():
    assert time_for_events(2.0, 1000) == 500.0
    assert time_for_events(0.0, 0) == 0.0
    with pytest.raises(InfeasibleRate):
        time_for_events(0.0, 10)
    with pytest.raises(ArgumentError):
        time_for_events(-1.0, 10)


def test_qkd_zero_db_wcp():
    hw = HardwareParams(rep_rate_hz=1e9)
    assert qkd_time_required(0.0, "wcp", hw) == pytest.approx(1e-4)
    assert qkd_time_required(0.0, Protocol.EPS_OR_SPS, hw) == pytest.approx(1e-5)


def test_qkd_time_scales_with_loss():
    hw = HardwareParams()
    assert qkd_time_required(30.0, "eps", hw) == pytest.approx(
        1000.0 * qkd_time_required(0.0, "eps", hw))
    assert qkd_time_required(30.0, "eps", replace(hw, multiplex_factor=10)) \
        == pytest.approx(100.0 * qkd_time_required(0.0, "eps", hw))


def test_protocol_labels():
    assert Protocol.from_label("DecoyWCP") is Protocol.DECOY_WCP
    assert Protocol.from_label("sps") is Protocol.EPS_OR_SPS
    assert Protocol.DECOY_WCP.required_detections == 100_000
    with pytest.raises(ArgumentError):
        Protocol.from_label("bb84")


def test_pass_window_verdict():
    assert pass_window_verdict("LEO", 120.0)
    assert not pass_window_verdict("leo", 120.1)
    assert pass_window_verdict("MEO", 1199.0)
    assert pass_window_verdict("GEO", 3600.0)
    with pytest.raises(ArgumentError):
        pass_window_verdict("LUNAR", 1.0)


def test_hardware_from_table():
    hw = hardware_defaults(DefaultParams(t1_s=1.0), eta_eps=0.01)
    assert hw.t1_s == 1.0
    assert hw.eta_eps == 0.01
    assert hw.t0_s == pytest.approx(1e-9)
    assert hw.eta_store * hw.eta_retrieve == pytest.approx(0.5)


@pytest.mark.parametrize("kwargs", [
    {"eta_det": 0.0},
    {"rep_rate_hz": math.inf},
    {"t1_s": 0.0},
    {"multiplex_factor": 0},
    {"multiplex_factor": 1.5},
])
def test_hardware_validation(kwargs):
    with pytest.raises(ArgumentError):
        HardwareParams(**kwargs)
