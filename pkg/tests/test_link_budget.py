#!/usr/bin/env python3
# -*- coding: utf-8 -*-

import math
import warnings

from hypothesis import given
from hypothesis import strategies as st
import pytest

from src.atmosphere import AbsorptionTable
from src.constants import DefaultParams
from src.errors import ArgumentError
from src.errors import FarFieldViolation
from src.errors import Unachievable
from src.geometry import LinkGeometry
from src.geometry import single_link
from src.link_budget import FixedSide
from src.link_budget import LinkKind
from src.link_budget import OpticalChain
from src.link_budget import attenuation_db
from src.link_budget import double_link_probability
from src.link_budget import link_probability_db
from src.link_budget import resolve_pointing_loss
from src.link_budget import solve_min_aperture
from src.link_budget import transmission_probability

ZENITH = 0.5 * math.pi


def test_geo_headline_budget(geo_chain, table_810):
    budget = attenuation_db(LinkKind.DOWNLINK, geo_chain, 810e-9,
                            single_link(3.6e7, ZENITH), math.inf, table_810)
    assert budget.geometric_db == pytest.approx(29.2957, abs=1e-3)
    assert budget.optics_db == pytest.approx(2.9073, abs=1e-3)
    assert budget.atmosphere_db == pytest.approx(1.0)
    assert budget.additional_db == 6.0
    assert budget.total_db == pytest.approx(39.203, abs=1e-3)
    assert budget.far_field_ok
    assert not budget.clamped


def test_total_is_sum_of_parts(geo_chain, table_810):
    budget = attenuation_db(LinkKind.DOWNLINK, geo_chain, 810e-9,
                            single_link(3.6e7, math.radians(40.0)), math.inf,
                            table_810)
    parts = (budget.geometric_db + budget.optics_db + budget.atmosphere_db
             + budget.additional_db)
    assert budget.total_db == pytest.approx(parts)


@given(h=st.floats(1e5, 4e7))
def test_loss_increases_with_range(h):
    chain = OpticalChain(0.25, 1.0)
    g1 = LinkGeometry(h, 0.0, ZENITH)
    g2 = LinkGeometry(2.0 * h, 0.0, ZENITH)
    args = (LinkKind.INTERSATELLITE, chain, 785e-9)
    a1 = attenuation_db(*args, g1, math.inf, None).total_db
    a2 = attenuation_db(*args, g2, math.inf, None).total_db
    assert a2 > a1 or math.isclose(a1, a2)


def test_intersatellite_has_no_atmosphere():
    chain = OpticalChain(0.25, 0.25)
    budget = attenuation_db(LinkKind.INTERSATELLITE, chain, 785e-9,
                            LinkGeometry(3.54e7, 0.0, ZENITH), math.inf, None)
    assert budget.atmosphere_db == 0.0
    assert resolve_pointing_loss(LinkKind.INTERSATELLITE, chain) == 0.3


def test_uplink_turbulence_adds_loss():
    chain = OpticalChain(1.0, 0.25)
    geometry = single_link(6.0e5, ZENITH)
    table = AbsorptionTable()
    calm = attenuation_db(LinkKind.DOWNLINK, chain, 785e-9, geometry,
                          math.inf, table)
    rough = attenuation_db(LinkKind.UPLINK, chain, 785e-9, geometry, 0.075,
                           table)
    assert rough.geometric_db > calm.geometric_db


def test_geometric_clamp_flag(caplog):
    chain = OpticalChain(2.0, 2.0)
    with warnings.catch_warnings(), caplog.at_level(
            "WARNING", logger="src.link_budget"):
        warnings.simplefilter("ignore", FarFieldViolation)
        budget = attenuation_db(LinkKind.INTERSATELLITE, chain, 785e-9,
                                LinkGeometry(1000.0, 0.0, ZENITH), math.inf,
                                None)
    assert budget.geometric_db == 0.0
    assert budget.clamp_flags == ("geometric",)
    assert budget.clamped
    assert "geometric loss clamped" in caplog.text


def test_far_field_warning():
    chain = OpticalChain(0.5, 0.5)
    with pytest.warns(FarFieldViolation):
        budget = attenuation_db(LinkKind.INTERSATELLITE, chain, 785e-9,
                                LinkGeometry(1.0e5, 0.0, ZENITH), math.inf,
                                None)
    assert not budget.far_field_ok


def test_absorption_clamp_flag(caplog):
    chain = OpticalChain(0.25, 1.0)
    geometry = single_link(6.0e5, math.radians(10.0))
    table = AbsorptionTable()
    with pytest.raises(ArgumentError):
        attenuation_db(LinkKind.DOWNLINK, chain, 785e-9, geometry, math.inf,
                       table)
    with caplog.at_level("WARNING", logger="src.link_budget"):
        budget = attenuation_db(LinkKind.DOWNLINK, chain, 785e-9, geometry,
                                math.inf, table, clamp=True)
    assert "absorption" in budget.clamp_flags
    assert "beyond the absorption bound" in caplog.text


def test_probabilities():
    assert link_probability_db(0.0) == 1.0
    assert link_probability_db(30.0) == pytest.approx(1e-3)
    assert double_link_probability(39.203) == pytest.approx(1.443e-8, rel=1e-3)
    with pytest.raises(ArgumentError):
        link_probability_db(-1.0)


def test_transmission_probability(geo_chain, table_810):
    budget = attenuation_db(LinkKind.DOWNLINK, geo_chain, 810e-9,
                            single_link(3.6e7, ZENITH), math.inf, table_810)
    single = transmission_probability(budget)
    assert transmission_probability(budget, double=True) == pytest.approx(
        single**2)


def test_pointing_loss_defaults():
    chain = OpticalChain(0.25, 1.0)
    params = DefaultParams(pointing_loss=0.1)
    assert resolve_pointing_loss(LinkKind.DOWNLINK, chain, params) == 0.1
    assert resolve_pointing_loss(
        LinkKind.DOWNLINK, OpticalChain(0.25, 1.0, pointing_loss=0.0)) == 0.0


def test_chain_validation():
    with pytest.raises(ArgumentError):
        OpticalChain(0.0, 1.0)
    with pytest.raises(ArgumentError):
        OpticalChain(0.25, 1.0, trans_tx=1.2)
    with pytest.raises(ArgumentError):
        OpticalChain(0.25, 1.0, pointing_loss=1.0)


def test_solve_min_aperture_meets_target():
    geometry = single_link(6.0e5, ZENITH)
    table = AbsorptionTable()
    free = solve_min_aperture(LinkKind.DOWNLINK, FixedSide.TX_FIXED, 0.25,
                              40.0, 785e-9, geometry, math.inf, table)
    assert free == pytest.approx(0.0589, rel=1e-2)
    budget = attenuation_db(LinkKind.DOWNLINK, OpticalChain(0.25, free),
                            785e-9, geometry, math.inf, table)
    assert budget.total_db == pytest.approx(40.0, abs=1e-3)


def test_solve_min_aperture_1550():
    geometry = single_link(6.0e5, ZENITH)
    free = solve_min_aperture(LinkKind.DOWNLINK, "tx", 0.25, 40.0, 1550e-9,
                              geometry, math.inf, AbsorptionTable())
    assert free == pytest.approx(0.1099, rel=1e-2)


def test_solve_min_aperture_unachievable():
    with pytest.raises(Unachievable):
        solve_min_aperture(LinkKind.DOWNLINK, FixedSide.TX_FIXED, 0.25, 40.0,
                           785e-9, single_link(3.6e7, ZENITH), math.inf,
                           AbsorptionTable())


def test_solve_min_aperture_lower_bound_already_enough():
    free = solve_min_aperture(LinkKind.INTERSATELLITE, FixedSide.TX_FIXED,
                              0.25, 80.0, 785e-9,
                              LinkGeometry(1.0e6, 0.0, ZENITH), math.inf, None)
    assert free == 0.01


# Monotonicity and identities of the attenuation equation
GEO_RANGE = LinkGeometry(3.54e7, 0.0, ZENITH)


def _isl_db(**chain):
    base = dict(tx_aperture_m=0.25, rx_aperture_m=0.5, pointing_loss=0.3)
    base.update(chain)
    return attenuation_db(LinkKind.INTERSATELLITE, OpticalChain(**base),
                          785e-9, GEO_RANGE, math.inf, None).total_db


@given(a=st.floats(0.05, 2.0), b=st.floats(0.05, 2.0))
def test_loss_nonincreasing_in_receiver_aperture(a, b):
    small, large = sorted((a, b))
    assert _isl_db(rx_aperture_m=large) <= _isl_db(rx_aperture_m=small) + 1e-9


@given(a=st.floats(0.05, 1.0), b=st.floats(0.05, 1.0))
def test_loss_nonincreasing_in_transmittance(a, b):
    low, high = sorted((a, b))
    assert _isl_db(trans_tx=high) <= _isl_db(trans_tx=low) + 1e-9
    assert _isl_db(trans_rx=high) <= _isl_db(trans_rx=low) + 1e-9


@given(a=st.floats(0.0, 0.95), b=st.floats(0.0, 0.95))
def test_loss_nondecreasing_in_pointing_loss(a, b):
    low, high = sorted((a, b))
    assert _isl_db(pointing_loss=high) >= _isl_db(pointing_loss=low) - 1e-9


@given(a=st.floats(0.0, 30.0), b=st.floats(0.0, 30.0))
def test_loss_nondecreasing_in_additional_loss(a, b):
    low, high = sorted((a, b))
    assert _isl_db(additional_loss_db=high) >= _isl_db(
        additional_loss_db=low) - 1e-9


@pytest.mark.parametrize("rx", [0.1, 0.5, 1.0, 2.0])
def test_halving_receiver_adds_6_db(rx):
    assert _isl_db(rx_aperture_m=0.5 * rx) - _isl_db(rx_aperture_m=rx) == (
        pytest.approx(6.0206, abs=1e-4))


@pytest.mark.parametrize("elevation_deg", [90.0, 60.0, 30.0])
def test_uplink_without_turbulence_equals_downlink(elevation_deg):
    chain = OpticalChain(1.0, 0.25)
    geometry = single_link(6.0e5, math.radians(elevation_deg))
    table = AbsorptionTable()
    up = attenuation_db(LinkKind.UPLINK, chain, 785e-9, geometry, math.inf,
                        table)
    down = attenuation_db(LinkKind.DOWNLINK, chain, 785e-9, geometry,
                          math.inf, table)
    assert up.as_dict() == down.as_dict()


@given(zenith=st.floats(0.0, math.radians(70.0)))
def test_downlink_minus_intersatellite_is_slant_absorption(zenith):
    chain = OpticalChain(0.25, 1.0, pointing_loss=0.2)
    geometry = LinkGeometry(1.0e6, zenith, ZENITH - zenith)
    table = AbsorptionTable()
    down = attenuation_db(LinkKind.DOWNLINK, chain, 785e-9, geometry,
                          math.inf, table).total_db
    isl = attenuation_db(LinkKind.INTERSATELLITE, chain, 785e-9, geometry,
                         math.inf, table).total_db
    vertical = table.vertical_db(785e-9)
    assert down - isl == pytest.approx(vertical / math.cos(zenith), rel=1e-9)
