#!/usr/bin/env python3
# -*- coding: utf-8 -*-

import math

from hypothesis import given
from hypothesis import strategies as st
import pytest

from src.atmosphere import AbsorptionTable
from src.atmosphere import HVProfile
from src.atmosphere import absorption_table
from src.atmosphere import cn2
from src.atmosphere import fried_r0
from src.atmosphere import mu0
from src.atmosphere import mu0_analytic
from src.atmosphere import scaled_r0
from src.atmosphere import slant_absorption_db
from src.constants import DefaultParams
from src.errors import ArgumentError
from src.errors import UnknownWavelength


def test_mu0_matches_closed_form():
    profile = HVProfile()
    assert mu0(profile) == pytest.approx(2.235e-12, rel=2e-3)
    assert mu0(profile) == pytest.approx(mu0_analytic(profile), rel=1e-5)


def test_mu0_from_raised_station():
    profile = HVProfile()
    assert mu0(profile, h0_m=2000.0) < mu0(profile)
    assert mu0(profile, 500.0, 500.0) == 0.0
    assert mu0(profile, 2000.0) == pytest.approx(
        mu0_analytic(profile, 2000.0), rel=1e-5)


def test_fried_r0_785():
    assert fried_r0(HVProfile(), 785e-9) == pytest.approx(0.0853, rel=5e-3)


def test_fried_r0_grows_with_wavelength():
    profile = HVProfile()
    ratio = fried_r0(profile, 1550e-9) / fried_r0(profile, 785e-9)
    assert ratio == pytest.approx((1550.0 / 785.0) ** 1.2, rel=1e-9)


def test_cn2_at_ground():
    assert cn2(HVProfile(), 0.0) == pytest.approx(1.727e-14, rel=1e-9)


def test_cn2_decreasing_near_ground():
    profile = HVProfile()
    assert cn2(profile, 0.0) > cn2(profile, 100.0) > cn2(profile, 1000.0)
    with pytest.raises(ArgumentError):
        cn2(profile, -1.0)


@given(zen=st.floats(0.0, math.radians(70.0)))
def test_slant_absorption_secant(zen):
    table = AbsorptionTable()
    db = slant_absorption_db(table, 785e-9, zen)
    assert db == pytest.approx(1.0 / math.cos(zen))
    assert db >= 1.0


def test_absorption_beyond_validity():
    table = AbsorptionTable()
    with pytest.raises(ArgumentError):
        slant_absorption_db(table, 785e-9, math.radians(80.0))
    clamped = slant_absorption_db(table, 785e-9, math.radians(80.0), clamp=True)
    assert clamped == pytest.approx(1.0 / math.cos(math.radians(70.0)))


def test_unknown_wavelength():
    with pytest.raises(UnknownWavelength):
        AbsorptionTable().vertical_db(810e-9)


def test_duplicate_wavelength_rejected():
    with pytest.raises(ArgumentError):
        AbsorptionTable(entries=((785e-9, 1.0), (785e-9, 2.0)))


def test_absorption_table_honours_override():
    table = absorption_table(DefaultParams(a_atm_vertical_db=3.0))
    assert table.vertical_db(785e-9) == 3.0
    assert table.vertical_db(1550e-9) == 0.5


def test_scaled_r0():
    assert scaled_r0(0.075, 0.0) == 0.075
    assert scaled_r0(0.075, math.radians(60.0)) == pytest.approx(
        0.075 * 0.5 ** 0.6)
    with pytest.raises(ArgumentError):
        scaled_r0(0.075, math.radians(75.0))
