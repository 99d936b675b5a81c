#!/usr/bin/env python3
# -*- coding: utf-8 -*-

import math

from hypothesis import given, settings
from hypothesis import strategies as st
import numpy as np
import pytest

from src.errors import ArgumentError
from src.geometry import CircularOrbit
from src.geometry import EllipticalOrbit
from src.geometry import central_angle_from_elevation
from src.geometry import elevation_from_central_angle
from src.geometry import ground_distance
from src.geometry import half_central_angle
from src.geometry import heo_dwell_above_station
from src.geometry import intersatellite_pass_duration
from src.geometry import intersatellite_range
from src.geometry import max_double_link_distance
from src.geometry import max_zenith_between_orbits
from src.geometry import min_altitude_for_double_link
from src.geometry import orbital_period
from src.geometry import orbital_velocity
from src.geometry import pass_duration_circular
from src.geometry import single_link
from src.geometry import slant_range
from src.geometry import symmetric_double_link
from src.geometry import time_from_perigee

LEO = CircularOrbit(6.0e5)
MEO = CircularOrbit(2.0e7)
GEO = CircularOrbit(3.6e7)
MOLNIYA = EllipticalOrbit(6.0e5, 4.0e7)


def test_zenith_slant_range_equals_altitude():
    assert slant_range(6.0e5, 0.5 * math.pi) == 6.0e5
    assert slant_range(3.6e7, 0.5 * math.pi) == 3.6e7


@given(alt=st.floats(1e4, 4e7), el=st.floats(0.0, 0.5 * math.pi))
def test_slant_range_bounded_by_altitude_and_horizon(alt, el):
    h = slant_range(alt, el)
    r = 6.371e6
    horizon = math.sqrt((r + alt) ** 2 - r**2)
    assert h >= alt * (1 - 1e-12)
    assert h <= horizon * (1 + 1e-12)


def test_slant_range_rejects_negative_elevation():
    with pytest.raises(ArgumentError):
        slant_range(6.0e5, -0.1)


@settings(max_examples=50)
@given(alt=st.floats(2e4, 4e7), el=st.floats(0.0, 0.5 * math.pi))
def test_central_angle_inverts_elevation(alt, el):
    alpha = central_angle_from_elevation(alt, el)
    assert elevation_from_central_angle(alt, alpha) == pytest.approx(el, abs=1e-9)


def test_double_link_zero_distance_is_zenith():
    geometry, feasible = symmetric_double_link(6.0e5, 0.0)
    assert feasible
    assert geometry.slant_range_m == pytest.approx(6.0e5)
    assert geometry.zenith_angle_rad == pytest.approx(0.0, abs=1e-12)


def test_double_link_below_horizon():
    geometry, feasible = symmetric_double_link(6.0e5, 6.0e6)
    assert not feasible
    assert geometry is None


def test_leo_double_link_limit():
    arc = max_double_link_distance(6.0e5)
    chord = max_double_link_distance(6.0e5, distance_kind="chord")
    assert arc == pytest.approx(5.328e6, rel=1e-3)
    assert chord == pytest.approx(5.175e6, rel=1e-3)
    # the quoted 5,000 km limit is a straight-line figure
    assert chord == pytest.approx(5.0e6, rel=0.05)


def test_double_link_horizon_edge_is_feasible():
    arc = max_double_link_distance(6.0e5)
    _, feasible = symmetric_double_link(6.0e5, arc * (1 - 1e-9))
    assert feasible
    _, feasible = symmetric_double_link(6.0e5, arc * (1 + 1e-6))
    assert not feasible


def test_chord_longer_than_diameter_rejected():
    with pytest.raises(ArgumentError):
        symmetric_double_link(6.0e5, 2.0e7, distance_kind="chord")


def test_unknown_distance_kind():
    with pytest.raises(ArgumentError):
        symmetric_double_link(6.0e5, 1.0e6, distance_kind="great-circle")


def test_min_altitude_for_4500_km_at_45_deg():
    alt = min_altitude_for_double_link(4.5e6, math.radians(45.0))
    assert alt == pytest.approx(4.384e6, rel=2e-3)
    geometry, feasible = symmetric_double_link(alt, 4.5e6)
    assert feasible
    assert math.degrees(geometry.elevation_rad) == pytest.approx(45.0, abs=1e-6)


def test_min_altitude_impossible_bound():
    with pytest.raises(ArgumentError):
        min_altitude_for_double_link(2.0e7, math.radians(60.0))


def test_leo_velocity_and_pass():
    assert orbital_velocity(LEO) == pytest.approx(7561.7, rel=1e-3)
    assert pass_duration_circular(LEO, math.radians(45.0)) == pytest.approx(
        152.5, rel=5e-3)


def test_pass_duration_grows_with_bound():
    short = pass_duration_circular(MEO, math.radians(30.0))
    long = pass_duration_circular(MEO, math.radians(60.0))
    assert 0 < short < long


def test_molniya_shape():
    assert MOLNIYA.eccentricity() == pytest.approx(0.73863, rel=1e-4)
    assert orbital_period(MOLNIYA) / 60.0 == pytest.approx(722.5, rel=1e-3)


def test_time_from_perigee_half_period_at_apogee():
    half = time_from_perigee(MOLNIYA, math.pi)
    assert half == pytest.approx(0.5 * orbital_period(MOLNIYA), rel=1e-12)


def test_time_from_perigee_monotonic():
    phi = np.linspace(0.0, 2.0 * math.pi, 50)
    t = time_from_perigee(MOLNIYA, phi)
    assert np.all(np.diff(t) > 0)


def test_heo_dwell():
    dwell = heo_dwell_above_station(MOLNIYA, math.radians(45.0))
    assert dwell / 3600.0 == pytest.approx(8.2, rel=0.02)
    assert heo_dwell_above_station(MOLNIYA, 0.0) == 0.0


def test_tangent_bound_between_orbits():
    bound = max_zenith_between_orbits(LEO, GEO)
    assert math.cos(bound) == pytest.approx(6.971e6 / 4.2371e7)
    with pytest.raises(ArgumentError):
        max_zenith_between_orbits(GEO, LEO)


def test_intersatellite_range_radial():
    assert intersatellite_range(LEO, GEO, 0.0) == pytest.approx(3.54e7)


def test_heo_leo_window_is_half_leo_period():
    window = intersatellite_pass_duration(LEO, MOLNIYA, math.radians(45.0))
    assert window == pytest.approx(2896.0, rel=2e-3)


def test_circular_pair_window_positive():
    assert intersatellite_pass_duration(LEO, GEO, math.radians(45.0)) > 0
    with pytest.raises(ArgumentError):
        intersatellite_pass_duration(LEO, LEO, math.radians(45.0))


def test_single_link_geometry_fields():
    g = single_link(2.0e7, math.radians(30.0))
    assert g.zenith_angle_rad == pytest.approx(math.radians(60.0))
    assert g.ground_central_angle_rad > 0


def test_orbit_validation():
    with pytest.raises(ArgumentError):
        CircularOrbit(0.0)
    with pytest.raises(ArgumentError):
        EllipticalOrbit(4e7, 6e5)


@settings(max_examples=50)
@given(a=st.floats(2e4, 4e7), b=st.floats(2e4, 4e7),
       bound=st.floats(0.1, 1.4))
def test_pass_duration_increases_with_altitude(a, b, bound):
    low, high = sorted((a, b))
    if high - low < 1.0:
        return
    assert pass_duration_circular(CircularOrbit(high), bound) > (
        pass_duration_circular(CircularOrbit(low), bound))


def test_heo_dwell_increases_with_apogee():
    dwell = [heo_dwell_above_station(EllipticalOrbit(6.0e5, apogee),
                                     math.radians(45.0))
             for apogee in (2.0e7, 3.0e7, 4.0e7, 5.0e7)]
    assert all(b > a for a, b in zip(dwell, dwell[1:]))


def test_tangent_bound_shrinks_as_lower_orbit_rises():
    bounds = [max_zenith_between_orbits(CircularOrbit(alt), GEO)
              for alt in (3.0e5, 6.0e5, 2.0e6, 2.0e7)]
    assert all(b < a for a, b in zip(bounds, bounds[1:]))


@settings(max_examples=50)
@given(d=st.floats(1e5, 1.2e7), kind=st.sampled_from(["arc", "chord"]))
def test_min_altitude_at_horizon_inverts_max_distance(d, kind):
    alt = min_altitude_for_double_link(d, 0.0, distance_kind=kind)
    assert max_double_link_distance(alt, 0.0, distance_kind=kind) == (
        pytest.approx(d, rel=1e-9))


@given(d=st.floats(0.0, 1.2e7), kind=st.sampled_from(["arc", "chord"]))
def test_ground_distance_inverts_half_angle(d, kind):
    alpha = half_central_angle(d, kind)
    assert ground_distance(2.0 * alpha, kind) == pytest.approx(d, abs=1e-6)


def test_chord_midpoint_split_longer_than_half_chord():
    d = 4.0e6
    half = ground_distance(half_central_angle(d, "chord"), "chord")
    assert half > 0.5 * d
    assert ground_distance(half_central_angle(d, "arc"), "arc") == (
        pytest.approx(0.5 * d))
