#!/usr/bin/env python3
# -*- coding: utf-8 -*-
#
# tables.py
#
###############################################################################
# DEPENDENCIES
###############################################################################
from dataclasses import replace
import logging
import math
import warnings

import numpy as np
import pandas as pd
from scipy.integrate import trapezoid
from scipy.optimize import brentq

from src.atmosphere import absorption_table
from src.atmosphere import scaled_r0
from src.constants import DefaultParams
from src.constants import EARTH
from src.constants import PLATFORM_APERTURES_M
from src.constants import QKD_PASS_WINDOWS_S
from src.errors import FarFieldViolation, Unachievable
from src.geometry import EllipticalOrbit
from src.geometry import LinkGeometry
from src.geometry import central_angle_from_zenith
from src.geometry import heo_dwell_above_station
from src.geometry import intersatellite_pass_duration
from src.geometry import intersatellite_range
from src.geometry import max_zenith_between_orbits
from src.geometry import orbit_radius
from src.geometry import orbital_velocity
from src.geometry import pass_duration_circular
from src.geometry import single_link
from src.geometry import station_zenith_angle
from src.geometry import time_from_perigee
from src.link_budget import FixedSide
from src.link_budget import LinkKind
from src.link_budget import OpticalChain
from src.link_budget import attenuation_db
from src.link_budget import solve_min_aperture
from src.rates import HardwareParams
from src.rates import Protocol
from src.rates import pass_window_verdict
from src.rates import qkd_time_required
from src.scenarios.scenario import platform_orbit


###############################################################################
# DOCUMENTATION
###############################################################################
__doc__ = """
Tables over the platform classes: QKD feasibility, static aperture sizing
and the dynamic pass model.

**Assumptions**

-   Static links have the satellite in the zenith of the station (or the
    two satellites aligned radially).
-   Dynamic passes run from -45 to +45 deg zenith, or up to the tangent
    bound between two orbits when that is smaller. The HEO satellite of a
    LEO-HEO link is held at apogee while the LEO satellite moves a quarter
    revolution either way.
-   A HAP is stationary; its link duration is unlimited and its mean loss
    is averaged over zenith angle instead of time.

**Logic**

Every table is a :class:`pandas.DataFrame` with one row per cell. Losses
along a pass are sampled on an even grid of the pass variable and averaged
over time with the trapezoid rule.
"""
__all__ = [
    "INTERSATELLITE_PAIRS",
    "dynamic_link_table",
    "qkd_feasibility_grid",
    "static_aperture_table",
]

logger = logging.getLogger(__name__)


###############################################################################
# GLOBALS
###############################################################################
STATIC_TARGETS_DB = {
    LinkKind.DOWNLINK: 40.0,
    LinkKind.UPLINK: 50.0,
    LinkKind.INTERSATELLITE: 40.0,
}
'''dict : Static attenuation target per link kind.'''

SPACE_APERTURE_CAP_M = 0.25
'''float : Largest aperture the static table allows in space.'''

GROUND_APERTURE_CAP_M = 2.0
'''float : Largest aperture the static table allows on the ground.'''

MIN_APERTURE_M = 0.01
'''float : Smallest aperture the solver considers.'''

INTERSATELLITE_PAIRS = (
    ('LEO', 'MEO'),
    ('LEO', 'GEO'),
    ('MEO', 'GEO'),
    ('LEO', 'HEO'),
)
'''tuple : (lower, higher) platform pairs of the intersatellite rows.'''

PASS_ZENITH_RAD = math.radians(45.0)
'''float : Half-width of a dynamic pass.'''

DEFAULT_QKD_DB = tuple(float(db) for db in range(0, 85, 5))
'''tuple : Loss grid of the QKD feasibility table, dB.'''


###############################################################################
# FUNCTIONS
###############################################################################
def qkd_feasibility_grid(orbits=('LEO', 'MEO', 'GEO', 'HEO', 'HAP'),
                         protocols=tuple(Protocol), db_range=DEFAULT_QKD_DB,
                         hw=None):
    """Time to a QKD key against link loss, with the pass-window verdict.

    Parameters
    ----------
    orbits : iterable of str
        Platform classes with a pass window.
    protocols : iterable of Protocol or str
    db_range : iterable of float
        End-to-end losses in dB.
    hw : HardwareParams, optional
        Repetition rate and multiplexing; table defaults when omitted.

    Returns
    -------
    pandas.DataFrame
        Columns ``orbit, protocol, total_db, time_s, window_s, feasible``.
    """
    hw = hw or HardwareParams()
    rows = []
    for orbit in orbits:
        key = str(orbit).upper()
        for protocol in protocols:
            protocol = Protocol.from_label(protocol)
            for db in db_range:
                seconds = qkd_time_required(db, protocol, hw)
                feasible = pass_window_verdict(key, seconds)
                rows.append({
                    'orbit': key,
                    'protocol': protocol.value,
                    'total_db': float(db),
                    'time_s': seconds,
                    'window_s': QKD_PASS_WINDOWS_S[key],
                    'feasible': feasible,
                })
    logger.info("QKD grid: %d rows", len(rows))
    return pd.DataFrame(rows)


def _solve_cell(kind, geometry, wavelength_m, params, r0_m, table, fixed_side,
                fixed_m, upper_m, target_db):
    template = OpticalChain.from_defaults(params, MIN_APERTURE_M, MIN_APERTURE_M)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", FarFieldViolation)
        try:
            return solve_min_aperture(
                kind, fixed_side, fixed_m, target_db, wavelength_m, geometry,
                r0_m, table, bounds=(MIN_APERTURE_M, upper_m), chain=template,
            )
        except Unachievable as e:
            logger.debug("%s", e)
            return math.nan


def static_aperture_table(orbits=('HAP', 'LEO', 'MEO', 'GEO', 'HEO'),
                          kinds=(LinkKind.UPLINK, LinkKind.DOWNLINK,
                                 LinkKind.INTERSATELLITE),
                          wavelengths=(785e-9, 1550e-9), params=None,
                          space_cap_m=SPACE_APERTURE_CAP_M,
                          ground_cap_m=GROUND_APERTURE_CAP_M,
                          targets=STATIC_TARGETS_DB):
    """Smallest apertures meeting the static attenuation targets.

    The space-side aperture is fixed at ``space_cap_m`` and the other side
    is solved within ``[0.01 m, cap]``. Ground links look straight up at
    the platform (HEO at apogee); intersatellite cells use the radial
    separation of :data:`INTERSATELLITE_PAIRS`.

    Returns
    -------
    pandas.DataFrame
        Columns ``link, kind, wavelength_nm, target_db, fixed_side,
        fixed_aperture_m, free_aperture_m, feasible, atmosphere_db``.
        Infeasible cells have a NaN free aperture.
    """
    params = params or DefaultParams()
    rows = []
    for wavelength_m in wavelengths:
        table = absorption_table(replace(
            params, wavelength_m=wavelength_m,
            a_atm_vertical_db=_vertical_db(wavelength_m, params),
        ))
        for kind in kinds:
            kind = LinkKind(kind)
            for lower, higher, geometry in _static_links(kind, orbits, params):
                if kind is LinkKind.UPLINK:
                    side, upper = FixedSide.RX_FIXED, ground_cap_m
                    r0 = params.fried_r0_m
                elif kind is LinkKind.DOWNLINK:
                    side, upper = FixedSide.TX_FIXED, ground_cap_m
                    r0 = math.inf
                else:
                    side, upper = FixedSide.TX_FIXED, space_cap_m
                    r0 = math.inf
                free = _solve_cell(kind, geometry, wavelength_m, params, r0,
                                   table, side, space_cap_m, upper,
                                   targets[kind])
                atm = 0.0
                if kind is not LinkKind.INTERSATELLITE:
                    atm = table.vertical_db(wavelength_m)
                rows.append({
                    'link': lower if higher is None else f"{lower}-{higher}",
                    'kind': kind.value,
                    'wavelength_nm': round(wavelength_m * 1e9, 3),
                    'target_db': targets[kind],
                    'fixed_side': side.value,
                    'fixed_aperture_m': space_cap_m,
                    'free_aperture_m': free,
                    'feasible': not math.isnan(free),
                    'atmosphere_db': atm,
                })
    logger.info("Static aperture table: %d cells", len(rows))
    return pd.DataFrame(rows)


def _vertical_db(wavelength_m, params):
    if math.isclose(wavelength_m, params.wavelength_m, rel_tol=1e-9):
        return params.a_atm_vertical_db
    return absorption_table(params).vertical_db(wavelength_m)


def _static_links(kind, orbits, params):
    if kind is LinkKind.INTERSATELLITE:
        for lower, higher in INTERSATELLITE_PAIRS:
            r_low = _apogee_radius(platform_orbit(lower, params))
            r_high = _apogee_radius(platform_orbit(higher, params))
            geometry = LinkGeometry(r_high - r_low, 0.0, 0.5 * math.pi)
            yield lower, higher, geometry
        return
    for label in orbits:
        orbit = platform_orbit(label, params)
        altitude = _apogee_radius(orbit) - EARTH.earth_radius_m
        yield label, None, single_link(altitude, 0.5 * math.pi)


def _apogee_radius(orbit):
    if isinstance(orbit, EllipticalOrbit):
        return orbit.apogee_radius_m()
    return orbit.radius_m()


def _losses(kind, chain, wavelength_m, geometries, params, table):
    out = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", FarFieldViolation)
        for g in geometries:
            r0 = math.inf
            if kind is LinkKind.UPLINK:
                r0 = scaled_r0(params.fried_r0_m, g.zenith_angle_rad)
            out.append(attenuation_db(kind, chain, wavelength_m, g, r0, table,
                                      params=params))
    return out


def _pass_row(link, kind, bound_rad, duration_s, times, budgets):
    losses = np.array([b.total_db for b in budgets])
    if np.ptp(times) > 0:
        mean = trapezoid(losses, times) / (times[-1] - times[0])
    else:
        mean = float(losses.mean())
    return {
        'link': link,
        'kind': kind.value,
        'bound_deg': math.degrees(bound_rad),
        'duration_s': duration_s,
        'zenith_loss_db': float(losses[0]),
        'endpoint_loss_db': float(losses[-1]),
        'mean_loss_db': float(mean),
        'far_field_ok': all(b.far_field_ok for b in budgets),
    }


def _ground_pass(label, kind, params, table, samples):
    orbit = platform_orbit(label, params)
    space = PLATFORM_APERTURES_M[label]
    ground = PLATFORM_APERTURES_M['GROUND']
    apertures = (ground, space) if kind is LinkKind.UPLINK else (space, ground)
    chain = OpticalChain.from_defaults(params, *apertures)
    r = EARTH.earth_radius_m

    if isinstance(orbit, EllipticalOrbit):
        duration = heo_dwell_above_station(orbit, PASS_ZENITH_RAD)
        phi_exit = brentq(
            lambda f: float(station_zenith_angle(orbit, f)) - PASS_ZENITH_RAD,
            math.pi, 2.0 * math.pi, xtol=1e-12,
        )
        phi = np.linspace(math.pi, phi_exit, samples)
        radius = orbit_radius(orbit, phi)
        zenith = np.clip(station_zenith_angle(orbit, phi), 0.0, PASS_ZENITH_RAD)
        sep = phi - math.pi
        slant = np.sqrt(radius**2 + r**2 - 2.0 * radius * r * np.cos(sep))
        geometries = [
            LinkGeometry(float(s), float(z), 0.5 * math.pi - float(z), float(a))
            for s, z, a in zip(slant, zenith, sep)
        ]
        times = time_from_perigee(orbit, phi) - time_from_perigee(orbit, math.pi)
    else:
        zenith = np.linspace(0.0, PASS_ZENITH_RAD, samples)
        geometries = [single_link(orbit.altitude_m, 0.5 * math.pi - z)
                      for z in zenith]
        if label == 'HAP':
            duration = math.inf
            times = zenith
        else:
            duration = pass_duration_circular(orbit, PASS_ZENITH_RAD)
            alpha = central_angle_from_zenith(orbit.altitude_m, zenith)
            times = alpha * orbit.radius_m() / orbital_velocity(orbit)

    budgets = _losses(kind, chain, params.wavelength_m, geometries, params, table)
    return _pass_row(label, kind, PASS_ZENITH_RAD, duration,
                     np.asarray(times, dtype=float), budgets)


def _intersatellite_pass(lower_label, higher_label, params, samples):
    lower = platform_orbit(lower_label, params)
    higher = platform_orbit(higher_label, params)
    chain = OpticalChain.from_defaults(
        params, PLATFORM_APERTURES_M[lower_label],
        PLATFORM_APERTURES_M[higher_label],
    )
    duration = intersatellite_pass_duration(lower, higher, PASS_ZENITH_RAD)
    if isinstance(higher, EllipticalOrbit):
        bound = 0.5 * math.pi
    else:
        bound = min(PASS_ZENITH_RAD, max_zenith_between_orbits(lower, higher))
    sep = np.linspace(0.0, bound, samples)
    ranges = intersatellite_range(lower, higher, sep)
    geometries = [LinkGeometry(float(d), 0.0, 0.5 * math.pi) for d in ranges]
    budgets = _losses(LinkKind.INTERSATELLITE, chain, params.wavelength_m,
                      geometries, params, None)
    # separation grows linearly in time
    return _pass_row(f"{lower_label}-{higher_label}", LinkKind.INTERSATELLITE,
                     bound, duration, sep, budgets)


def dynamic_link_table(wavelength_m=785e-9, samples=61, params=None):
    """Link duration and loss of every platform pass.

    Parameters
    ----------
    wavelength_m : float
        785 or 1550 nm.
    samples : int
        Points per half pass.
    params : DefaultParams, optional

    Returns
    -------
    pandas.DataFrame
        Columns ``link, kind, bound_deg, duration_s, zenith_loss_db,
        endpoint_loss_db, mean_loss_db, far_field_ok``. The endpoint is the
        loss at the pass bound; the mean is time-averaged over the pass.
    """
    if samples < 2:
        raise ValueError("samples must be at least 2")
    params = params or DefaultParams()
    params = replace(params, wavelength_m=wavelength_m,
                     a_atm_vertical_db=_vertical_db(wavelength_m, params))
    table = absorption_table(params)

    rows = []
    for kind in (LinkKind.UPLINK, LinkKind.DOWNLINK):
        for label in ('HAP', 'LEO', 'MEO', 'GEO', 'HEO'):
            rows.append(_ground_pass(label, kind, params, table, samples))
    for lower, higher in INTERSATELLITE_PAIRS:
        rows.append(_intersatellite_pass(lower, higher, params, samples))
    logger.info("Dynamic link table: %d rows at %.0f nm", len(rows),
                wavelength_m * 1e9)
    return pd.DataFrame(rows)
