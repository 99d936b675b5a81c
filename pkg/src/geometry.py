#!/usr/bin/env python3
# -*- coding: utf-8 -*-
#
# geometry.py
#
###############################################################################
# DEPENDENCIES
###############################################################################
from dataclasses import dataclass
import logging
import math

import numpy as np
from scipy.optimize import brentq

from src.constants import EARTH
from src.errors import ArgumentError


###############################################################################
# DOCUMENTATION
###############################################################################
__doc__ = """
Orbit and station geometry on a spherical, non-rotating Earth.

**Assumptions**

-   Spherical Earth of radius R, no Earth rotation, all orbits coplanar with
    the ground stations and orbiting in the same direction.
-   A ground pass is centred on the station zenith. The HEO dwell assumes
    the apogee lies directly above the station.
-   Elevation ε and zenith angle ζ are measured at the station, ε = π/2 − ζ.
    The ground central angle α is the angle at the Earth's centre between
    the station and the sub-satellite point.

**Logic**

The station/satellite/Earth-centre triangle gives all the relations:

-   slant range ``L = sqrt((R+H)^2 - R^2 cos^2 ε) - R sin ε``
-   elevation ``ε = atan2((R+H) cos α - R, (R+H) sin α)``
-   central angle ``α = acos(R cos ε / (R+H)) - ε``

Pass durations divide the swept central angle by the orbital angular rate
(circular orbits) or difference Kepler times (elliptical orbits).
The eccentric anomaly is computed with a two-argument arctangent so that it
is continuous and increasing on [0, 2π]; half and full periods come out
exactly.
"""
__all__ = [
    "CircularOrbit",
    "EllipticalOrbit",
    "LinkGeometry",
    "central_angle_from_elevation",
    "central_angle_from_zenith",
    "elevation_from_central_angle",
    "ground_distance",
    "half_central_angle",
    "heo_dwell_above_station",
    "intersatellite_pass_duration",
    "intersatellite_range",
    "max_double_link_distance",
    "max_zenith_between_orbits",
    "min_altitude_for_double_link",
    "orbit_radius",
    "orbital_period",
    "orbital_velocity",
    "pass_duration_circular",
    "single_link",
    "slant_range",
    "station_zenith_angle",
    "symmetric_double_link",
    "time_from_perigee",
]

logger = logging.getLogger(__name__)


###############################################################################
# CLASSES
###############################################################################
@dataclass(frozen=True)
class CircularOrbit:
    """A circular orbit given by its altitude above the mean surface."""
    altitude_m: float

    def __post_init__(self):
        if not self.altitude_m > 0:
            raise ArgumentError(
                f"altitude_m must be positive, got {self.altitude_m}"
            )

    def radius_m(self, constants=EARTH):
        return constants.earth_radius_m + self.altitude_m


@dataclass(frozen=True)
class EllipticalOrbit:
    """An elliptical orbit given by its perigee and apogee altitudes."""
    perigee_alt_m: float
    apogee_alt_m: float

    def __post_init__(self):
        if not self.perigee_alt_m > 0:
            raise ArgumentError("perigee_alt_m must be positive")
        if self.apogee_alt_m < self.perigee_alt_m:
            raise ArgumentError("apogee_alt_m must not be below perigee_alt_m")

    def perigee_radius_m(self, constants=EARTH):
        return constants.earth_radius_m + self.perigee_alt_m

    def apogee_radius_m(self, constants=EARTH):
        return constants.earth_radius_m + self.apogee_alt_m

    def semi_major_m(self, constants=EARTH):
        return 0.5 * (
            self.perigee_radius_m(constants) + self.apogee_radius_m(constants)
        )

    def eccentricity(self, constants=EARTH):
        r_p = self.perigee_radius_m(constants)
        r_a = self.apogee_radius_m(constants)
        return (r_a - r_p) / (r_a + r_p)


@dataclass(frozen=True)
class LinkGeometry:
    """Geometry of one station-to-satellite link.

    Attributes
    ----------
    slant_range_m : float
        Line-of-sight distance, the H of the attenuation equation.
    zenith_angle_rad : float
        Zenith angle at the station, in [0, π/2].
    elevation_rad : float
        Elevation at the station, π/2 minus the zenith angle.
    ground_central_angle_rad : float
        Earth-centre angle between station and sub-satellite point.
    """
    slant_range_m: float
    zenith_angle_rad: float
    elevation_rad: float
    ground_central_angle_rad: float = 0.0

    def __post_init__(self):
        if not self.slant_range_m > 0:
            raise ArgumentError("slant_range_m must be positive")
        if not 0.0 <= self.zenith_angle_rad <= 0.5 * math.pi + 1e-12:
            raise ArgumentError(
                "zenith_angle_rad must lie in [0, pi/2], got "
                f"{self.zenith_angle_rad}"
            )


###############################################################################
# FUNCTIONS
###############################################################################
def _radius(orbit, constants):
    # Intersatellite links against an elliptical orbit use its apogee.
    if isinstance(orbit, EllipticalOrbit):
        return orbit.apogee_radius_m(constants)
    return orbit.radius_m(constants)


def orbital_velocity(orbit, constants=EARTH):
    """Circular orbital speed ``sqrt(mu / (R + H0))`` in m/s."""
    return math.sqrt(constants.earth_mu_m3s2 / orbit.radius_m(constants))


def orbital_period(orbit, constants=EARTH):
    """Orbital period in seconds of a circular or elliptical orbit."""
    if isinstance(orbit, EllipticalOrbit):
        a = orbit.semi_major_m(constants)
    else:
        a = orbit.radius_m(constants)
    return 2.0 * math.pi * math.sqrt(a**3 / constants.earth_mu_m3s2)


def slant_range(altitude_m, elevation_rad, constants=EARTH):
    """Station-to-satellite distance at a given elevation.

    Parameters
    ----------
    altitude_m : float or array_like
        Satellite altitude H0.
    elevation_rad : float or array_like
        Elevation in [0, π/2].

    Returns
    -------
    float or numpy.ndarray
        Slant range in m; exactly ``altitude_m`` at the zenith.

    Notes
    -----
    Evaluated as ``H(2R+H) / (sqrt((R+H)^2 - R^2 cos^2 ε) + R sin ε)``,
    which is algebraically the textbook form but keeps full precision for
    low platforms.
    """
    h = np.asarray(altitude_m, dtype=float)
    el = np.asarray(elevation_rad, dtype=float)
    if np.any(el < 0) or np.any(el > 0.5 * np.pi):
        raise ArgumentError("elevation_rad must lie in [0, pi/2]")
    r = constants.earth_radius_m
    root = np.sqrt((r + h) ** 2 - (r * np.cos(el)) ** 2)
    rng = h * (2.0 * r + h) / (root + r * np.sin(el))
    rng = np.where(el == 0.5 * np.pi, h, rng)
    return rng[()] if rng.ndim == 0 else rng


def elevation_from_central_angle(altitude_m, alpha_rad, constants=EARTH):
    """Elevation of a satellite seen from a station ``alpha`` away.

    Negative values mean the satellite is below the local horizon; the
    caller decides what that means for feasibility.
    """
    if np.any(np.asarray(alpha_rad) < 0):
        raise ArgumentError("alpha_rad must be nonnegative")
    rs = constants.earth_radius_m + np.asarray(altitude_m, dtype=float)
    el = np.arctan2(
        rs * np.cos(alpha_rad) - constants.earth_radius_m,
        rs * np.sin(alpha_rad),
    )
    return el[()] if np.ndim(el) == 0 else el


def central_angle_from_elevation(altitude_m, elevation_rad, constants=EARTH):
    """Inverse of :func:`elevation_from_central_angle` on [0, π/2]."""
    r = constants.earth_radius_m
    rs = r + np.asarray(altitude_m, dtype=float)
    alpha = np.arccos(r * np.cos(elevation_rad) / rs) - elevation_rad
    return alpha[()] if np.ndim(alpha) == 0 else alpha


def central_angle_from_zenith(altitude_m, zenith_rad, constants=EARTH):
    """Central angle at which a satellite is seen at ``zenith_rad``."""
    r = constants.earth_radius_m
    rs = r + np.asarray(altitude_m, dtype=float)
    alpha = zenith_rad - np.arcsin(r * np.sin(zenith_rad) / rs)
    return alpha[()] if np.ndim(alpha) == 0 else alpha


def single_link(altitude_m, elevation_rad, constants=EARTH):
    """LinkGeometry of one station looking at ``elevation_rad``."""
    return LinkGeometry(
        slant_range_m=float(slant_range(altitude_m, elevation_rad, constants)),
        zenith_angle_rad=0.5 * math.pi - elevation_rad,
        elevation_rad=elevation_rad,
        ground_central_angle_rad=float(
            central_angle_from_elevation(altitude_m, elevation_rad, constants)
        ),
    )


def half_central_angle(ground_distance_m, distance_kind="arc",
                       constants=EARTH):
    """Earth-centre angle from either station to the midpoint between them.

    Raises
    ------
    ArgumentError
        For a ``chord`` longer than the Earth diameter or an unknown
        ``distance_kind``.
    """
    r = constants.earth_radius_m
    if distance_kind == "arc":
        return ground_distance_m / (2.0 * r)
    if distance_kind == "chord":
        ratio = ground_distance_m / (2.0 * r)
        if ratio > 1.0:
            raise ArgumentError("chord distance exceeds the Earth diameter")
        return math.asin(ratio)
    raise ArgumentError(
        f"distance_kind must be 'arc' or 'chord', got {distance_kind!r}"
    )


def ground_distance(central_angle_rad, distance_kind="arc", constants=EARTH):
    """Station separation spanning ``central_angle_rad``, arc or chord."""
    r = constants.earth_radius_m
    if distance_kind == "chord":
        return 2.0 * r * math.sin(0.5 * central_angle_rad)
    if distance_kind == "arc":
        return r * central_angle_rad
    raise ArgumentError(
        f"distance_kind must be 'arc' or 'chord', got {distance_kind!r}"
    )


def symmetric_double_link(altitude_m, ground_distance_m,
                          distance_kind="arc", constants=EARTH):
    """Geometry of a satellite midway between two ground stations.

    Parameters
    ----------
    altitude_m : float
        Satellite altitude.
    ground_distance_m : float
        Station separation, along the surface (``arc``) or straight-line
        (``chord``).
    distance_kind : {"arc", "chord"}
        How ``ground_distance_m`` is measured.

    Returns
    -------
    tuple of (LinkGeometry or None, bool)
        The geometry of each of the two identical links and the feasibility
        flag. The geometry is ``None`` when the satellite is below the
        horizon of both stations.
    """
    if ground_distance_m < 0:
        raise ArgumentError("ground_distance_m must be nonnegative")
    alpha = half_central_angle(ground_distance_m, distance_kind, constants)
    el = float(elevation_from_central_angle(altitude_m, alpha, constants))
    if el < 0:
        logger.debug(
            "Double link at %.0f m over %.0f m is below the horizon",
            altitude_m, ground_distance_m,
        )
        return None, False
    geometry = LinkGeometry(
        slant_range_m=float(slant_range(altitude_m, el, constants)),
        zenith_angle_rad=0.5 * math.pi - el,
        elevation_rad=el,
        ground_central_angle_rad=alpha,
    )
    return geometry, True


def max_double_link_distance(altitude_m, min_elevation_rad=0.0,
                             distance_kind="arc", constants=EARTH):
    """Largest station separation keeping both elevations above a bound."""
    alpha = float(
        central_angle_from_elevation(altitude_m, min_elevation_rad, constants)
    )
    r = constants.earth_radius_m
    if distance_kind == "chord":
        return 2.0 * r * math.sin(alpha)
    return 2.0 * r * alpha


def min_altitude_for_double_link(ground_distance_m, min_elevation_rad,
                                 distance_kind="arc", constants=EARTH):
    """Lowest altitude serving both stations above ``min_elevation_rad``.

    Closed form from the law of sines,
    ``R + H = R cos ε / cos(ε + α)``.

    Raises
    ------
    ArgumentError
        If ``ε + α >= π/2``: no altitude on a sphere satisfies the bound.
    """
    if not 0.0 <= min_elevation_rad < 0.5 * math.pi:
        raise ArgumentError("min_elevation_rad must lie in [0, pi/2)")
    alpha = half_central_angle(ground_distance_m, distance_kind, constants)
    denom = math.cos(min_elevation_rad + alpha)
    if denom <= 0:
        raise ArgumentError(
            f"A separation of {ground_distance_m:.0f} m cannot be served at "
            f"{math.degrees(min_elevation_rad):.1f} deg elevation"
        )
    r = constants.earth_radius_m
    return max(0.0, r * math.cos(min_elevation_rad) / denom - r)


def pass_duration_circular(orbit, max_zenith_rad, constants=EARTH):
    """Time a circular-orbit satellite spends within ``±max_zenith_rad``.

    ``duration = 2 α (R + H0) / v`` with α the central angle at the zenith
    bound. Earth rotation is ignored.
    """
    if not 0.0 <= max_zenith_rad <= 0.5 * math.pi:
        raise ArgumentError("max_zenith_rad must lie in [0, pi/2]")
    alpha = float(
        central_angle_from_zenith(orbit.altitude_m, max_zenith_rad, constants)
    )
    return 2.0 * alpha * orbit.radius_m(constants) / orbital_velocity(
        orbit, constants
    )


def _eccentric_anomaly(e, true_anomaly_rad):
    half = 0.5 * np.asarray(true_anomaly_rad, dtype=float)
    # atan2 keeps E continuous on [0, 2π] since sin(φ/2) >= 0 there
    return 2.0 * np.arctan2(
        math.sqrt(1.0 - e) * np.sin(half), math.sqrt(1.0 + e) * np.cos(half)
    )


def time_from_perigee(orbit, true_anomaly_rad, constants=EARTH):
    """Flight time from perigee to true anomaly ``φ`` (Kepler's equation).

    Parameters
    ----------
    orbit : EllipticalOrbit
    true_anomaly_rad : float or array_like
        φ in [0, 2π].

    Returns
    -------
    float or numpy.ndarray
        ``sqrt(a^3/mu) (E - e sin E)`` in seconds.
    """
    phi = np.asarray(true_anomaly_rad, dtype=float)
    if np.any(phi < 0) or np.any(phi > 2.0 * np.pi):
        raise ArgumentError("true_anomaly_rad must lie in [0, 2pi]")
    e = orbit.eccentricity(constants)
    a = orbit.semi_major_m(constants)
    ecc = _eccentric_anomaly(e, phi)
    t = math.sqrt(a**3 / constants.earth_mu_m3s2) * (ecc - e * np.sin(ecc))
    return t[()] if t.ndim == 0 else t


def orbit_radius(orbit, true_anomaly_rad, constants=EARTH):
    """Distance from the Earth's centre at true anomaly ``φ``."""
    e = orbit.eccentricity(constants)
    p = orbit.semi_major_m(constants) * (1.0 - e**2)
    return p / (1.0 + e * np.cos(true_anomaly_rad))


def station_zenith_angle(orbit, true_anomaly_rad, constants=EARTH):
    """Zenith angle of the satellite from a station under the apogee.

    Values above π/2 mean the satellite has set below the horizon.
    """
    r = orbit_radius(orbit, true_anomaly_rad, constants)
    alpha = np.abs(np.asarray(true_anomaly_rad, dtype=float) - np.pi)
    return np.arctan2(
        r * np.sin(alpha), r * np.cos(alpha) - constants.earth_radius_m
    )


def heo_dwell_above_station(orbit, max_zenith_rad, constants=EARTH):
    """Time an elliptical-orbit satellite stays within ``±max_zenith_rad``.

    The pass is symmetric about the apogee, so the dwell is twice the time
    from the apogee to the true anomaly where the zenith bound is crossed.
    """
    if not 0.0 <= max_zenith_rad <= 0.5 * math.pi:
        raise ArgumentError("max_zenith_rad must lie in [0, pi/2]")
    if max_zenith_rad == 0.0:
        return 0.0
    phi_exit = brentq(
        lambda phi: float(station_zenith_angle(orbit, phi, constants))
        - max_zenith_rad,
        math.pi, 2.0 * math.pi, xtol=1e-10,
    )
    dwell = 2.0 * float(
        time_from_perigee(orbit, phi_exit, constants)
        - time_from_perigee(orbit, math.pi, constants)
    )
    logger.debug(
        "HEO dwell %.1f s, exit true anomaly %.4f rad", dwell, phi_exit
    )
    return dwell


def max_zenith_between_orbits(lower, higher, constants=EARTH):
    """Largest angular separation keeping two coplanar satellites linked.

    The link line is tangent to the lower orbit when
    ``cos θ = r_lower / r_higher``; beyond that the higher satellite sinks
    below the lower satellite's horizon.

    Raises
    ------
    ArgumentError
        If the orbits have equal radii or ``higher`` is the lower one.
    """
    r_low = _radius(lower, constants)
    r_high = _radius(higher, constants)
    if r_high <= r_low:
        raise ArgumentError("higher orbit must lie above the lower orbit")
    return math.acos(r_low / r_high)


def intersatellite_range(lower, higher, separation_rad, constants=EARTH):
    """Distance between two coplanar satellites ``separation_rad`` apart."""
    r_low = _radius(lower, constants)
    r_high = _radius(higher, constants)
    return np.sqrt(
        r_low**2 + r_high**2 - 2.0 * r_low * r_high * np.cos(separation_rad)
    )


def intersatellite_pass_duration(lower, higher, max_zenith_rad,
                                 constants=EARTH):
    """Link time between a lower and a higher satellite.

    Circular pairs: time for the relative angle to grow from 0 to
    ``min(max_zenith_rad, max_zenith_between_orbits)`` at the differential
    angular rate. An elliptical ``higher`` orbit is held fixed at apogee and
    the link lasts half a period of the lower satellite.
    """
    if isinstance(higher, EllipticalOrbit):
        return 0.5 * orbital_period(lower, constants)
    if lower == higher:
        raise ArgumentError("orbits are identical; relative motion is zero")
    bound = min(max_zenith_rad,
                max_zenith_between_orbits(lower, higher, constants))
    mu = constants.earth_mu_m3s2
    w_low = math.sqrt(mu / lower.radius_m(constants) ** 3)
    w_high = math.sqrt(mu / higher.radius_m(constants) ** 3)
    return bound / abs(w_low - w_high)
