#!/usr/bin/env python3
# -*- coding: utf-8 -*-
#
# constants.py
#
###############################################################################
# DEPENDENCIES
###############################################################################
from dataclasses import dataclass, fields
import enum
import math

from src.errors import ArgumentError


###############################################################################
# DOCUMENTATION
###############################################################################
__doc__ = """
Physical constants and the default free-space link parameter table.

**Assumptions**

-   All quantities are SI internally (m, s, Hz, rad); losses in dB are used
    only where a field name says so (``*_db``).
-   The table gives the memory efficiency only as the product
    :math:`\\eta_{st}\\eta_r = 0.5`. Formulas that need the two factors
    separately use the symmetric split
    :math:`\\eta_{st} = \\eta_r = \\sqrt{0.5}`, which reproduces the product
    everywhere else.
-   Earth radius, :math:`GM` and the speed of light are standard
    (IERS/CODATA) values.

**Logic**

:func:`defaults` returns an immutable :class:`DefaultParams` for one of the
two table wavelengths. The only wavelength-dependent entry is the vertical
atmospheric absorption (1 dB at 785 nm, 0.5 dB at 1550 nm).

The module GLOBALS hold the platform presets used by the scenario tables:
altitudes, the "ideal" apertures of each platform, and the pass windows used
to judge QKD feasibility.
"""
__all__ = [
    "ABSORPTION_VALIDITY_ZENITH_RAD",
    "DefaultParams",
    "EARTH",
    "LOW_ELEVATION_RAD",
    "PLATFORM_ALTITUDES_M",
    "PLATFORM_APERTURES_M",
    "PhysicalConstants",
    "QKD_PASS_WINDOWS_S",
    "QKD_REQUIRED_DETECTIONS",
    "VERTICAL_ABSORPTION_DB",
    "WavelengthChoice",
    "defaults",
]


###############################################################################
# CLASSES
###############################################################################
@dataclass(frozen=True)
class PhysicalConstants:
    """Universal values used by the geometry and rate models.

    Attributes
    ----------
    earth_radius_m : float
        Mean Earth radius, m.
    earth_mu_m3s2 : float
        Earth gravitational parameter GM, m^3/s^2.
    light_speed_ms : float
        Speed of light in vacuum, m/s.
    """
    earth_radius_m: float = 6.371e6
    earth_mu_m3s2: float = 3.986004418e14
    light_speed_ms: float = 2.99792458e8

    def __post_init__(self):
        for f in fields(self):
            val = getattr(self, f.name)
            if not (math.isfinite(val) and val > 0):
                raise ArgumentError(
                    f"{f.name} must be finite and positive, got {val}"
                )


class WavelengthChoice(enum.Enum):
    """The two wavelengths of the parameter table."""
    NM785 = 785e-9
    NM1550 = 1550e-9

    @classmethod
    def from_nm(cls, nm):
        """Look up a choice from a wavelength in nanometres (785 or 1550)."""
        for choice in cls:
            if math.isclose(choice.value * 1e9, float(nm)):
                return choice
        raise ArgumentError(f"Wavelength must be 785 or 1550 nm, got {nm}")


@dataclass(frozen=True)
class DefaultParams:
    """The free-space link parameter table.

    Every field can be overridden with :func:`dataclasses.replace`; the
    invariants are re-checked on construction.
    """
    wavelength_m: float = 785e-9
    rep_rate_hz: float = 1e9
    eta_sps: float = 0.75
    eta_det: float = 0.90
    eta_mem: float = 0.50
    eta_qnd: float = 0.90
    t1_s: float = 0.100
    trans_tx: float = 0.80
    trans_rx: float = 0.80
    pointing_loss: float = 0.20
    pointing_loss_intersatellite: float = 0.30
    optical_loss_db: float = 6.0
    a_atm_vertical_db: float = 1.0
    fried_r0_m: float = 0.075
    ndif_fixed: int = 1
    hap_altitude_m: float = 2.0e4
    hap_altitude_max_m: float = 3.0e4
    leo_altitude_m: float = 6.0e5
    meo_altitude_m: float = 2.0e7
    geo_altitude_m: float = 3.6e7
    heo_perigee_m: float = 6.0e5
    heo_apogee_m: float = 4.0e7

    def __post_init__(self):
        for name in ("eta_sps", "eta_det", "eta_mem", "eta_qnd",
                     "trans_tx", "trans_rx"):
            val = getattr(self, name)
            if not 0.0 < val <= 1.0:
                raise ArgumentError(f"{name} must lie in (0, 1], got {val}")
        for name in ("pointing_loss", "pointing_loss_intersatellite"):
            val = getattr(self, name)
            if not 0.0 <= val < 1.0:
                raise ArgumentError(f"{name} must lie in [0, 1), got {val}")
        for name in ("optical_loss_db", "a_atm_vertical_db"):
            if getattr(self, name) < 0:
                raise ArgumentError(f"{name} must be >= 0 dB")
        for name in ("wavelength_m", "rep_rate_hz", "t1_s", "fried_r0_m",
                     "hap_altitude_m", "hap_altitude_max_m", "leo_altitude_m",
                     "meo_altitude_m", "geo_altitude_m", "heo_perigee_m",
                     "heo_apogee_m"):
            if not getattr(self, name) > 0:
                raise ArgumentError(f"{name} must be positive")
        if self.ndif_fixed < 0:
            raise ArgumentError("ndif_fixed must be a nonnegative integer")
        if self.heo_apogee_m < self.heo_perigee_m:
            raise ArgumentError("heo_apogee_m must not be below heo_perigee_m")

    @property
    def eta_store(self):
        """Storage efficiency from the symmetric split of ``eta_mem``."""
        return math.sqrt(self.eta_mem)

    @property
    def eta_retrieve(self):
        """Retrieval efficiency from the symmetric split of ``eta_mem``."""
        return math.sqrt(self.eta_mem)

    def platform_altitudes(self):
        """Altitude per platform class; HEO as perigee and apogee."""
        return {
            'HAP': self.hap_altitude_m,
            'LEO': self.leo_altitude_m,
            'MEO': self.meo_altitude_m,
            'GEO': self.geo_altitude_m,
            'HEO_PERIGEE': self.heo_perigee_m,
            'HEO_APOGEE': self.heo_apogee_m,
        }

    def as_dict(self):
        """Field name to value, in declaration order."""
        return {f.name: getattr(self, f.name) for f in fields(self)}


###############################################################################
# GLOBALS
###############################################################################
EARTH = PhysicalConstants()
'''PhysicalConstants : The single shared instance of the constants.'''

VERTICAL_ABSORPTION_DB = {
    WavelengthChoice.NM785: 1.0,
    WavelengthChoice.NM1550: 0.5,
}
'''dict : Vertical-path atmospheric absorption per table wavelength.'''

ABSORPTION_VALIDITY_ZENITH_RAD = math.radians(70.0)
'''float : Largest zenith angle for secant scaling of absorption and r0.'''

LOW_ELEVATION_RAD = math.radians(20.0)
'''float : Elevation below which a link is shaded as impractical.'''

PLATFORM_ALTITUDES_M = DefaultParams().platform_altitudes()
'''dict : Reference altitude of each platform class at the table defaults.'''

PLATFORM_APERTURES_M = {
    'GROUND': 1.0,
    'HAP': 0.15,
    'LEO': 0.25,
    'MEO': 0.50,
    'GEO': 0.50,
    'HEO': 0.50,
}
'''dict : Ideal telescope aperture diameter of each platform class.'''

QKD_PASS_WINDOWS_S = {
    'LEO': 120.0,
    'MEO': 20 * 60.0,
    'GEO': 3600.0,
    'HEO': 3600.0,
    'HAP': 3600.0,
}
'''dict : Link duration available per orbit class for QKD verdicts.'''

QKD_REQUIRED_DETECTIONS = {
    'DecoyWCP': 100_000,
    'EPSorSPS': 10_000,
}
'''dict : Detections needed for a key, per source protocol.'''


###############################################################################
# FUNCTIONS
###############################################################################
def defaults(wavelength_choice=WavelengthChoice.NM785):
    """Return the parameter table for one wavelength.

    Parameters
    ----------
    wavelength_choice : WavelengthChoice
        ``NM785`` or ``NM1550``.

    Returns
    -------
    DefaultParams
        The table values; ``a_atm_vertical_db`` matches the wavelength.

    Examples
    --------
    >>> defaults(WavelengthChoice.NM1550).a_atm_vertical_db
    0.5
    """
    choice = WavelengthChoice(wavelength_choice)
    return DefaultParams(
        wavelength_m=choice.value,
        a_atm_vertical_db=VERTICAL_ABSORPTION_DB[choice],
    )
