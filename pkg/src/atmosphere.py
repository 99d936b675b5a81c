#!/usr/bin/env python3
# -*- coding: utf-8 -*-
#
# atmosphere.py
#
###############################################################################
# DEPENDENCIES
###############################################################################
from dataclasses import dataclass
import logging
import math

import numpy as np
from scipy.integrate import quad
from scipy.special import gammainc

from src.constants import ABSORPTION_VALIDITY_ZENITH_RAD
from src.constants import VERTICAL_ABSORPTION_DB
from src.errors import ArgumentError, UnknownWavelength


###############################################################################
# DOCUMENTATION
###############################################################################
__doc__ = """
Atmospheric turbulence and absorption along vertical and slant paths.

**Assumptions**

-   Turbulence follows the Hufnagel-Valley profile with RMS wind speed V and
    ground-level structure constant A'.
-   Weak-fluctuation theory: secant scaling of r0 and of absorption is only
    trusted up to 70 deg zenith. Beyond it the functions raise, unless the
    caller asks for clamping.
-   Absorption is the scalar vertical-path loss of the parameter table
    (1 dB at 785 nm, 0.5 dB at 1550 nm) scaled by sec(zenith).

**Logic**

:func:`mu0` integrates :func:`cn2` with adaptive Gauss-Kronrod quadrature
(break points at the scale heights where each term dominates, since the
integrand spans twelve orders of magnitude). :func:`mu0_analytic` is the
closed form of the same integral, via the regularised incomplete gamma
function, and serves as an independent cross-check.
The Fried parameter is ``r0 = (0.423 mu0 k^2 sec ζ)^(-3/5)``.
"""
__all__ = [
    "AbsorptionTable",
    "HVProfile",
    "absorption_table",
    "cn2",
    "fried_r0",
    "mu0",
    "mu0_analytic",
    "scaled_r0",
    "slant_absorption_db",
]

logger = logging.getLogger(__name__)


###############################################################################
# GLOBALS
###############################################################################
MU0_TOP_M = 1.0e5
'''float : Default upper integration bound for mu0 (turbulence-free above).'''

_HV_BREAKS_M = (100.0, 1500.0, 1.0e4)
'''tuple : Scale heights passed to the quadrature as break points.'''


###############################################################################
# CLASSES
###############################################################################
@dataclass(frozen=True)
class HVProfile:
    """Hufnagel-Valley turbulence profile parameters."""
    wind_rms_ms: float = 21.0
    ground_cn2: float = 1.7e-14

    def __post_init__(self):
        if not self.wind_rms_ms > 0:
            raise ArgumentError("wind_rms_ms must be positive")
        if not self.ground_cn2 > 0:
            raise ArgumentError("ground_cn2 must be positive")


@dataclass(frozen=True)
class AbsorptionTable:
    """Vertical-path absorption per wavelength.

    Attributes
    ----------
    entries : tuple of (float, float)
        ``(wavelength_m, vertical_db)`` pairs with unique wavelengths.
    max_slant_zenith_rad : float
        Largest zenith angle for secant scaling.
    """
    entries: tuple = tuple(
        (choice.value, db) for choice, db in VERTICAL_ABSORPTION_DB.items()
    )
    max_slant_zenith_rad: float = ABSORPTION_VALIDITY_ZENITH_RAD

    def __post_init__(self):
        seen = []
        for wavelength, db in self.entries:
            if db < 0:
                raise ArgumentError("absorption must be >= 0 dB")
            if any(math.isclose(wavelength, w) for w in seen):
                raise ArgumentError(f"duplicate wavelength {wavelength}")
            seen.append(wavelength)

    @classmethod
    def from_mapping(cls, mapping, **kwargs):
        """Build a table from a ``{wavelength_m: vertical_db}`` mapping."""
        return cls(
            entries=tuple((float(k), float(v)) for k, v in mapping.items()),
            **kwargs,
        )

    def vertical_db(self, wavelength_m):
        """Vertical absorption in dB for ``wavelength_m``."""
        for wavelength, db in self.entries:
            if math.isclose(wavelength, wavelength_m, rel_tol=1e-9):
                return db
        raise UnknownWavelength(
            f"No absorption entry for {wavelength_m * 1e9:.1f} nm"
        )


###############################################################################
# FUNCTIONS
###############################################################################
def absorption_table(params):
    """AbsorptionTable of both table wavelengths, honouring ``params``.

    The entry for ``params.wavelength_m`` takes ``params.a_atm_vertical_db``
    so an override of that field flows through.
    """
    mapping = {choice.value: db for choice, db in VERTICAL_ABSORPTION_DB.items()}
    for wavelength in list(mapping):
        if math.isclose(wavelength, params.wavelength_m, rel_tol=1e-9):
            del mapping[wavelength]
    mapping[params.wavelength_m] = params.a_atm_vertical_db
    return AbsorptionTable.from_mapping(mapping)


def cn2(profile, altitude_m):
    """Refractive-index structure constant C_n^2(h), m^(-2/3)."""
    h = np.asarray(altitude_m, dtype=float)
    if np.any(h < 0):
        raise ArgumentError("altitude_m must be nonnegative")
    val = (
        0.00594 * (profile.wind_rms_ms / 27.0) ** 2
        * (1e-5 * h) ** 10 * np.exp(-h / 1000.0)
        + 2.7e-16 * np.exp(-h / 1500.0)
        + profile.ground_cn2 * np.exp(-h / 100.0)
    )
    return val[()] if val.ndim == 0 else val


def mu0(profile, h0_m=0.0, h_top_m=MU0_TOP_M, epsrel=1e-6):
    """Integrated turbulence ``int_{h0}^{H} C_n^2(h) dh``, m^(1/3).

    Parameters
    ----------
    profile : HVProfile
    h0_m : float
        Lower bound (station altitude).
    h_top_m : float
        Upper bound.
    epsrel : float
        Relative tolerance of the adaptive quadrature.
    """
    if h0_m < 0 or h_top_m < h0_m:
        raise ArgumentError("need 0 <= h0_m <= h_top_m")
    if h_top_m == h0_m:
        return 0.0
    breaks = [b for b in _HV_BREAKS_M if h0_m < b < h_top_m]
    val, err = quad(
        lambda h: float(cn2(profile, h)), h0_m, h_top_m,
        points=breaks or None, epsabs=0.0, epsrel=epsrel, limit=200,
    )
    logger.debug("mu0 = %.6e (abs err %.1e)", val, err)
    return val


def mu0_analytic(profile, h0_m=0.0, h_top_m=MU0_TOP_M):
    """Closed-form :func:`mu0` for the Hufnagel-Valley profile."""
    if h0_m < 0 or h_top_m < h0_m:
        raise ArgumentError("need 0 <= h0_m <= h_top_m")
    # (1e-5 h)^10 e^(-h/1000) integrates to 1e-17 * Gamma(11) * P(11, h/1000)
    high = (
        0.00594 * (profile.wind_rms_ms / 27.0) ** 2 * 1e-17
        * math.factorial(10)
        * (gammainc(11, h_top_m / 1000.0) - gammainc(11, h0_m / 1000.0))
    )
    tropo = 2.7e-16 * 1500.0 * (
        math.exp(-h0_m / 1500.0) - math.exp(-h_top_m / 1500.0)
    )
    ground = profile.ground_cn2 * 100.0 * (
        math.exp(-h0_m / 100.0) - math.exp(-h_top_m / 100.0)
    )
    return float(high + tropo + ground)


def _check_zenith(zenith_rad, bound, clamp):
    if zenith_rad < 0:
        raise ArgumentError("zenith_rad must be nonnegative")
    if zenith_rad > bound:
        if not clamp:
            raise ArgumentError(
                f"zenith {math.degrees(zenith_rad):.1f} deg exceeds the "
                f"{math.degrees(bound):.0f} deg validity bound"
            )
        return bound
    return zenith_rad


def fried_r0(profile, wavelength_m, zenith_rad=0.0, h0_m=0.0,
             h_top_m=MU0_TOP_M):
    """Fried parameter (atmospheric coherence diameter), m.

    Raises
    ------
    ArgumentError
        For zenith angles beyond 70 deg.
    """
    _check_zenith(zenith_rad, ABSORPTION_VALIDITY_ZENITH_RAD, clamp=False)
    k = 2.0 * math.pi / wavelength_m
    integrated = mu0(profile, h0_m, h_top_m)
    return (0.423 * integrated * k**2 / math.cos(zenith_rad)) ** (-3.0 / 5.0)


def scaled_r0(r0_zenith_m, zenith_rad, clamp=False):
    """Scale a zenith r0 to a slant path, ``r0 (sec ζ)^(-3/5)``."""
    zen = _check_zenith(zenith_rad, ABSORPTION_VALIDITY_ZENITH_RAD, clamp)
    return r0_zenith_m * math.cos(zen) ** (3.0 / 5.0)


def slant_absorption_db(table, wavelength_m, zenith_rad, clamp=False):
    """Atmospheric absorption on a slant path, ``sec θ * A_vertical``.

    Parameters
    ----------
    table : AbsorptionTable
    wavelength_m : float
    zenith_rad : float
    clamp : bool
        Evaluate at the validity bound instead of raising beyond it.

    Raises
    ------
    UnknownWavelength
        If the table has no entry for the wavelength.
    ArgumentError
        Beyond the validity bound when ``clamp`` is false.
    """
    vertical = table.vertical_db(wavelength_m)
    zen = _check_zenith(zenith_rad, table.max_slant_zenith_rad, clamp)
    if zen == 0.0:
        return vertical
    return vertical / math.cos(zen)
