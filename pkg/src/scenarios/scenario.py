#!/usr/bin/env python3
# -*- coding: utf-8 -*-
#
# scenario.py
#
###############################################################################
# DEPENDENCIES
###############################################################################
from dataclasses import dataclass, field, fields
import enum
import math

import numpy as np

from src.atmosphere import absorption_table
from src.constants import DefaultParams
from src.constants import PLATFORM_APERTURES_M
from src.errors import ScenarioError
from src.geometry import CircularOrbit
from src.geometry import EllipticalOrbit
from src.link_budget import LinkKind
from src.link_budget import OpticalChain
from src.rates import HardwareParams
from src.rates import Protocol
from src.rates import SchemeKind


###############################################################################
# DOCUMENTATION
###############################################################################
__doc__ = """
Scenario description objects: what to sweep, over which orbit and link
kind, with which optics and hardware.

**Assumptions**

-   Teleportation scenarios are symmetric double downlinks from one
    satellite to two ground stations. QKD scenarios are single links.
-   Intersatellite scenarios have no station geometry and can only be swept
    over the link loss (``total_db``).
-   Apertures default to the platform presets (HAP 15 cm, LEO 25 cm,
    MEO/GEO/HEO 50 cm) on the space side and 1 m on the ground.
-   An elliptical orbit is evaluated at its apogee altitude.

**Logic**

:class:`Scenario` is immutable. It resolves the parameter table, optical
chain, hardware figures and absorption table that the sweep needs, and
provides the ``param_*`` snapshot written with every result row.
"""
__all__ = [
    "Scenario",
    "ScenarioMode",
    "SweepSpec",
    "SweepVariable",
    "orbit_class",
    "platform_orbit",
]


###############################################################################
# GLOBALS
###############################################################################
ORBIT_CLASS_LIMITS_M = (
    ('HAP', 1.0e5),
    ('LEO', 2.0e6),
    ('MEO', 3.5e7),
)
'''tuple : Upper altitude of each circular orbit class; higher is GEO.'''


###############################################################################
# CLASSES
###############################################################################
class ScenarioMode(enum.Enum):
    TELEPORTATION = "teleportation"
    QKD = "qkd"


class SweepVariable(enum.Enum):
    ELEVATION = "elevation"
    GROUND_DISTANCE = "ground_distance"
    TOTAL_DB = "total_db"


@dataclass(frozen=True)
class SweepSpec:
    """Sweep variable and an evenly spaced range.

    Elevations are in degrees, ground distances in metres and losses in dB
    per link.
    """
    variable: SweepVariable = SweepVariable.ELEVATION
    start: float = 90.0
    stop: float = 0.0
    steps: int = 91

    def __post_init__(self):
        object.__setattr__(self, "variable", SweepVariable(self.variable))
        if int(self.steps) != self.steps or self.steps < 2:
            raise ScenarioError("sweep steps must be an integer >= 2")
        if not (math.isfinite(self.start) and math.isfinite(self.stop)):
            raise ScenarioError("sweep bounds must be finite")
        if self.start == self.stop:
            raise ScenarioError("sweep range is empty")
        lo, hi = sorted((self.start, self.stop))
        if self.variable is SweepVariable.ELEVATION and not (lo >= -90 and hi <= 90):
            raise ScenarioError("elevation sweeps must stay within [-90, 90] deg")
        if self.variable is not SweepVariable.ELEVATION and lo < 0:
            raise ScenarioError(f"{self.variable.value} sweeps must be >= 0")

    def values(self):
        return np.linspace(self.start, self.stop, int(self.steps))


@dataclass(frozen=True)
class Scenario:
    """One named, sweepable link scenario.

    Attributes
    ----------
    name : str
    mode : ScenarioMode
        Teleportation (double downlink) or QKD (single link).
    link_kind : LinkKind
    orbit : CircularOrbit or EllipticalOrbit
    params : DefaultParams
        Table with every override applied.
    tx_aperture_m, rx_aperture_m : float or None
        ``None`` selects the platform presets.
    eta_eps : float
        Pair source efficiency of the teleportation schemes.
    multiplex_factor : int
    schemes : tuple of SchemeKind
        Rate columns of a teleportation sweep.
    protocol : Protocol
        QKD source protocol.
    ground_distance_m : float
        Station separation used for memory waiting in ``total_db`` sweeps.
    distance_kind : {"arc", "chord"}
    fixed_ndif : bool
        Evaluate the repeater at ``params.ndif_fixed`` instead of averaging.
    clamp_absorption : bool
        Clamp secant scaling at 70 deg instead of failing.
    sweep : SweepSpec
    """
    name: str
    mode: ScenarioMode = ScenarioMode.TELEPORTATION
    link_kind: LinkKind = LinkKind.DOWNLINK
    orbit: object = CircularOrbit(6.0e5)
    params: DefaultParams = DefaultParams()
    tx_aperture_m: float = None
    rx_aperture_m: float = None
    eta_eps: float = 0.5
    multiplex_factor: int = 1
    schemes: tuple = tuple(SchemeKind)
    protocol: Protocol = Protocol.EPS_OR_SPS
    ground_distance_m: float = 0.0
    distance_kind: str = "arc"
    fixed_ndif: bool = False
    clamp_absorption: bool = True
    sweep: SweepSpec = field(default_factory=SweepSpec)

    def __post_init__(self):
        try:
            object.__setattr__(self, "mode", ScenarioMode(self.mode))
            object.__setattr__(self, "link_kind", LinkKind(self.link_kind))
            object.__setattr__(self, "protocol", Protocol.from_label(self.protocol))
            object.__setattr__(
                self, "schemes", tuple(SchemeKind(s) for s in self.schemes)
            )
        except ValueError as e:
            raise ScenarioError(str(e)) from e
        if not self.name:
            raise ScenarioError("scenario name must not be empty")
        if not isinstance(self.orbit, (CircularOrbit, EllipticalOrbit)):
            raise ScenarioError("orbit must be a CircularOrbit or EllipticalOrbit")
        if self.mode is ScenarioMode.TELEPORTATION:
            if self.link_kind is LinkKind.UPLINK:
                raise ScenarioError("teleportation scenarios are double downlinks")
            if not self.schemes:
                raise ScenarioError("teleportation scenarios need a scheme")
        if (self.link_kind is LinkKind.INTERSATELLITE
                and self.sweep.variable is not SweepVariable.TOTAL_DB):
            raise ScenarioError("intersatellite scenarios only sweep total_db")
        if not 0.0 < self.eta_eps <= 1.0:
            raise ScenarioError("eta_eps must lie in (0, 1]")
        if self.distance_kind not in ("arc", "chord"):
            raise ScenarioError("distance_kind must be 'arc' or 'chord'")
        if self.ground_distance_m < 0:
            raise ScenarioError("ground_distance_m must be nonnegative")
        for name in ("tx_aperture_m", "rx_aperture_m"):
            val = getattr(self, name)
            if val is not None and not val > 0:
                raise ScenarioError(f"{name} must be positive")

    @property
    def altitude_m(self):
        if isinstance(self.orbit, EllipticalOrbit):
            return self.orbit.apogee_alt_m
        return self.orbit.altitude_m

    @property
    def platform(self):
        return orbit_class(self.orbit)

    def apertures(self):
        """``(D_T, D_R)`` after applying the platform presets."""
        space = PLATFORM_APERTURES_M[self.platform]
        ground = PLATFORM_APERTURES_M['GROUND']
        if self.link_kind is LinkKind.UPLINK:
            preset = (ground, space)
        elif self.link_kind is LinkKind.DOWNLINK:
            preset = (space, ground)
        else:
            preset = (space, space)
        tx = preset[0] if self.tx_aperture_m is None else self.tx_aperture_m
        rx = preset[1] if self.rx_aperture_m is None else self.rx_aperture_m
        return tx, rx

    def chain(self):
        return OpticalChain.from_defaults(self.params, *self.apertures())

    def hardware(self):
        return HardwareParams.from_defaults(
            self.params, self.eta_eps, self.multiplex_factor
        )

    def absorption(self):
        return absorption_table(self.params)

    def snapshot(self):
        """Resolved parameters, keyed ``param_<name>``."""
        tx, rx = self.apertures()
        snap = {f"param_{f.name}": getattr(self.params, f.name)
                for f in fields(self.params)}
        snap.update({
            "param_scenario": self.name,
            "param_mode": self.mode.value,
            "param_link_kind": self.link_kind.value,
            "param_platform": self.platform,
            "param_altitude_m": self.altitude_m,
            "param_tx_aperture_m": tx,
            "param_rx_aperture_m": rx,
            "param_eta_eps": self.eta_eps,
            "param_multiplex_factor": self.multiplex_factor,
            "param_protocol": self.protocol.value,
            "param_ground_distance_m": self.ground_distance_m,
            "param_distance_kind": self.distance_kind,
            "param_fixed_ndif": self.fixed_ndif,
        })
        return snap


###############################################################################
# FUNCTIONS
###############################################################################
def orbit_class(orbit):
    """Platform class (HAP, LEO, MEO, GEO or HEO) of an orbit."""
    if isinstance(orbit, EllipticalOrbit):
        return 'HEO'
    for label, ceiling in ORBIT_CLASS_LIMITS_M:
        if orbit.altitude_m <= ceiling:
            return label
    return 'GEO'


def platform_orbit(label, params=None):
    """Reference orbit of a platform class, taken from the parameter table."""
    params = params or DefaultParams()
    key = str(label).upper()
    if key == 'HEO':
        return EllipticalOrbit(params.heo_perigee_m, params.heo_apogee_m)
    altitudes = params.platform_altitudes()
    if key not in altitudes or key.startswith('HEO'):
        raise ScenarioError(
            f"Unknown platform {label!r}; use HAP, LEO, MEO, GEO or HEO"
        )
    return CircularOrbit(altitudes[key])
