#!/usr/bin/env python3
# -*- coding: utf-8 -*-
#
# link_budget.py
#
###############################################################################
# DEPENDENCIES
###############################################################################
from dataclasses import dataclass, field
import enum
import logging
import math
from warnings import warn

from scipy.optimize import brentq

from src.atmosphere import slant_absorption_db
from src.constants import DefaultParams
from src.errors import ArgumentError, FarFieldViolation, Unachievable


###############################################################################
# DOCUMENTATION
###############################################################################
__doc__ = """
Free-space optical link attenuation for uplinks, downlinks and
intersatellite links.

**Assumptions**

-   Diffraction-limited telescopes with the receiver in the far field of the
    transmitter (``H >> D_T^2 / λ``). A violation is reported with a
    :class:`~src.errors.FarFieldViolation` warning and the ``far_field_ok``
    flag, never as an error.
-   Uplinks spread by the turbulence angle ``λ / r0`` as well as by
    diffraction. Downlinks ignore wavefront distortion. Intersatellite links
    have neither turbulence nor absorption.
-   Intersatellite links use a 30 % pointing loss unless the optical chain
    pins one.

**Logic**

The attenuation is the sum of four dB terms::

    geometric  = 10 log10( H^2 (θ_T^2 + θ_atm^2) / D_R^2 )
    optics     = -10 log10( T_T (1 - L_P) T_R )
    atmosphere = sec(ζ) A_vertical            (zero for intersatellite)
    additional = A_add

When the received spot ``H sqrt(θ_T^2 + θ_atm^2)`` is smaller than the
receiver aperture, the geometric ratio is clamped at 1 (0 dB) and the
``geometric`` clamp flag is set. That happens for short HAP links.
"""
__all__ = [
    "FixedSide",
    "LinkBudget",
    "LinkKind",
    "OpticalChain",
    "attenuation_db",
    "double_link_probability",
    "link_probability_db",
    "resolve_pointing_loss",
    "solve_min_aperture",
    "transmission_probability",
]

logger = logging.getLogger(__name__)


###############################################################################
# CLASSES
###############################################################################
class LinkKind(enum.Enum):
    UPLINK = "uplink"
    DOWNLINK = "downlink"
    INTERSATELLITE = "intersatellite"

    @property
    def has_turbulence(self):
        return self is LinkKind.UPLINK

    @property
    def has_atmosphere(self):
        return self is not LinkKind.INTERSATELLITE


class FixedSide(enum.Enum):
    TX_FIXED = "tx"
    RX_FIXED = "rx"


@dataclass(frozen=True)
class OpticalChain:
    """Telescope apertures and optics entering the attenuation equation.

    Attributes
    ----------
    tx_aperture_m, rx_aperture_m : float
        Transmitter and receiver aperture diameters D_T, D_R.
    trans_tx, trans_rx : float
        Optics transmittances T_T, T_R in (0, 1].
    pointing_loss : float or None
        L_P in [0, 1). ``None`` selects the per-link-kind default.
    additional_loss_db : float
        A_add, coupling and component losses.
    """
    tx_aperture_m: float
    rx_aperture_m: float
    trans_tx: float = 0.80
    trans_rx: float = 0.80
    pointing_loss: float = None
    additional_loss_db: float = 6.0

    def __post_init__(self):
        if not (self.tx_aperture_m > 0 and self.rx_aperture_m > 0):
            raise ArgumentError("apertures must be positive")
        for name in ("trans_tx", "trans_rx"):
            if not 0.0 < getattr(self, name) <= 1.0:
                raise ArgumentError(f"{name} must lie in (0, 1]")
        if self.pointing_loss is not None and not 0.0 <= self.pointing_loss < 1.0:
            raise ArgumentError("pointing_loss must lie in [0, 1)")
        if self.additional_loss_db < 0:
            raise ArgumentError("additional_loss_db must be >= 0")

    @classmethod
    def from_defaults(cls, params, tx_aperture_m, rx_aperture_m):
        """Chain with the table's transmittances and optical loss.

        The pointing loss is left unset so the link kind picks it.
        """
        return cls(
            tx_aperture_m=tx_aperture_m,
            rx_aperture_m=rx_aperture_m,
            trans_tx=params.trans_tx,
            trans_rx=params.trans_rx,
            additional_loss_db=params.optical_loss_db,
        )


@dataclass(frozen=True)
class LinkBudget:
    """Breakdown of one link's attenuation in dB."""
    geometric_db: float
    optics_db: float
    atmosphere_db: float
    additional_db: float
    far_field_ok: bool = True
    clamp_flags: tuple = ()
    total_db: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(
            self, "total_db",
            self.geometric_db + self.optics_db + self.atmosphere_db
            + self.additional_db,
        )

    @property
    def clamped(self):
        return bool(self.clamp_flags)

    def as_dict(self):
        return {
            "geometric_db": self.geometric_db,
            "optics_db": self.optics_db,
            "atmosphere_db": self.atmosphere_db,
            "additional_db": self.additional_db,
            "total_db": self.total_db,
            "far_field_ok": self.far_field_ok,
            "clamp_flags": list(self.clamp_flags),
        }


###############################################################################
# FUNCTIONS
###############################################################################
def resolve_pointing_loss(kind, chain, params=None):
    """Pointing loss of ``chain``, or the table default for ``kind``."""
    if chain.pointing_loss is not None:
        return chain.pointing_loss
    params = params or DefaultParams()
    if kind is LinkKind.INTERSATELLITE:
        return params.pointing_loss_intersatellite
    return params.pointing_loss


def attenuation_db(kind, chain, wavelength_m, geometry, r0_m, absorption,
                   clamp=False, params=None):
    """Attenuation of one free-space link.

    Parameters
    ----------
    kind : LinkKind
    chain : OpticalChain
    wavelength_m : float
    geometry : LinkGeometry
        Its slant range is the H of the attenuation equation, its zenith
        angle sets the absorption path.
    r0_m : float
        Fried parameter along the path (uplinks only; may be ``math.inf``).
    absorption : AbsorptionTable
    clamp : bool
        Clamp absorption at the 70 deg validity bound instead of raising.
    params : DefaultParams, optional
        Source of the per-kind pointing-loss defaults.

    Returns
    -------
    LinkBudget
    """
    kind = LinkKind(kind)
    h = geometry.slant_range_m
    flags = []

    theta_t = wavelength_m / chain.tx_aperture_m
    theta_atm = wavelength_m / r0_m if kind.has_turbulence else 0.0
    ratio = h**2 * (theta_t**2 + theta_atm**2) / chain.rx_aperture_m**2
    if ratio < 1.0:
        logger.warning("Received spot smaller than D_R at H=%.0f m; "
                       "geometric loss clamped to 0 dB", h)
        ratio = 1.0
        flags.append("geometric")
    geometric_db = 10.0 * math.log10(ratio)

    l_p = resolve_pointing_loss(kind, chain, params)
    optics_db = -10.0 * math.log10(chain.trans_tx * (1.0 - l_p) * chain.trans_rx)

    atmosphere_db = 0.0
    if kind.has_atmosphere:
        if geometry.zenith_angle_rad > absorption.max_slant_zenith_rad and clamp:
            logger.warning(
                "Zenith %.1f deg beyond the absorption bound; clamped to %.0f deg",
                math.degrees(geometry.zenith_angle_rad),
                math.degrees(absorption.max_slant_zenith_rad),
            )
            flags.append("absorption")
        atmosphere_db = slant_absorption_db(
            absorption, wavelength_m, geometry.zenith_angle_rad, clamp=clamp
        )

    far_field_ok = h >= 10.0 * chain.tx_aperture_m**2 / wavelength_m
    if not far_field_ok:
        warn(
            f"Receiver at {h:.0f} m is inside the far-field distance of a "
            f"{chain.tx_aperture_m} m aperture",
            FarFieldViolation, stacklevel=2,
        )

    return LinkBudget(
        geometric_db=geometric_db,
        optics_db=optics_db,
        atmosphere_db=atmosphere_db,
        additional_db=chain.additional_loss_db,
        far_field_ok=far_field_ok,
        clamp_flags=tuple(flags),
    )


def link_probability_db(db):
    """Transmission probability of ``db`` of loss, ``10^(-db/10)``."""
    if db < 0:
        raise ArgumentError("loss must be >= 0 dB")
    return 10.0 ** (-db / 10.0)


def double_link_probability(db):
    """Probability that both photons of a pair survive two ``db`` links."""
    return link_probability_db(2.0 * db)


def transmission_probability(budget, double=False):
    """Survival probability for one link, or both links of a pair.

    Parameters
    ----------
    budget : LinkBudget
        The attenuation A of a single link.
    double : bool
        Return P_ave, the probability for 2A dB of loss.
    """
    if double:
        return double_link_probability(budget.total_db)
    return link_probability_db(budget.total_db)


def solve_min_aperture(kind, fixed_side, fixed_aperture_m, target_db,
                       wavelength_m, geometry, r0_m, absorption,
                       bounds=(0.01, 2.0), chain=None, clamp=False):
    """Smallest free aperture meeting ``target_db``.

    Parameters
    ----------
    kind : LinkKind
    fixed_side : FixedSide
        ``TX_FIXED`` solves for D_R, ``RX_FIXED`` for D_T.
    fixed_aperture_m : float
        Diameter of the fixed side.
    target_db : float
        Largest acceptable attenuation.
    bounds : tuple of float
        Search interval for the free aperture, m.
    chain : OpticalChain, optional
        Template for transmittances and losses; apertures are replaced.

    Returns
    -------
    float
        The free aperture diameter, within 1 mm.

    Raises
    ------
    Unachievable
        If even the upper bound misses the target.
    """
    fixed_side = FixedSide(fixed_side)
    lo, hi = bounds
    if not 0 < lo < hi:
        raise ArgumentError("bounds must satisfy 0 < lower < upper")
    template = chain or OpticalChain.from_defaults(DefaultParams(), lo, lo)

    def excess(free):
        if fixed_side is FixedSide.TX_FIXED:
            apertures = dict(tx_aperture_m=fixed_aperture_m, rx_aperture_m=free)
        else:
            apertures = dict(tx_aperture_m=free, rx_aperture_m=fixed_aperture_m)
        trial = OpticalChain(
            trans_tx=template.trans_tx, trans_rx=template.trans_rx,
            pointing_loss=template.pointing_loss,
            additional_loss_db=template.additional_loss_db, **apertures
        )
        budget = attenuation_db(kind, trial, wavelength_m, geometry, r0_m,
                                absorption, clamp=clamp)
        return budget.total_db - target_db

    if excess(hi) > 0:
        raise Unachievable(
            f"{LinkKind(kind).value} link misses {target_db} dB even with a "
            f"{hi} m aperture"
        )
    if excess(lo) <= 0:
        return lo
    free = brentq(excess, lo, hi, xtol=1e-6)
    logger.debug("Minimum aperture %.4f m for %.1f dB", free, target_db)
    return free
