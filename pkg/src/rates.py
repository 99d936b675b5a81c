#!/usr/bin/env python3
# -*- coding: utf-8 -*-
#
# rates.py
#
###############################################################################
# DEPENDENCIES
###############################################################################
from dataclasses import dataclass
import enum
import logging
import math
from typing import NamedTuple

import numpy as np

from src.constants import EARTH
from src.constants import QKD_PASS_WINDOWS_S
from src.constants import QKD_REQUIRED_DETECTIONS
from src.errors import ArgumentError
from src.errors import DegenerateRate
from src.errors import InfeasibleRate
from src.errors import SchemeMismatch
from src.link_budget import link_probability_db


###############################################################################
# DOCUMENTATION
###############################################################################
__doc__ = """
Teleportation, entanglement-swapping and QKD performance models.

**Assumptions**

-   No noise: dark counts and background light are zero, so every rate is a
    product of efficiencies and survival probabilities.
-   Classical messages travel the straight ground distance ``L0`` at the
    speed of light. Stored qubits decay as ``exp(-dt / T1)``.
-   Both elementary links of the two-link repeater run attempts every
    ``T0 = 1 / R_s`` with independent geometric attempt counts starting at
    one, so the first attempt may succeed.
-   A memory lifetime of ``math.inf`` switches decay off.

**Logic**

The four memory configurations share the product
``p_ave * P_b * R_s * eta_eps`` and differ by the memory, QND and waiting
factors of each station.

For the repeater, ``n_dif = |n_a - n_b|`` is the number of attempts that the
faster link waits in memory. Its distribution is::

    P(0) = p / (2 - p),    P(n) = 2 p (1 - p)^n / (2 - p),  n >= 1

and the expected decay ``<exp(-2 n_dif T0 / T1)>`` has a geometric-series
closed form. The preparation time is set by the slower link, so the mean
distribution time lies between ``T0 <n_min> / <p_s>`` and
``T0 <n_max> / <p_s>``; the rate uses the average of both bounds.
"""
__all__ = [
    "ClassicalComms",
    "HardwareParams",
    "Protocol",
    "RepeaterBounds",
    "SchemeKind",
    "bsm_probability",
    "decay_expectation",
    "decay_expectation_direct",
    "expected_order_statistics",
    "hardware_defaults",
    "ndif_pmf",
    "ndif_tail",
    "pass_window_verdict",
    "qkd_time_required",
    "repeater_rate_bounds",
    "repeater_teleportation_rate",
    "swap_probability",
    "teleportation_rate",
    "time_for_events",
]

logger = logging.getLogger(__name__)


###############################################################################
# GLOBALS
###############################################################################
DIRECT_SUM_TAIL = 1e-12
'''float : Relative tail at which the direct n_dif summation is truncated.'''

_PROTOCOL_ALIASES = {
    'wcp': 'DecoyWCP',
    'decoy': 'DecoyWCP',
    'decoywcp': 'DecoyWCP',
    'eps': 'EPSorSPS',
    'sps': 'EPSorSPS',
    'epsorsps': 'EPSorSPS',
}
'''dict : Lower-case protocol labels accepted on the command line.'''


###############################################################################
# CLASSES
###############################################################################
@dataclass(frozen=True)
class HardwareParams:
    """Source, detector and memory figures of the teleportation stations.

    Attributes
    ----------
    rep_rate_hz : float
        Source repetition rate R_s; also sets ``T0 = 1 / R_s``.
    eta_eps : float
        Pair-generation probability per pulse of the entangled-pair source.
    eta_sps : float
        Single-photon source efficiency.
    eta_det : float
        Detector efficiency.
    eta_store, eta_retrieve : float
        Memory storage and retrieval efficiencies.
    eta_qnd : float
        QND heralding efficiency.
    t1_s : float
        Memory lifetime T1; ``math.inf`` for a perfect memory.
    multiplex_factor : int
        Number of channels used in parallel.
    """
    rep_rate_hz: float = 1e9
    eta_eps: float = 0.5
    eta_sps: float = 0.75
    eta_det: float = 0.90
    eta_store: float = math.sqrt(0.5)
    eta_retrieve: float = math.sqrt(0.5)
    eta_qnd: float = 0.90
    t1_s: float = 0.100
    multiplex_factor: int = 1

    def __post_init__(self):
        for name in ("eta_eps", "eta_sps", "eta_det", "eta_store",
                     "eta_retrieve", "eta_qnd"):
            val = getattr(self, name)
            if not 0.0 < val <= 1.0:
                raise ArgumentError(f"{name} must lie in (0, 1], got {val}")
        if not (math.isfinite(self.rep_rate_hz) and self.rep_rate_hz > 0):
            raise ArgumentError("rep_rate_hz must be finite and positive")
        if not self.t1_s > 0:
            raise ArgumentError("t1_s must be positive")
        if int(self.multiplex_factor) != self.multiplex_factor \
                or self.multiplex_factor < 1:
            raise ArgumentError("multiplex_factor must be a positive integer")

    @property
    def t0_s(self):
        """Attempt period ``1 / R_s``."""
        return 1.0 / self.rep_rate_hz

    @classmethod
    def from_defaults(cls, params, eta_eps=0.5, multiplex_factor=1):
        """Hardware figures of a :class:`~src.constants.DefaultParams` table."""
        return cls(
            rep_rate_hz=params.rep_rate_hz,
            eta_eps=eta_eps,
            eta_sps=params.eta_sps,
            eta_det=params.eta_det,
            eta_store=params.eta_store,
            eta_retrieve=params.eta_retrieve,
            eta_qnd=params.eta_qnd,
            t1_s=params.t1_s,
            multiplex_factor=multiplex_factor,
        )


@dataclass(frozen=True)
class ClassicalComms:
    """Classical signalling between the two ground stations."""
    ground_distance_m: float = 0.0
    light_speed_ms: float = EARTH.light_speed_ms

    def __post_init__(self):
        if not self.ground_distance_m >= 0:
            raise ArgumentError("ground_distance_m must be nonnegative")

    @property
    def dt0_s(self):
        """Alice-to-Bob communication time."""
        return self.ground_distance_m / self.light_speed_ms

    @property
    def dt1_s(self):
        """Time to send the BSM result."""
        return self.ground_distance_m / self.light_speed_ms


class SchemeKind(enum.Enum):
    MEMORYLESS = "memoryless"
    ONE_MEMORY_ALICE = "one-memory-alice"
    ONE_MEMORY_BOB = "one-memory-bob"
    TWO_MEMORY = "two-memory"
    TWO_LINK_REPEATER = "two-link-repeater"


class Protocol(enum.Enum):
    """QKD source protocols and the detections they need for a key."""
    DECOY_WCP = "DecoyWCP"
    EPS_OR_SPS = "EPSorSPS"

    @property
    def required_detections(self):
        return QKD_REQUIRED_DETECTIONS[self.value]

    @classmethod
    def from_label(cls, label):
        if isinstance(label, cls):
            return label
        key = _PROTOCOL_ALIASES.get(str(label).strip().lower())
        if key is None:
            raise ArgumentError(
                f"Unknown protocol {label!r}; use one of "
                f"{sorted(_PROTOCOL_ALIASES)}"
            )
        return cls(key)


class RepeaterBounds(NamedTuple):
    """Two-link repeater distribution rates, /s."""
    lower: float
    upper: float
    midpoint: float

    @property
    def time_lower_s(self):
        return 1.0 / self.upper

    @property
    def time_upper_s(self):
        return 1.0 / self.lower


###############################################################################
# FUNCTIONS
###############################################################################
def hardware_defaults(params, eta_eps=0.5, multiplex_factor=1):
    """Alias of :meth:`HardwareParams.from_defaults`."""
    return HardwareParams.from_defaults(params, eta_eps, multiplex_factor)


def _check_probability(p, name="p", allow_zero=False):
    ok = 0.0 <= p <= 1.0 if allow_zero else 0.0 < p <= 1.0
    if not ok:
        bound = "[0, 1]" if allow_zero else "(0, 1]"
        raise ArgumentError(f"{name} must lie in {bound}, got {p}")


def _decay(dt_s, t1_s):
    return math.exp(-dt_s / t1_s)


def bsm_probability(hw, halved=False):
    """Success probability of the Bell-state measurement.

    ``eta_sps * eta_det^2 / 2``, or ``/ 4`` for the one-memory-Alice scheme.
    """
    pb = hw.eta_sps * hw.eta_det**2 / 2.0
    return pb / 2.0 if halved else pb


def teleportation_rate(scheme, hw, p_ave, comms=None):
    """Teleportation rate of a single-satellite scheme.

    Parameters
    ----------
    scheme : SchemeKind
        Any scheme except ``TWO_LINK_REPEATER``.
    hw : HardwareParams
    p_ave : float
        Probability that both photons of a pair reach the stations.
    comms : ClassicalComms, optional
        Defaults to co-located stations (no waiting).

    Returns
    -------
    float
        Teleportations per second.

    Raises
    ------
    SchemeMismatch
        For the two-link repeater, see :func:`repeater_teleportation_rate`.
    """
    scheme = SchemeKind(scheme)
    _check_probability(p_ave, "p_ave", allow_zero=True)
    comms = comms or ClassicalComms()
    wait0 = _decay(comms.dt0_s, hw.t1_s)
    wait1 = _decay(comms.dt1_s, hw.t1_s)
    memory = hw.eta_store * hw.eta_retrieve * hw.eta_qnd
    base = p_ave * hw.rep_rate_hz * hw.eta_eps * hw.multiplex_factor

    if scheme is SchemeKind.MEMORYLESS:
        return base * bsm_probability(hw)
    if scheme is SchemeKind.ONE_MEMORY_ALICE:
        return base * bsm_probability(hw, halved=True) * memory * wait0
    if scheme is SchemeKind.ONE_MEMORY_BOB:
        return base * bsm_probability(hw) * memory * wait0 * wait1
    if scheme is SchemeKind.TWO_MEMORY:
        return base * bsm_probability(hw) * memory**2 * wait0**2 * wait1
    raise SchemeMismatch(
        "two-link repeater rates come from repeater_teleportation_rate"
    )


def ndif_pmf(p, n):
    """Probability that the two elementary links differ by ``n`` attempts.

    Parameters
    ----------
    p : float
        Per-attempt success probability of each link, in (0, 1].
    n : int or array_like of int
        Nonnegative attempt difference(s).
    """
    _check_probability(p)
    n = np.asarray(n)
    if np.any(n < 0):
        raise ArgumentError("n must be nonnegative")
    val = np.where(
        n == 0,
        p / (2.0 - p),
        2.0 * p * (1.0 - p) ** n.astype(float) / (2.0 - p),
    )
    return float(val) if val.ndim == 0 else val


def ndif_tail(p, n):
    """``P(n_dif >= n)``, closed form."""
    _check_probability(p)
    if n < 0:
        raise ArgumentError("n must be nonnegative")
    if n == 0:
        return 1.0
    return 2.0 * (1.0 - p) ** n / (2.0 - p)


def decay_expectation(p, t0_s, t1_s):
    """Expected memory decay ``<exp(-2 n_dif T0 / T1)>``.

    Closed form with the per-attempt factor ``q = exp(-2 T0 / T1)``::

        p / (2 - p) + 2 p (1 - p) q / ((2 - p) (1 - (1 - p) q))
    """
    _check_probability(p)
    if t0_s < 0 or not t1_s > 0:
        raise ArgumentError("need t0_s >= 0 and t1_s > 0")
    x = 2.0 * t0_s / t1_s
    if p == 1.0 or x == 0.0:
        return 1.0
    q = math.exp(-x)
    # 1 - (1 - p) q without cancellation for small p and small x
    denom = -math.expm1(math.log1p(-p) - x)
    return p / (2.0 - p) + 2.0 * p * (1.0 - p) * q / ((2.0 - p) * denom)


def decay_expectation_direct(p, t0_s, t1_s, tail=DIRECT_SUM_TAIL):
    """:func:`decay_expectation` by summing the n_dif distribution.

    The sum stops once the remaining weighted mass is below ``tail``
    relative to the result.
    """
    _check_probability(p)
    if t0_s < 0 or not t1_s > 0:
        raise ArgumentError("need t0_s >= 0 and t1_s > 0")
    if p == 1.0:
        return 1.0
    x = 2.0 * t0_s / t1_s
    ratio = (1.0 - p) * math.exp(-x)
    if ratio <= 0.0:
        terms = 1
    else:
        terms = max(1, math.ceil(math.log(tail * (1.0 - ratio)) / math.log(ratio)))
    n = np.arange(terms + 1)
    logger.debug("Direct n_dif sum over %d terms", n.size)
    return float(np.sum(ndif_pmf(p, n) * np.exp(-x * n)))


def swap_probability(hw, p, t0_s=None, n_dif=None):
    """Average entanglement-swapping success probability ``<p_s>``.

    Parameters
    ----------
    hw : HardwareParams
    p : float
        Per-attempt success probability of each elementary link.
    t0_s : float, optional
        Attempt period, defaults to ``hw.t0_s``.
    n_dif : int, optional
        Evaluate the decay at a fixed attempt difference instead of
        averaging over its distribution.
    """
    t0_s = hw.t0_s if t0_s is None else t0_s
    prefactor = (
        0.5 * hw.eta_det**2 * hw.eta_store**4 * hw.eta_retrieve**2
        * hw.eta_qnd**4
    )
    if n_dif is not None:
        if n_dif < 0:
            raise ArgumentError("n_dif must be nonnegative")
        return prefactor * math.exp(-2.0 * n_dif * t0_s / hw.t1_s)
    return prefactor * decay_expectation(p, t0_s, hw.t1_s)


def expected_order_statistics(p):
    """``(<n_min>, <n_max>)`` of two independent geometric(p) counts."""
    _check_probability(p)
    n_min = 1.0 / (p * (2.0 - p))
    return n_min, 2.0 / p - n_min


def repeater_rate_bounds(hw, p, t0_s=None, n_dif=None):
    """Distribution-rate band of the two-link repeater.

    Parameters
    ----------
    hw : HardwareParams
    p : float
        Per-attempt pair probability of one elementary link (length L0/2).
    t0_s : float, optional
        Attempt period, defaults to ``hw.t0_s``.
    n_dif : int, optional
        Fixed attempt difference for :func:`swap_probability`.

    Returns
    -------
    RepeaterBounds
        ``lower`` and ``upper`` rates from the two time bounds and the
        ``midpoint`` rate, the reciprocal of their average time.

    Raises
    ------
    DegenerateRate
        If ``p`` is zero.
    """
    if p == 0:
        raise DegenerateRate("elementary links never succeed (p = 0)")
    _check_probability(p)
    t0_s = hw.t0_s if t0_s is None else t0_s
    ps = swap_probability(hw, p, t0_s, n_dif=n_dif)
    n_min, n_max = expected_order_statistics(p)
    time_lo = t0_s * n_min / ps
    time_hi = t0_s * n_max / ps
    return RepeaterBounds(
        lower=1.0 / time_hi,
        upper=1.0 / time_lo,
        midpoint=2.0 / (time_lo + time_hi),
    )


def repeater_teleportation_rate(hw, p_link, comms=None, which="midpoint",
                                n_dif=None):
    """Teleportation rate through the two-link repeater.

    ``<R_r> * eta_r^2 * P_b * exp(-2 dt0 / T1) * exp(-dt1 / T1)``, times the
    multiplex factor. ``which`` picks the ``lower``, ``upper`` or
    ``midpoint`` distribution rate.
    """
    comms = comms or ClassicalComms()
    bounds = repeater_rate_bounds(hw, p_link, n_dif=n_dif)
    try:
        distribution = getattr(bounds, which)
    except AttributeError:
        raise ArgumentError(f"which must be lower, upper or midpoint, got {which}")
    return (
        distribution * hw.eta_retrieve**2 * bsm_probability(hw)
        * _decay(comms.dt0_s, hw.t1_s) ** 2 * _decay(comms.dt1_s, hw.t1_s)
        * hw.multiplex_factor
    )


def time_for_events(rate_per_s, n_events):
    """Accumulation time for ``n_events`` at ``rate_per_s``.

    Raises
    ------
    InfeasibleRate
        If the rate is zero and events are requested.
    """
    if n_events < 0:
        raise ArgumentError("n_events must be nonnegative")
    if rate_per_s < 0:
        raise ArgumentError("rate_per_s must be nonnegative")
    if n_events == 0:
        return 0.0
    if rate_per_s == 0:
        raise InfeasibleRate(f"{n_events} events never accumulate at rate 0")
    return n_events / rate_per_s


def qkd_time_required(total_link_db, protocol, hw):
    """Time to collect the detections a QKD key needs.

    Parameters
    ----------
    total_link_db : float
        End-to-end loss; double links pass the sum of both links.
    protocol : Protocol or str
    hw : HardwareParams
        Supplies the repetition rate and multiplex factor.

    Returns
    -------
    float
        Seconds.
    """
    protocol = Protocol.from_label(protocol)
    detected = (
        hw.rep_rate_hz * hw.multiplex_factor
        * link_probability_db(total_link_db)
    )
    return protocol.required_detections / detected


def pass_window_verdict(orbit_class, seconds):
    """Whether ``seconds`` fits in the pass window of ``orbit_class``.

    The windows are 120 s for LEO, 20 min for MEO and 1 h for GEO, HEO and
    HAP.
    """
    key = str(orbit_class).upper()
    if key not in QKD_PASS_WINDOWS_S:
        raise ArgumentError(
            f"Unknown orbit class {orbit_class!r}; use one of "
            f"{sorted(QKD_PASS_WINDOWS_S)}"
        )
    return bool(seconds <= QKD_PASS_WINDOWS_S[key])
