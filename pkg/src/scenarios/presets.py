#!/usr/bin/env python3
# -*- coding: utf-8 -*-
#
# presets.py
#
###############################################################################
# DEPENDENCIES
###############################################################################
from dataclasses import dataclass, replace
import logging
import math

from src.atmosphere import AbsorptionTable
from src.constants import DefaultParams
from src.geometry import single_link
from src.link_budget import LinkKind
from src.link_budget import OpticalChain
from src.link_budget import attenuation_db
from src.link_budget import double_link_probability
from src.rates import HardwareParams
from src.rates import SchemeKind
from src.rates import teleportation_rate
from src.rates import time_for_events
from src.scenarios.scenario import Scenario
from src.scenarios.scenario import ScenarioMode
from src.scenarios.scenario import SweepSpec
from src.scenarios.scenario import SweepVariable
from src.scenarios.scenario import platform_orbit


###############################################################################
# DOCUMENTATION
###############################################################################
__doc__ = """
Named scenario presets and the GEO teleportation headline report.

The headline fixes a GEO satellite at 36,000 km in the zenith of both
stations, 0.5 m transmitters, 2 m receivers, 810 nm light, and an SPDC pair
source pumped at 1 GHz with 5 % pair and heralding efficiency. The
deterministic single-photon variants replace the SPDC heralding efficiency
with a quantum-dot source efficiency.
"""
__all__ = [
    "HeadlineReport",
    "geo_teleport_headline",
    "preset_scenarios",
]

logger = logging.getLogger(__name__)


###############################################################################
# GLOBALS
###############################################################################
HEADLINE = {
    'altitude_m': 3.6e7,
    'wavelength_m': 810e-9,
    'tx_aperture_m': 0.5,
    'rx_aperture_m': 2.0,
    'vertical_absorption_db': 1.0,
    'spdc_efficiency': 0.05,
    'rep_rate_hz': 1e9,
    'events': 1000,
    'sps_efficiencies': (0.75, 0.5),
}
'''dict : Fixed inputs of the GEO teleportation headline.'''

REFERENCE_HEADLINE = {
    'link_db': 40.0,
    'rate_per_s': 0.018,
    'spdc_hours': 16.0,
    'sps_hours': 1.5,
    'sps_gain': 10.0,
}
'''dict : Published headline figures the report is compared against.'''

SOURCE_EFFICIENCIES = {
    'eps1': 0.01,
    'eps50': 0.50,
}
'''dict : Pair-source efficiencies of the teleportation presets.'''


###############################################################################
# CLASSES
###############################################################################
@dataclass(frozen=True)
class HeadlineReport:
    """GEO teleportation figures.

    Attributes
    ----------
    link_db : float
        Attenuation of each of the two downlinks.
    p_ave : float
        Probability both photons of a pair arrive.
    spdc_rate_per_s, spdc_time_s : float
        Memoryless four-fold rate with the SPDC source and the time for 1000
        events.
    sps_variants : tuple
        ``(eta_sps, rate_per_s, time_s, gain)`` per deterministic source.
    """
    link_db: float
    p_ave: float
    spdc_rate_per_s: float
    spdc_time_s: float
    sps_variants: tuple
    budget: object = None

    def as_dict(self):
        return {
            'link_db': self.link_db,
            'budget': self.budget.as_dict() if self.budget else None,
            'p_ave': self.p_ave,
            'spdc_rate_per_s': self.spdc_rate_per_s,
            'spdc_time_s': self.spdc_time_s,
            'spdc_time_h': self.spdc_time_s / 3600.0,
            'sps_variants': [
                {'eta_sps': e, 'rate_per_s': r, 'time_s': t,
                 'time_h': t / 3600.0, 'gain': g}
                for e, r, t, g in self.sps_variants
            ],
            'reference': dict(REFERENCE_HEADLINE),
        }


###############################################################################
# FUNCTIONS
###############################################################################
def geo_teleport_headline():
    """Per-link loss, teleportation rate and accumulation times for GEO.

    Returns
    -------
    HeadlineReport
    """
    cfg = HEADLINE
    chain = OpticalChain(cfg['tx_aperture_m'], cfg['rx_aperture_m'],
                         trans_tx=0.8, trans_rx=0.8, pointing_loss=0.2,
                         additional_loss_db=6.0)
    geometry = single_link(cfg['altitude_m'], 0.5 * math.pi)
    table = AbsorptionTable.from_mapping(
        {cfg['wavelength_m']: cfg['vertical_absorption_db']}
    )
    budget = attenuation_db(LinkKind.DOWNLINK, chain, cfg['wavelength_m'],
                            geometry, math.inf, table)
    p_ave = double_link_probability(budget.total_db)

    spdc = HardwareParams(rep_rate_hz=cfg['rep_rate_hz'],
                          eta_eps=cfg['spdc_efficiency'],
                          eta_sps=cfg['spdc_efficiency'])
    rate = teleportation_rate(SchemeKind.MEMORYLESS, spdc, p_ave)
    events = cfg['events']

    variants = []
    for eta_sps in cfg['sps_efficiencies']:
        sps_rate = teleportation_rate(SchemeKind.MEMORYLESS,
                                      replace(spdc, eta_sps=eta_sps), p_ave)
        # rates are linear in the source efficiency
        gain = eta_sps / cfg['spdc_efficiency']
        variants.append((eta_sps, sps_rate, time_for_events(sps_rate, events),
                         gain))

    logger.info("GEO headline: %.2f dB per link, %.4f /s", budget.total_db,
                rate)
    return HeadlineReport(
        link_db=budget.total_db,
        p_ave=p_ave,
        spdc_rate_per_s=rate,
        spdc_time_s=time_for_events(rate, events),
        sps_variants=tuple(variants),
        budget=budget,
    )


def _elevation_sweep():
    return SweepSpec(SweepVariable.ELEVATION, 90.0, 0.0, 91)


def preset_scenarios(params=None):
    """Named presets keyed by scenario name.

    -   ``<orbit>-teleport-eps1`` / ``-eps50``: double-downlink
        teleportation over elevation for LEO, MEO and GEO.
    -   ``leo-teleport-distance``: the LEO double downlink over the
        straight-line station separation up to 6,000 km.
    -   ``<platform>-qkd-<uplink|downlink>``: single-link QKD over
        elevation for HAP, LEO, MEO, GEO and HEO.
    -   ``intersatellite-qkd``: QKD over the link loss.
    """
    params = params or DefaultParams()
    presets = {}
    for label in ('LEO', 'MEO', 'GEO'):
        for tag, eta_eps in SOURCE_EFFICIENCIES.items():
            name = f"{label.lower()}-teleport-{tag}"
            presets[name] = Scenario(
                name=name, orbit=platform_orbit(label, params), params=params,
                eta_eps=eta_eps, sweep=_elevation_sweep(),
            )
    presets['leo-teleport-distance'] = Scenario(
        name='leo-teleport-distance', orbit=platform_orbit('LEO', params),
        params=params, distance_kind='chord',
        sweep=SweepSpec(SweepVariable.GROUND_DISTANCE, 0.0, 6.0e6, 121),
    )
    for label in ('HAP', 'LEO', 'MEO', 'GEO', 'HEO'):
        for kind in (LinkKind.UPLINK, LinkKind.DOWNLINK):
            name = f"{label.lower()}-qkd-{kind.value}"
            presets[name] = Scenario(
                name=name, mode=ScenarioMode.QKD, link_kind=kind,
                orbit=platform_orbit(label, params), params=params,
                sweep=_elevation_sweep(),
            )
    presets['intersatellite-qkd'] = Scenario(
        name='intersatellite-qkd', mode=ScenarioMode.QKD,
        link_kind=LinkKind.INTERSATELLITE, orbit=platform_orbit('LEO', params),
        params=params, sweep=SweepSpec(SweepVariable.TOTAL_DB, 20.0, 80.0, 61),
    )
    return presets
