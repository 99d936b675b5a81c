#!/usr/bin/env python3
# -*- coding: utf-8 -*-
#
# scenario_file.py
#
###############################################################################
# DEPENDENCIES
###############################################################################
import configparser
from dataclasses import replace
import logging

from src.constants import WavelengthChoice
from src.constants import defaults
from src.errors import ScenarioError
from src.geometry import CircularOrbit
from src.geometry import EllipticalOrbit
from src.scenarios.scenario import Scenario
from src.scenarios.scenario import SweepSpec
from src.scenarios.scenario import platform_orbit


###############################################################################
# DOCUMENTATION
###############################################################################
__doc__ = """
Read scenario files.

A scenario file is INI text with four sections. Every key must be one of
the names below; anything else is an error. ``[scenario]`` and ``[sweep]``
are required.

.. code-block:: ini

    [scenario]
    name = leo-teleport
    mode = teleportation          ; or qkd
    link_kind = downlink          ; uplink, downlink, intersatellite
    platform = LEO                ; or altitude_m, or perigee_alt_m + apogee_alt_m
    wavelength = 785              ; nm, 785 or 1550

    [optics]
    tx_aperture_m = 0.25
    rx_aperture_m = 1.0

    [hardware]
    eta_eps = 0.5
    t1_s = 0.1

    [sweep]
    variable = elevation          ; elevation (deg), ground_distance (m), total_db
    start = 90
    stop = 0
    steps = 91

Keys of :class:`~src.constants.DefaultParams` override the table; the
others set :class:`~src.scenarios.scenario.Scenario` fields.
"""
__all__ = [
    "SECTION_KEYS",
    "load_scenario",
    "parse_scenario",
]

logger = logging.getLogger(__name__)


###############################################################################
# GLOBALS
###############################################################################
SECTION_KEYS = {
    'scenario': {
        'name', 'mode', 'link_kind', 'platform', 'altitude_m',
        'perigee_alt_m', 'apogee_alt_m', 'wavelength', 'distance_kind',
        'ground_distance_m', 'protocol', 'schemes', 'clamp_absorption',
        'hap_altitude_m', 'leo_altitude_m', 'meo_altitude_m',
        'geo_altitude_m', 'heo_perigee_m', 'heo_apogee_m',
    },
    'optics': {
        'tx_aperture_m', 'rx_aperture_m', 'trans_tx', 'trans_rx',
        'pointing_loss', 'pointing_loss_intersatellite', 'optical_loss_db',
        'a_atm_vertical_db', 'fried_r0_m',
    },
    'hardware': {
        'eta_eps', 'multiplex_factor', 'fixed_ndif', 'rep_rate_hz', 'eta_sps',
        'eta_det', 'eta_mem', 'eta_qnd', 't1_s', 'ndif_fixed',
    },
    'sweep': {'variable', 'start', 'stop', 'steps'},
}
'''dict : Allowed keys per section.'''

PARAM_KEYS = {
    'hap_altitude_m', 'leo_altitude_m', 'meo_altitude_m', 'geo_altitude_m',
    'heo_perigee_m', 'heo_apogee_m', 'trans_tx', 'trans_rx', 'pointing_loss',
    'pointing_loss_intersatellite', 'optical_loss_db', 'a_atm_vertical_db',
    'fried_r0_m', 'rep_rate_hz', 'eta_sps', 'eta_det', 'eta_mem', 'eta_qnd',
    't1_s',
}
'''set : Keys that override the parameter table (all floats).'''

REQUIRED_SECTIONS = ('scenario', 'sweep')
'''tuple : Sections every file must have.'''


###############################################################################
# FUNCTIONS
###############################################################################
def _float(section, key):
    try:
        return section.getfloat(key)
    except ValueError as e:
        raise ScenarioError(f"[{section.name}] {key}: {e}") from e


def _int(section, key):
    try:
        return section.getint(key)
    except ValueError as e:
        raise ScenarioError(f"[{section.name}] {key}: {e}") from e


def _bool(section, key):
    try:
        return section.getboolean(key)
    except ValueError as e:
        raise ScenarioError(f"[{section.name}] {key}: {e}") from e


def _check_keys(parser):
    unknown = set(parser.sections()) - set(SECTION_KEYS)
    if unknown:
        raise ScenarioError(f"Unknown section(s): {sorted(unknown)}")
    for name in REQUIRED_SECTIONS:
        if not parser.has_section(name):
            raise ScenarioError(f"Missing [{name}] section")
    for name in parser.sections():
        extra = set(parser[name]) - SECTION_KEYS[name]
        if extra:
            raise ScenarioError(f"Unknown key(s) in [{name}]: {sorted(extra)}")


def _params(parser):
    head = parser['scenario']
    choice = WavelengthChoice.NM785
    if 'wavelength' in head:
        try:
            choice = WavelengthChoice.from_nm(_float(head, 'wavelength'))
        except ValueError as e:
            raise ScenarioError(str(e)) from e
    overrides = {}
    for name in parser.sections():
        for key in parser[name]:
            if key in PARAM_KEYS:
                overrides[key] = _float(parser[name], key)
    if parser.has_section('hardware') and 'ndif_fixed' in parser['hardware']:
        overrides['ndif_fixed'] = _int(parser['hardware'], 'ndif_fixed')
    try:
        return replace(defaults(choice), **overrides)
    except ValueError as e:
        raise ScenarioError(str(e)) from e


def _orbit(head, params):
    given = [k for k in ('platform', 'altitude_m', 'perigee_alt_m') if k in head]
    if len(given) > 1:
        raise ScenarioError(
            "[scenario] give one of platform, altitude_m or perigee_alt_m"
        )
    try:
        if 'altitude_m' in head:
            return CircularOrbit(_float(head, 'altitude_m'))
        if 'perigee_alt_m' in head:
            if 'apogee_alt_m' not in head:
                raise ScenarioError("[scenario] perigee_alt_m needs apogee_alt_m")
            return EllipticalOrbit(_float(head, 'perigee_alt_m'),
                                   _float(head, 'apogee_alt_m'))
        if 'apogee_alt_m' in head:
            raise ScenarioError("[scenario] apogee_alt_m needs perigee_alt_m")
        return platform_orbit(head.get('platform', 'LEO'), params)
    except ScenarioError:
        raise
    except ValueError as e:
        raise ScenarioError(str(e)) from e


def parse_scenario(text):
    """Build a :class:`Scenario` from scenario-file text.

    Raises
    ------
    ScenarioError
        On syntax errors, unknown sections or keys, missing sections and
        values that fail validation.
    """
    parser = configparser.ConfigParser(interpolation=None,
                                       inline_comment_prefixes=(';', '#'))
    parser.optionxform = str
    try:
        parser.read_string(text)
    except configparser.Error as e:
        raise ScenarioError(f"Malformed scenario file: {e}") from e
    _check_keys(parser)

    params = _params(parser)
    head = parser['scenario']
    if 'name' not in head:
        raise ScenarioError("[scenario] name is required")

    fields = {
        'name': head['name'],
        'params': params,
        'orbit': _orbit(head, params),
    }
    for key in ('mode', 'link_kind', 'distance_kind', 'protocol'):
        if key in head:
            fields[key] = head[key].strip().lower()
    if 'schemes' in head:
        fields['schemes'] = tuple(
            s.strip().lower() for s in head['schemes'].split(',') if s.strip()
        )
    if 'ground_distance_m' in head:
        fields['ground_distance_m'] = _float(head, 'ground_distance_m')
    if 'clamp_absorption' in head:
        fields['clamp_absorption'] = _bool(head, 'clamp_absorption')

    if parser.has_section('optics'):
        optics = parser['optics']
        for key in ('tx_aperture_m', 'rx_aperture_m'):
            if key in optics:
                fields[key] = _float(optics, key)
    if parser.has_section('hardware'):
        hardware = parser['hardware']
        if 'eta_eps' in hardware:
            fields['eta_eps'] = _float(hardware, 'eta_eps')
        if 'multiplex_factor' in hardware:
            fields['multiplex_factor'] = _int(hardware, 'multiplex_factor')
        if 'fixed_ndif' in hardware:
            fields['fixed_ndif'] = _bool(hardware, 'fixed_ndif')

    sweep = parser['sweep']
    missing = {'variable', 'start', 'stop', 'steps'} - set(sweep)
    if missing:
        raise ScenarioError(f"[sweep] missing key(s): {sorted(missing)}")
    try:
        fields['sweep'] = SweepSpec(
            variable=sweep['variable'].strip().lower(),
            start=_float(sweep, 'start'),
            stop=_float(sweep, 'stop'),
            steps=_int(sweep, 'steps'),
        )
        scenario = Scenario(**fields)
    except ScenarioError:
        raise
    except ValueError as e:
        raise ScenarioError(str(e)) from e
    logger.info("Parsed scenario '%s'", scenario.name)
    return scenario


def load_scenario(path):
    """Read and parse the scenario file at ``path``."""
    try:
        with open(path, encoding="utf-8") as f:
            text = f.read()
    except OSError as e:
        raise ScenarioError(f"Cannot read scenario file {path}: {e}") from e
    return parse_scenario(text)
