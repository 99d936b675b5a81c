#!/usr/bin/env python3
# -*- coding: utf-8 -*-
#
# sweep.py
#
###############################################################################
# DEPENDENCIES
###############################################################################
from dataclasses import dataclass, field
import json
import logging
import math
import os
import warnings

import numpy as np
import pandas as pd

import src
from src.atmosphere import scaled_r0
from src.constants import EARTH
from src.constants import LOW_ELEVATION_RAD
from src.errors import ArgumentError, FarFieldViolation, InfeasibleRate
from src.geometry import central_angle_from_elevation
from src.geometry import elevation_from_central_angle
from src.geometry import ground_distance
from src.geometry import half_central_angle
from src.geometry import single_link
from src.geometry import symmetric_double_link
from src.link_budget import LinkKind
from src.link_budget import attenuation_db
from src.link_budget import double_link_probability
from src.link_budget import link_probability_db
from src.rates import ClassicalComms
from src.rates import SchemeKind
from src.rates import pass_window_verdict
from src.rates import qkd_time_required
from src.rates import repeater_teleportation_rate
from src.rates import teleportation_rate
from src.rates import time_for_events
from src.scenarios.scenario import ScenarioMode
from src.scenarios.scenario import SweepVariable


###############################################################################
# DOCUMENTATION
###############################################################################
__doc__ = """
Sweep a scenario over elevation, ground distance or link loss and write the
rows to CSV and JSON.

**Assumptions**

-   Rows with negative elevation are infeasible: their losses are NaN,
    rates are zero and accumulation times infinite. Rows below 20 deg
    elevation are flagged as shaded (possible but impractical).
-   Absorption (and the uplink r0) is clamped at 70 deg zenith when the
    scenario allows it; the row carries the clamp flags.
-   The two-link repeater uses two satellites, each serving a double
    downlink over half the ground separation. Its column is NaN in
    ``total_db`` sweeps, which have no geometry.

**Logic**

Each sweep point is evaluated independently. Rows are sorted by sweep value
and carry the full ``param_*`` snapshot so any row can be recomputed.
The column order is fixed:

    sweep_variable, sweep_value, elevation_deg, zenith_deg,
    ground_distance_m, slant_range_m, link_db, total_db, <mode columns>,
    infeasible_horizon, low_elevation_shaded, clamped, clamp_flags,
    far_field_ok, param_*

where the mode columns are ``p_ave``, ``rate_<scheme>`` and
``time_1000_<scheme>_s`` for teleportation and ``p_link``,
``qkd_time_s``, ``qkd_window_ok`` for QKD.
"""
__all__ = [
    "SweepResult",
    "run_sweep",
    "scheme_column",
    "sweep_columns",
    "write_sweep",
]

logger = logging.getLogger(__name__)


###############################################################################
# GLOBALS
###############################################################################
EVENTS_PER_TELEPORTATION = 1000
'''int : Detected events needed to verify one teleportation run.'''

BASE_COLUMNS = [
    'sweep_variable',
    'sweep_value',
    'elevation_deg',
    'zenith_deg',
    'ground_distance_m',
    'slant_range_m',
    'link_db',
    'total_db',
]
'''list : Leading columns shared by every sweep.'''

FLAG_COLUMNS = [
    'infeasible_horizon',
    'low_elevation_shaded',
    'clamped',
    'clamp_flags',
    'far_field_ok',
]
'''list : Per-row flags, written after the mode columns.'''


###############################################################################
# CLASSES
###############################################################################
@dataclass
class SweepResult:
    """Rows of a sweep plus the metadata needed to reproduce them."""
    scenario_name: str
    rows: pd.DataFrame
    metadata: dict = field(default_factory=dict)

    def to_frame(self):
        return self.rows.copy()


###############################################################################
# FUNCTIONS
###############################################################################
def scheme_column(scheme):
    """Column suffix of a scheme, e.g. ``two_memory``."""
    return SchemeKind(scheme).value.replace("-", "_")


def sweep_columns(scenario):
    """Result column names of ``scenario`` in file order."""
    if scenario.mode is ScenarioMode.TELEPORTATION:
        names = [scheme_column(s) for s in scenario.schemes]
        mode_cols = (
            ['p_ave']
            + [f"rate_{n}" for n in names]
            + [f"time_1000_{n}_s" for n in names]
        )
    else:
        mode_cols = ['p_link', 'qkd_time_s', 'qkd_window_ok']
    return (BASE_COLUMNS + mode_cols + FLAG_COLUMNS
            + list(scenario.snapshot()))


def _station_geometry(scenario, value):
    """``(geometry or None, ground_distance_m, elevation_rad)``."""
    var = scenario.sweep.variable
    alt = scenario.altitude_m
    r = EARTH.earth_radius_m
    double = scenario.mode is ScenarioMode.TELEPORTATION

    if var is SweepVariable.ELEVATION:
        el = math.radians(value)
        if el < 0:
            return None, math.nan, el
        alpha = float(central_angle_from_elevation(alt, el))
        if double:
            distance = ground_distance(2.0 * alpha, scenario.distance_kind)
        else:
            distance = r * alpha
        return single_link(alt, el), distance, el

    if double:
        try:
            alpha = half_central_angle(value, scenario.distance_kind)
        except ArgumentError:
            # stations further apart than the Earth diameter
            return None, value, math.nan
        geometry, feasible = symmetric_double_link(
            alt, value, scenario.distance_kind
        )
        if not feasible:
            return None, value, float(elevation_from_central_angle(alt, alpha))
        return geometry, value, geometry.elevation_rad
    el = float(elevation_from_central_angle(alt, value / r))
    if el < 0:
        return None, value, el
    return single_link(alt, el), value, el


def _budget(scenario, geometry, chain, table):
    kind = scenario.link_kind
    r0 = math.inf
    if kind is LinkKind.UPLINK:
        r0 = scaled_r0(scenario.params.fried_r0_m, geometry.zenith_angle_rad,
                       clamp=scenario.clamp_absorption)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", FarFieldViolation)
        return attenuation_db(
            kind, chain, scenario.params.wavelength_m, geometry, r0, table,
            clamp=scenario.clamp_absorption, params=scenario.params,
        )


def _time(rate, n_events=EVENTS_PER_TELEPORTATION):
    try:
        return time_for_events(rate, n_events)
    except InfeasibleRate:
        return math.inf


def _teleport_columns(scenario, hw, link_db, distance, chain, table):
    cols = {}
    feasible = math.isfinite(link_db)
    p_ave = double_link_probability(link_db) if feasible else 0.0
    comms = ClassicalComms(distance if math.isfinite(distance) else 0.0)
    cols['p_ave'] = p_ave
    rates = {}
    for scheme in scenario.schemes:
        if scheme is not SchemeKind.TWO_LINK_REPEATER:
            rates[scheme] = teleportation_rate(scheme, hw, p_ave, comms)
        elif not feasible:
            rates[scheme] = 0.0
        elif scenario.sweep.variable is SweepVariable.TOTAL_DB:
            rates[scheme] = math.nan
        else:
            # each half spans half the central angle between the stations
            kind = scenario.distance_kind
            span = 2.0 * half_central_angle(distance, kind)
            half, _ = symmetric_double_link(
                scenario.altitude_m, ground_distance(0.5 * span, kind), kind
            )
            half_db = _budget(scenario, half, chain, table).total_db
            p_link = double_link_probability(half_db) * hw.eta_eps
            n_dif = scenario.params.ndif_fixed if scenario.fixed_ndif else None
            rates[scheme] = repeater_teleportation_rate(
                hw, p_link, comms, n_dif=n_dif
            )
    for scheme, rate in rates.items():
        cols[f"rate_{scheme_column(scheme)}"] = rate
    for scheme, rate in rates.items():
        cols[f"time_1000_{scheme_column(scheme)}_s"] = (
            math.nan if math.isnan(rate) else _time(rate)
        )
    return cols


def _qkd_columns(scenario, hw, link_db):
    if not math.isfinite(link_db):
        return {'p_link': 0.0, 'qkd_time_s': math.inf, 'qkd_window_ok': False}
    seconds = qkd_time_required(link_db, scenario.protocol, hw)
    return {
        'p_link': link_probability_db(link_db),
        'qkd_time_s': seconds,
        'qkd_window_ok': pass_window_verdict(scenario.platform, seconds),
    }


def _evaluate_point(scenario, value, chain, hw, table):
    row = {'sweep_variable': scenario.sweep.variable.value,
           'sweep_value': float(value)}
    flags = []
    far_field_ok = True
    if scenario.sweep.variable is SweepVariable.TOTAL_DB:
        geometry, distance, el = None, scenario.ground_distance_m, math.nan
        link_db = float(value)
        infeasible = False
    else:
        geometry, distance, el = _station_geometry(scenario, value)
        infeasible = geometry is None
        link_db = math.nan
        if not infeasible:
            budget = _budget(scenario, geometry, chain, table)
            link_db = budget.total_db
            flags.extend(budget.clamp_flags)
            far_field_ok = budget.far_field_ok
            if (scenario.link_kind is LinkKind.UPLINK and scenario.clamp_absorption
                    and geometry.zenith_angle_rad > table.max_slant_zenith_rad):
                flags.append("turbulence")

    double = scenario.mode is ScenarioMode.TELEPORTATION
    row.update({
        'elevation_deg': math.degrees(el),
        'zenith_deg': 90.0 - math.degrees(el),
        'ground_distance_m': distance,
        'slant_range_m': geometry.slant_range_m if geometry else math.nan,
        'link_db': link_db,
        'total_db': 2.0 * link_db if double else link_db,
    })
    if double:
        row.update(_teleport_columns(scenario, hw, link_db, distance, chain, table))
    else:
        row.update(_qkd_columns(scenario, hw, link_db))
    row.update({
        'infeasible_horizon': bool(infeasible),
        'low_elevation_shaded': bool(el < LOW_ELEVATION_RAD),
        'clamped': bool(flags),
        'clamp_flags': "|".join(flags),
        'far_field_ok': bool(far_field_ok),
    })
    return row


def run_sweep(scenario):
    """Evaluate ``scenario`` at every sweep point.

    Parameters
    ----------
    scenario : Scenario

    Returns
    -------
    SweepResult
        One row per sweep point, sorted by sweep value.
    """
    logger.info("Running sweep '%s' over %s (%d points)", scenario.name,
                scenario.sweep.variable.value, scenario.sweep.steps)
    chain = scenario.chain()
    hw = scenario.hardware()
    table = scenario.absorption()
    snapshot = scenario.snapshot()

    rows = []
    for value in scenario.sweep.values():
        row = _evaluate_point(scenario, value, chain, hw, table)
        row.update(snapshot)
        logger.debug("%s=%g: %.3f dB", row['sweep_variable'], value,
                     row['link_db'])
        rows.append(row)

    frame = pd.DataFrame(rows, columns=sweep_columns(scenario))
    frame = frame.sort_values('sweep_value', kind='mergesort')
    frame = frame.reset_index(drop=True)

    if frame['clamped'].any():
        logger.warning("Sweep '%s': %d rows clamped", scenario.name,
                       int(frame['clamped'].sum()))
    if not frame['far_field_ok'].all():
        logger.warning("Sweep '%s': receiver inside the far field in %d rows",
                       scenario.name, int((~frame['far_field_ok']).sum()))

    metadata = {
        'scenario': scenario.name,
        'mode': scenario.mode.value,
        'link_kind': scenario.link_kind.value,
        'sweep': {
            'variable': scenario.sweep.variable.value,
            'start': scenario.sweep.start,
            'stop': scenario.sweep.stop,
            'steps': int(scenario.sweep.steps),
        },
        'parameters': snapshot,
        'version': src.__version__,
    }
    return SweepResult(scenario.name, frame, metadata)


def _json_value(val):
    if isinstance(val, np.generic):
        val = val.item()
    if isinstance(val, float) and not math.isfinite(val):
        return None
    return val


def write_sweep(result, directory, stem=None):
    """Write a sweep as ``<stem>.csv`` and ``<stem>.json``.

    Parameters
    ----------
    result : SweepResult
    directory : str
        Output folder; created if missing (falls back to the home folder).
    stem : str, optional
        File name stem, defaults to the scenario name.

    Returns
    -------
    tuple of str
        Paths of the CSV and JSON files.
    """
    out_dir = src.setup_output_directory(directory)
    stem = stem or result.scenario_name
    csv_path = os.path.join(out_dir, f"{stem}.csv")
    json_path = os.path.join(out_dir, f"{stem}.json")

    result.rows.to_csv(csv_path, index=False, encoding="utf-8")
    records = [
        {k: _json_value(v) for k, v in rec.items()}
        for rec in result.rows.to_dict(orient="records")
    ]
    metadata = {
        k: ({kk: _json_value(vv) for kk, vv in v.items()}
            if isinstance(v, dict) else _json_value(v))
        for k, v in result.metadata.items()
    }
    with open(json_path, "w", encoding="utf-8") as f:
        json.dump({'metadata': metadata, 'rows': records}, f, indent=1,
                  allow_nan=False)
    logger.info("Wrote %s and %s", csv_path, json_path)
    return csv_path, json_path
