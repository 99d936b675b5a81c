#!/usr/bin/env python3
# -*- coding: utf-8 -*-
#
# cli.py
#
###############################################################################
# DEPENDENCIES
###############################################################################
import argparse
from dataclasses import fields, replace
import json
import logging
import math
import sys

import numpy as np
import pandas as pd

import src
from src.atmosphere import absorption_table
from src.atmosphere import scaled_r0
from src.constants import DefaultParams
from src.constants import PLATFORM_APERTURES_M
from src.constants import WavelengthChoice
from src.constants import defaults
from src.geometry import LinkGeometry
from src.geometry import intersatellite_range
from src.geometry import single_link
from src.link_budget import LinkKind
from src.link_budget import OpticalChain
from src.link_budget import attenuation_db
from src.link_budget import double_link_probability
from src.link_budget import link_probability_db
from src.oracle import run_validation_suite
from src.rates import ClassicalComms
from src.rates import HardwareParams
from src.rates import Protocol
from src.rates import SchemeKind
from src.rates import pass_window_verdict
from src.rates import qkd_time_required
from src.rates import repeater_teleportation_rate
from src.rates import teleportation_rate
from src.rates import time_for_events
from src.scenarios import dynamic_link_table
from src.scenarios import geo_teleport_headline
from src.scenarios import load_scenario
from src.scenarios import platform_orbit
from src.scenarios import preset_scenarios
from src.scenarios import run_sweep
from src.scenarios import static_aperture_table
from src.scenarios import write_sweep


###############################################################################
# DOCUMENTATION
###############################################################################
__doc__ = """
Command-line entry point.

Commands: ``budget``, ``rate``, ``sweep``, ``qkd``, ``static-table``,
``headline``, ``validate``, ``defaults`` and ``dynamic-table``.

Every command takes ``--wavelength {785,1550}``, ``--format {table,json}``,
``-v`` (repeatable) and one ``--<field>`` flag per parameter-table field
(``--t1_s`` and ``--t1-s`` are the same flag). Results go to standard
output, logs to standard error.

Exit codes: 0 on success, 1 on a usage or argument error, 2 when
``validate`` finds a failing check.
"""
__all__ = ["main"]

logger = logging.getLogger(__name__)


###############################################################################
# GLOBALS
###############################################################################
EXIT_OK = 0
EXIT_USER_ERROR = 1
EXIT_VALIDATION_FAILED = 2

EVENTS = 1000
'''int : Events accumulated for the ``rate`` command's time column.'''

PLATFORMS = ('HAP', 'LEO', 'MEO', 'GEO', 'HEO')
'''tuple : Platform labels accepted by ``--platform``.'''


###############################################################################
# CLASSES
###############################################################################
class _Parser(argparse.ArgumentParser):
    """Argument parser that exits with the user-error code."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USER_ERROR, f"{self.prog}: error: {message}\n")


###############################################################################
# FUNCTIONS
###############################################################################
def _common_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--wavelength", type=int, choices=(785, 1550),
                        help="Wavelength in nm.")
    common.add_argument("--format", choices=("table", "json"),
                        default="table", help="Output format.")
    common.add_argument("-v", "--verbose", action="count", default=0,
                        help="More logging (-v info, -vv debug).")
    group = common.add_argument_group("parameter overrides")
    for f in fields(DefaultParams):
        if f.name == "wavelength_m":
            continue
        names = [f"--{f.name}"]
        if "_" in f.name:
            names.append(f"--{f.name.replace('_', '-')}")
        if f.name == "rep_rate_hz":
            names.append("--rate-hz")
        group.add_argument(*names, dest=f.name, default=None,
                           type=int if f.type in (int, "int") else float,
                           metavar=f.name.upper(),
                           help=f"Override {f.name} (default {f.default}).")
    return common


def _build_parser():
    common = _common_parser()
    parser = _Parser(
        prog="fso-links",
        description="Free-space optical link budgets and quantum "
                    "teleportation / QKD rate models.",
    )
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {src.__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    p = sub.add_parser("budget", parents=[common],
                       help="Attenuation breakdown of one link.")
    p.add_argument("--kind", choices=[k.value for k in LinkKind],
                   default="downlink")
    p.add_argument("--platform", type=str.upper, choices=PLATFORMS,
                   default="GEO", help="Platform (lower one for intersatellite).")
    p.add_argument("--altitude-m", type=float,
                   help="Circular altitude instead of a platform preset.")
    p.add_argument("--higher", type=str.upper, choices=PLATFORMS,
                   default="GEO", help="Higher platform of an intersatellite link.")
    p.add_argument("--separation-deg", type=float, default=0.0,
                   help="Intersatellite angular separation.")
    p.add_argument("--elevation-deg", type=float, default=90.0)
    p.add_argument("--tx-aperture-m", type=float)
    p.add_argument("--rx-aperture-m", type=float)
    p.add_argument("--clamp", action="store_true",
                   help="Clamp absorption beyond 70 deg zenith.")
    p.set_defaults(handler=_cmd_budget)

    p = sub.add_parser("rate", parents=[common],
                       help="Teleportation rate of one scheme.")
    p.add_argument("--scheme", choices=[s.value for s in SchemeKind],
                   default="memoryless")
    src_group = p.add_mutually_exclusive_group(required=True)
    src_group.add_argument("--db", type=float,
                           help="Loss of each link of the pair, dB.")
    src_group.add_argument("--p-ave", type=float,
                           help="Pair arrival probability.")
    p.add_argument("--ground-distance-m", type=float, default=0.0)
    p.add_argument("--eta-eps", type=float, default=0.5)
    p.add_argument("--multiplex", type=int, default=1)
    p.add_argument("--fixed-ndif", action="store_true",
                   help="Repeater at the table's fixed n_dif.")
    p.set_defaults(handler=_cmd_rate)

    p = sub.add_parser("sweep", parents=[common],
                       help="Run a scenario file or preset.")
    target = p.add_mutually_exclusive_group(required=True)
    target.add_argument("scenario", nargs="?", help="Scenario file path.")
    target.add_argument("--preset", help="Preset scenario name.")
    p.add_argument("--output-dir", default="results")
    p.add_argument("--stem", help="Output file stem.")
    p.set_defaults(handler=_cmd_sweep)

    p = sub.add_parser("qkd", parents=[common],
                       help="Time to a QKD key over a link.")
    p.add_argument("--db", type=float, required=True,
                   help="End-to-end loss, dB.")
    p.add_argument("--protocol", default="wcp",
                   help="wcp (decoy-state) or eps (pair or single photon).")
    p.add_argument("--orbit", type=str.upper, choices=PLATFORMS,
                   help="Judge against this platform's pass window.")
    p.add_argument("--multiplex", type=int, default=1)
    p.set_defaults(handler=_cmd_qkd)

    p = sub.add_parser("static-table", parents=[common],
                       help="Static aperture table.")
    p.set_defaults(handler=_cmd_static_table)

    p = sub.add_parser("headline", parents=[common],
                       help="GEO teleportation headline report.")
    p.set_defaults(handler=_cmd_headline)

    p = sub.add_parser("validate", parents=[common],
                       help="Monte Carlo check of the closed forms.")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--trials", type=int, default=1_000_000)
    p.add_argument("--shards", type=int, default=4)
    p.set_defaults(handler=_cmd_validate)

    p = sub.add_parser("defaults", parents=[common],
                       help="Print the parameter table.")
    p.set_defaults(handler=_cmd_defaults)

    p = sub.add_parser("dynamic-table", parents=[common],
                       help="Link duration and loss of platform passes.")
    p.add_argument("--samples", type=int, default=61)
    p.set_defaults(handler=_cmd_dynamic_table)
    return parser


def _overrides(args):
    return {f.name: getattr(args, f.name) for f in fields(DefaultParams)
            if f.name != "wavelength_m" and getattr(args, f.name, None) is not None}


def _params(args):
    base = defaults()
    if args.wavelength is not None:
        base = defaults(WavelengthChoice.from_nm(args.wavelength))
    return replace(base, **_overrides(args))


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.generic):
        obj = obj.item()
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    return obj


def _emit(args, payload, frame=None):
    if args.format == "json":
        print(json.dumps(_jsonable(payload), indent=1, allow_nan=False))
    elif frame is not None:
        print(frame.to_string(index=False))
    else:
        width = max(len(k) for k in payload)
        for key, val in payload.items():
            print(f"{key:<{width}}  {val}")


def _cmd_budget(args):
    params = _params(args)
    kind = LinkKind(args.kind)
    if kind is LinkKind.INTERSATELLITE:
        lower = platform_orbit(args.platform, params)
        higher = platform_orbit(args.higher, params)
        distance = float(intersatellite_range(
            lower, higher, math.radians(args.separation_deg)))
        geometry = LinkGeometry(distance, 0.0, 0.5 * math.pi)
        preset = (PLATFORM_APERTURES_M[args.platform],
                  PLATFORM_APERTURES_M[args.higher])
    else:
        if args.altitude_m is not None:
            altitude = args.altitude_m
        else:
            orbit = platform_orbit(args.platform, params)
            altitude = getattr(orbit, "altitude_m", None) or orbit.apogee_alt_m
        geometry = single_link(altitude, math.radians(args.elevation_deg))
        space = PLATFORM_APERTURES_M[args.platform]
        ground = PLATFORM_APERTURES_M['GROUND']
        preset = (ground, space) if kind is LinkKind.UPLINK else (space, ground)
    tx = args.tx_aperture_m or preset[0]
    rx = args.rx_aperture_m or preset[1]
    chain = OpticalChain.from_defaults(params, tx, rx)
    r0 = math.inf
    if kind is LinkKind.UPLINK:
        r0 = scaled_r0(params.fried_r0_m, geometry.zenith_angle_rad, args.clamp)
    budget = attenuation_db(kind, chain, params.wavelength_m, geometry, r0,
                            absorption_table(params), clamp=args.clamp,
                            params=params)
    payload = budget.as_dict()
    payload.update({
        'slant_range_m': geometry.slant_range_m,
        'tx_aperture_m': tx,
        'rx_aperture_m': rx,
    })
    if args.format == "json":
        payload['p_single'] = link_probability_db(budget.total_db)
        payload['p_double'] = double_link_probability(budget.total_db)
    _emit(args, payload)
    return EXIT_OK


def _cmd_rate(args):
    params = _params(args)
    hw = HardwareParams.from_defaults(params, args.eta_eps, args.multiplex)
    p_ave = args.p_ave if args.p_ave is not None else double_link_probability(args.db)
    comms = ClassicalComms(args.ground_distance_m)
    scheme = SchemeKind(args.scheme)
    if scheme is SchemeKind.TWO_LINK_REPEATER:
        n_dif = params.ndif_fixed if args.fixed_ndif else None
        rate = repeater_teleportation_rate(hw, p_ave * hw.eta_eps, comms,
                                           n_dif=n_dif)
    else:
        rate = teleportation_rate(scheme, hw, p_ave, comms)
    payload = {
        'scheme': scheme.value,
        'rate_per_s': rate,
        f'time_{EVENTS}_events_s': time_for_events(rate, EVENTS),
    }
    if args.format == "json":
        payload['p_ave'] = p_ave
    _emit(args, payload)
    return EXIT_OK


def _cmd_sweep(args):
    if args.preset:
        presets = preset_scenarios()
        if args.preset not in presets:
            raise ValueError(
                f"Unknown preset {args.preset!r}; choose from {sorted(presets)}"
            )
        scenario = presets[args.preset]
    else:
        scenario = load_scenario(args.scenario)
    params = scenario.params
    if args.wavelength is not None:
        choice = WavelengthChoice.from_nm(args.wavelength)
        params = replace(params, wavelength_m=choice.value,
                         a_atm_vertical_db=defaults(choice).a_atm_vertical_db)
    params = replace(params, **_overrides(args))
    scenario = replace(scenario, params=params)

    result = run_sweep(scenario)
    csv_path, json_path = write_sweep(result, args.output_dir, args.stem)
    frame = result.rows
    summary = {
        'scenario': scenario.name,
        'rows': len(frame),
        'feasible_rows': int((~frame['infeasible_horizon']).sum()),
        'csv': csv_path,
        'json': json_path,
    }
    _emit(args, summary)
    return EXIT_OK


def _cmd_qkd(args):
    params = _params(args)
    hw = HardwareParams.from_defaults(params, multiplex_factor=args.multiplex)
    protocol = Protocol.from_label(args.protocol)
    seconds = qkd_time_required(args.db, protocol, hw)
    payload = {
        'protocol': protocol.value,
        'total_db': args.db,
        'time_s': seconds,
    }
    if args.orbit:
        payload['orbit'] = args.orbit
        payload['feasible'] = pass_window_verdict(args.orbit, seconds)
    _emit(args, payload)
    return EXIT_OK


def _cmd_static_table(args):
    params = _params(args)
    wavelengths = (785e-9, 1550e-9)
    if args.wavelength is not None:
        wavelengths = (params.wavelength_m,)
    frame = static_aperture_table(wavelengths=wavelengths, params=params)
    _emit(args, {'rows': frame.to_dict(orient="records")}, frame)
    return EXIT_OK


def _cmd_headline(args):
    report = geo_teleport_headline()
    payload = report.as_dict()
    if args.format == "json":
        _emit(args, payload)
        return EXIT_OK
    budget = payload['budget']
    print(f"GEO double downlink, {budget['total_db']:.2f} dB per link "
          f"(geometric {budget['geometric_db']:.2f}, optics "
          f"{budget['optics_db']:.2f}, atmosphere "
          f"{budget['atmosphere_db']:.2f}, additional "
          f"{budget['additional_db']:.2f})")
    print(f"SPDC 4-fold rate {report.spdc_rate_per_s:.4f} /s, "
          f"{EVENTS} events in {report.spdc_time_s / 3600.0:.1f} h")
    frame = pd.DataFrame(payload['sps_variants'])
    print(frame.to_string(index=False))
    return EXIT_OK


def _cmd_validate(args):
    report = run_validation_suite(seed=args.seed, trials=args.trials,
                                  shards=args.shards)
    frame = report.to_frame()
    _emit(args, report.as_dict(), frame)
    if not report.passed:
        logger.error("%d of %d checks failed",
                     sum(not c.passed for c in report.checks),
                     len(report.checks))
        return EXIT_VALIDATION_FAILED
    return EXIT_OK


def _cmd_defaults(args):
    params = _params(args)
    _emit(args, params.as_dict())
    return EXIT_OK


def _cmd_dynamic_table(args):
    params = _params(args)
    frame = dynamic_link_table(params.wavelength_m, args.samples, params)
    _emit(args, {'rows': frame.to_dict(orient="records")}, frame)
    return EXIT_OK


def main(argv=None):
    """Run one command and return its exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USER_ERROR

    level = (logging.WARNING, logging.INFO, logging.DEBUG)[min(args.verbose, 2)]
    logging.basicConfig(level=level, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.handler(args)
    except ValueError as e:
        print(f"{parser.prog}: error: {e}", file=sys.stderr)
        return EXIT_USER_ERROR


if __name__ == "__main__":
    sys.exit(main())
