#!/usr/bin/env python3
# -*- coding: utf-8 -*-

from src.scenarios.scenario import Scenario
from src.scenarios.scenario import ScenarioMode
from src.scenarios.scenario import SweepSpec
from src.scenarios.scenario import SweepVariable
from src.scenarios.scenario import orbit_class
from src.scenarios.scenario import platform_orbit
from src.scenarios.sweep import SweepResult
from src.scenarios.sweep import run_sweep
from src.scenarios.sweep import write_sweep
from src.scenarios.scenario_file import load_scenario
from src.scenarios.scenario_file import parse_scenario
from src.scenarios.presets import HeadlineReport
from src.scenarios.presets import geo_teleport_headline
from src.scenarios.presets import preset_scenarios
from src.scenarios.tables import dynamic_link_table
from src.scenarios.tables import qkd_feasibility_grid
from src.scenarios.tables import static_aperture_table
