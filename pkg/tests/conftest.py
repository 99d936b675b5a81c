#!/usr/bin/env python3
# -*- coding: utf-8 -*-

import math
import os

import pytest

from src.atmosphere import AbsorptionTable
from src.constants import DefaultParams
from src.link_budget import OpticalChain
from src.rates import HardwareParams


SCENARIO_DIR = os.path.join(
    os.path.dirname(os.path.dirname(os.path.abspath(__file__))),
    "resources", "scenarios",
)


@pytest.fixture
def params():
    return DefaultParams()


@pytest.fixture
def hw():
    return HardwareParams()


@pytest.fixture
def ideal_hw():
    return HardwareParams(rep_rate_hz=1.0, eta_det=1.0, eta_store=1.0,
                          eta_retrieve=1.0, eta_qnd=1.0, t1_s=math.inf)


@pytest.fixture
def geo_chain():
    return OpticalChain(0.5, 2.0, trans_tx=0.8, trans_rx=0.8,
                        pointing_loss=0.2, additional_loss_db=6.0)


@pytest.fixture
def table_810():
    return AbsorptionTable.from_mapping({810e-9: 1.0})


@pytest.fixture
def scenario_dir():
    return SCENARIO_DIR
