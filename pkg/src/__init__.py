#!/usr/bin/env python3
# -*- coding: utf-8 -*-

import os
import logging

import src.constants as constants
import src.geometry as geometry
import src.atmosphere as atmosphere
import src.link_budget as link_budget
import src.rates as rates
import src.oracle as oracle
import src.scenarios as scenarios

__version__ = "0.1.0"

# Helper Function
#---------------------------------------------------------------------------------------
def setup_output_directory(working_dir):
    """
    Helper method to check if the working directory exists and create it if it doesn't.
    This method:
        * falls back to a simple mkdir if makedirs fails.
        * returns the home directory if the working directory cannot be created.

    Parameters
    ----------
    working_dir : str
        Folder that sweep and table outputs are written to.

    Returns
    -------
    str
        The folder actually used.
    """
    if not os.path.isdir(working_dir):
        try:
            os.makedirs(working_dir)
        except OSError:
            logging.warning("Failed to create folder %s!" % working_dir)
            try:
                os.mkdir(working_dir)
            except OSError:
                logging.error("Could not create folder, %s" % working_dir)
            else:
                logging.info("Created %s" % working_dir)
        else:
            logging.info("Created %s" % working_dir)

    if os.path.isdir(working_dir):
        return working_dir
    return os.path.expanduser("~")
