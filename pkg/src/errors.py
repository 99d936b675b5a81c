#!/usr/bin/env python3
# -*- coding: utf-8 -*-
#
# errors.py
#
###############################################################################
# DOCUMENTATION
###############################################################################
__doc__ = """
Exception and warning classes shared by the link-budget and rate modules.

Argument problems are raised as :class:`ValueError` subclasses, so callers
that only care about "bad input" can keep catching ``ValueError``.
Far-field violations are not fatal; they are issued through
:func:`warnings.warn` with the :class:`FarFieldViolation` category.
"""
__all__ = [
    "ArgumentError",
    "DegenerateRate",
    "FarFieldViolation",
    "InfeasibleRate",
    "ScenarioError",
    "SchemeMismatch",
    "Unachievable",
    "UnknownWavelength",
]


###############################################################################
# CLASSES
###############################################################################
class ArgumentError(ValueError):
    """An argument lies outside the domain of the operation."""


class UnknownWavelength(ArgumentError):
    """The wavelength has no entry in the absorption table."""


class Unachievable(ValueError):
    """The aperture solver cannot reach the target attenuation within bounds."""


class SchemeMismatch(ValueError):
    """The teleportation scheme is not handled by the called operation."""


class DegenerateRate(ValueError):
    """Repeater bounds requested for a link that never succeeds (p = 0)."""


class InfeasibleRate(ValueError):
    """A zero event rate never accumulates the requested events."""


class ScenarioError(ValueError):
    """A scenario file is malformed or references unknown parameters."""


class FarFieldViolation(UserWarning):
    """The receiver is not in the far field of the transmitter aperture."""
