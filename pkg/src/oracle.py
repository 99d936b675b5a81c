#!/usr/bin/env python3
# -*- coding: utf-8 -*-
#
# oracle.py
#
###############################################################################
# DEPENDENCIES
###############################################################################
from dataclasses import dataclass, field, replace
import logging
import math

import numpy as np
import pandas as pd
from scipy.stats import norm

from src.errors import ArgumentError
from src.rates import HardwareParams
from src.rates import decay_expectation
from src.rates import decay_expectation_direct
from src.rates import expected_order_statistics
from src.rates import ndif_pmf
from src.rates import ndif_tail
from src.rates import repeater_rate_bounds
from src.rates import swap_probability


###############################################################################
# DOCUMENTATION
###############################################################################
__doc__ = """
Monte Carlo estimates of the repeater statistics, used to check the closed
forms of :mod:`src.rates`.

**Assumptions**

-   Attempt counts of the two elementary links are independent geometric
    variables with support starting at 1.
-   The bit generator is numpy's ``PCG64DXSM``. A master seed is split into
    shard seeds with ``SeedSequence(seed).spawn(shards)`` and shards are
    merged in shard order, so a (seed, trials, shards) triple always gives
    bit-identical output.

**Logic**

Each estimator returns its sample mean together with the standard error.
The two-link repeater is simulated as a renewal process: every round draws
both attempt counts, charges ``max(n_a, n_b) T0`` of preparation time and
swaps with probability ``p_s exp(-2 n_dif T0 / T1)``. Rounds repeat until a
swap succeeds.

:func:`run_validation_suite` compares every estimator with its closed form
and returns a :class:`ValidationReport`. The acceptance band is 3 sigma for
the suite as a whole: with m stochastic checks each one is held to the
Bonferroni-corrected band of false-alarm probability alpha / m.
"""
__all__ = [
    "CheckRecord",
    "NdifEstimate",
    "OrderStatsEstimate",
    "RepeaterEstimate",
    "TrialConfig",
    "ValidationReport",
    "familywise_sigma",
    "run_validation_suite",
    "simulate_ndif",
    "simulate_order_stats",
    "simulate_two_link_repeater",
]

logger = logging.getLogger(__name__)


###############################################################################
# GLOBALS
###############################################################################
MIN_ACCEPTANCE_TRIALS = 10_000
'''int : Fewest trials for which a validation run is meaningful.'''

VALIDATION_P_GRID = (0.9, 0.5, 0.1)
'''tuple : Link probabilities of the repeater band checks.'''

VALIDATION_RATIO_GRID = (1e-4, 1e-2, 1.0)
'''tuple : T0 / T1 ratios of the Monte Carlo checks.'''

CLOSED_FORM_P_GRID = (0.9, 0.5, 0.1, 1e-3)
'''tuple : Link probabilities of the closed-form and n_dif checks.'''

ABS_FLOOR = 1e-12
'''float : Absolute slack added to sigma bands (zero-variance estimators).'''


###############################################################################
# CLASSES
###############################################################################
@dataclass(frozen=True)
class TrialConfig:
    """Monte Carlo run settings.

    Attributes
    ----------
    trials : int
        Number of samples (repeater: number of completed distributions).
    seed : int
        Master seed of the ``SeedSequence``.
    p : float
        Per-attempt success probability of each elementary link.
    t0_s, t1_s : float
        Attempt period and memory lifetime (``math.inf`` disables decay).
    shards : int
        Independent sub-streams the trials are split over.
    """
    trials: int = 1_000_000
    seed: int = 42
    p: float = 0.5
    t0_s: float = 1e-9
    t1_s: float = 0.1
    shards: int = 4

    def __post_init__(self):
        if int(self.trials) != self.trials or self.trials < 1:
            raise ArgumentError("trials must be a positive integer")
        if not 0.0 < self.p <= 1.0:
            raise ArgumentError(f"p must lie in (0, 1], got {self.p}")
        if self.t0_s < 0 or not self.t1_s > 0:
            raise ArgumentError("need t0_s >= 0 and t1_s > 0")
        if int(self.shards) != self.shards or self.shards < 1:
            raise ArgumentError("shards must be a positive integer")

    @property
    def decay_rate(self):
        """Exponent per attempt of difference, ``2 T0 / T1``."""
        return 2.0 * self.t0_s / self.t1_s

    def shard_sizes(self):
        base, extra = divmod(int(self.trials), int(self.shards))
        return [base + (1 if i < extra else 0) for i in range(int(self.shards))]

    def generators(self):
        children = np.random.SeedSequence(self.seed).spawn(int(self.shards))
        return [np.random.Generator(np.random.PCG64DXSM(c)) for c in children]


@dataclass(frozen=True)
class NdifEstimate:
    """Empirical distribution of n_dif and of the memory decay."""
    counts: np.ndarray
    trials: int
    decay_mean: float
    decay_se: float
    seed: int

    def pmf(self, n):
        if n >= self.counts.size:
            return 0.0
        return self.counts[n] / self.trials

    def pmf_se(self, n):
        q = self.pmf(n)
        return math.sqrt(q * (1.0 - q) / self.trials)

    def decay(self, decay_rate):
        """Mean and standard error of ``exp(-decay_rate n_dif)``."""
        y = np.exp(-decay_rate * np.arange(self.counts.size))
        return _mean_se(float(np.sum(self.counts * y)),
                        float(np.sum(self.counts * y**2)), self.trials)


@dataclass(frozen=True)
class OrderStatsEstimate:
    mean_min: float
    se_min: float
    mean_max: float
    se_max: float
    seed: int


@dataclass(frozen=True)
class RepeaterEstimate:
    """Empirical mean distribution time of the two-link repeater."""
    mean_time_s: float
    se_time_s: float
    mean_rounds: float
    seed: int

    @property
    def rate(self):
        return 1.0 / self.mean_time_s


@dataclass(frozen=True)
class CheckRecord:
    """One analytic-vs-empirical comparison."""
    name: str
    analytic: float
    empirical: float
    std_error: float
    tolerance: float
    passed: bool


@dataclass
class ValidationReport:
    seed: int
    trials: int
    checks: list = field(default_factory=list)

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def to_frame(self):
        return pd.DataFrame([vars(c) for c in self.checks])

    def as_dict(self):
        return {
            "seed": self.seed,
            "trials": self.trials,
            "passed": self.passed,
            "checks": [vars(c) for c in self.checks],
        }


###############################################################################
# FUNCTIONS
###############################################################################
def _mean_se(total, total_sq, n):
    mean = total / n
    if n < 2:
        return mean, 0.0
    var = max(total_sq / n - mean**2, 0.0) * n / (n - 1)
    return mean, math.sqrt(var / n)


def _draw_pairs(rng, p, size):
    return rng.geometric(p, size), rng.geometric(p, size)


def simulate_ndif(cfg):
    """Empirical n_dif histogram and decay-expectation estimate.

    Parameters
    ----------
    cfg : TrialConfig

    Returns
    -------
    NdifEstimate
    """
    counts = np.zeros(1, dtype=np.int64)
    for rng, size in zip(cfg.generators(), cfg.shard_sizes()):
        n_a, n_b = _draw_pairs(rng, cfg.p, size)
        shard = np.bincount(np.abs(n_a - n_b))
        if shard.size > counts.size:
            counts = np.pad(counts, (0, shard.size - counts.size))
        counts[:shard.size] += shard

    est = NdifEstimate(counts=counts, trials=int(cfg.trials), decay_mean=0.0,
                       decay_se=0.0, seed=cfg.seed)
    mean, se = est.decay(cfg.decay_rate)
    logger.debug("n_dif: %d trials, max difference %d", cfg.trials,
                 counts.size - 1)
    return replace(est, decay_mean=mean, decay_se=se)


def simulate_order_stats(cfg):
    """Empirical ``(<n_min>, <n_max>)`` with standard errors."""
    sums = np.zeros(4)
    for rng, size in zip(cfg.generators(), cfg.shard_sizes()):
        n_a, n_b = _draw_pairs(rng, cfg.p, size)
        lo = np.minimum(n_a, n_b).astype(float)
        hi = np.maximum(n_a, n_b).astype(float)
        sums += (lo.sum(), (lo**2).sum(), hi.sum(), (hi**2).sum())
    mean_min, se_min = _mean_se(sums[0], sums[1], cfg.trials)
    mean_max, se_max = _mean_se(sums[2], sums[3], cfg.trials)
    return OrderStatsEstimate(mean_min, se_min, mean_max, se_max, cfg.seed)


def simulate_two_link_repeater(cfg, hw):
    """Mean distribution time of the two-link repeater.

    Parameters
    ----------
    cfg : TrialConfig
        Link probability, attempt period and memory lifetime.
    hw : HardwareParams
        Detector, memory and QND efficiencies of the swap.

    Returns
    -------
    RepeaterEstimate
    """
    success_max = swap_probability(hw, cfg.p, cfg.t0_s, n_dif=0)
    totals = np.zeros(3)
    for rng, size in zip(cfg.generators(), cfg.shard_sizes()):
        elapsed = np.zeros(size)
        rounds = np.zeros(size)
        active = np.arange(size)
        while active.size:
            n_a, n_b = _draw_pairs(rng, cfg.p, active.size)
            elapsed[active] += np.maximum(n_a, n_b) * cfg.t0_s
            rounds[active] += 1
            success = success_max * np.exp(-cfg.decay_rate * np.abs(n_a - n_b))
            active = active[rng.random(active.size) >= success]
        totals += (elapsed.sum(), (elapsed**2).sum(), rounds.sum())

    mean, se = _mean_se(totals[0], totals[1], cfg.trials)
    logger.debug("Repeater p=%g: <T_r>=%.6e +/- %.1e s", cfg.p, mean, se)
    return RepeaterEstimate(mean_time_s=mean, se_time_s=se,
                            mean_rounds=totals[2] / cfg.trials, seed=cfg.seed)


def _sigma_check(name, analytic, empirical, se, sigma):
    tol = sigma * se + ABS_FLOOR
    return CheckRecord(name, float(analytic), float(empirical), float(se),
                       float(tol), bool(abs(empirical - analytic) <= tol))


def _exact_check(name, analytic, computed, rel):
    tol = rel * abs(analytic)
    return CheckRecord(name, float(analytic), float(computed), 0.0, float(tol),
                       bool(abs(computed - analytic) <= tol))


def familywise_sigma(sigma, checks):
    """Per-check band, in standard errors, of a Bonferroni-corrected family.

    ``checks`` comparisons share the two-sided false-alarm probability of a
    single ``sigma`` band, so the whole suite fails by chance no more often
    than one ``sigma`` check does.
    """
    if checks < 1:
        raise ArgumentError("checks must be positive")
    alpha = 2.0 * norm.sf(sigma)
    return float(norm.isf(alpha / (2.0 * checks)))


def run_validation_suite(seed=42, trials=1_000_000, shards=4, sigma=3.0,
                         familywise=True):
    """Compare every stochastic closed form with its Monte Carlo estimate.

    Parameters
    ----------
    seed : int
        Master seed, recorded in the report.
    trials : int
        Samples per n_dif and order-statistics estimate. The repeater grid
        runs ``trials // 10`` distributions per point.
    shards : int
        Sub-streams per estimate.
    sigma : float
        Acceptance band in standard errors.
    familywise : bool
        Widen the band so the whole suite, not each check, has the false
        alarm rate of one ``sigma`` band (Bonferroni).

    Returns
    -------
    ValidationReport
    """
    if trials < MIN_ACCEPTANCE_TRIALS:
        logger.warning("Only %d trials; acceptance needs at least %d",
                       trials, MIN_ACCEPTANCE_TRIALS)
    report = ValidationReport(seed=seed, trials=trials)
    checks = report.checks

    for p in CLOSED_FORM_P_GRID:
        total = float(np.sum(ndif_pmf(p, np.arange(200)))) + ndif_tail(p, 200)
        checks.append(_exact_check(f"ndif_pmf normalisation p={p}", 1.0, total,
                                   1e-12))
        for ratio in VALIDATION_RATIO_GRID:
            checks.append(_exact_check(
                f"decay closed form vs sum p={p} T0/T1={ratio}",
                decay_expectation_direct(p, ratio, 1.0),
                decay_expectation(p, ratio, 1.0), 1e-10,
            ))

    n_stochastic = (
        len(CLOSED_FORM_P_GRID) * (4 + len(VALIDATION_RATIO_GRID))
        + 2 * len(VALIDATION_P_GRID) * len(VALIDATION_RATIO_GRID)
    )
    band = familywise_sigma(sigma, n_stochastic) if familywise else sigma
    logger.info("Acceptance band %.3f sigma over %d stochastic checks", band,
                n_stochastic)

    base = TrialConfig(trials=trials, seed=seed, shards=shards, t0_s=1.0)
    for p in CLOSED_FORM_P_GRID:
        cfg = replace(base, p=p)
        est = simulate_ndif(cfg)
        for n in (0, 1):
            checks.append(_sigma_check(f"ndif P({n}) p={p}", ndif_pmf(p, n),
                                       est.pmf(n), est.pmf_se(n), band))
        for ratio in VALIDATION_RATIO_GRID:
            mean, se = est.decay(2.0 * ratio)
            checks.append(_sigma_check(
                f"decay expectation p={p} T0/T1={ratio}",
                decay_expectation(p, 1.0, 1.0 / ratio), mean, se, band,
            ))
        order = simulate_order_stats(cfg)
        n_min, n_max = expected_order_statistics(p)
        checks.append(_sigma_check(f"<n_min> p={p}", n_min, order.mean_min,
                                   order.se_min, band))
        checks.append(_sigma_check(f"<n_max> p={p}", n_max, order.mean_max,
                                   order.se_max, band))

    ideal = HardwareParams(rep_rate_hz=1.0, eta_det=1.0, eta_store=1.0,
                           eta_retrieve=1.0, eta_qnd=1.0, t1_s=math.inf)
    repeater_trials = max(1, trials // 10)
    for p in VALIDATION_P_GRID:
        for ratio in VALIDATION_RATIO_GRID:
            hw = replace(ideal, t1_s=1.0 / ratio)
            cfg = replace(base, p=p, t1_s=hw.t1_s, trials=repeater_trials)
            est = simulate_two_link_repeater(cfg, hw)
            bounds = repeater_rate_bounds(hw, p, t0_s=cfg.t0_s)
            lo, hi = bounds.time_lower_s, bounds.time_upper_s
            slack = band * est.se_time_s + ABS_FLOOR
            inside = lo - slack <= est.mean_time_s <= hi + slack
            checks.append(CheckRecord(
                f"repeater <T_r> in band p={p} T0/T1={ratio}",
                float(0.5 * (lo + hi)), est.mean_time_s, est.se_time_s,
                float(0.5 * (hi - lo) + slack), bool(inside),
            ))
            # the renewal mean equals the n_max bound
            checks.append(_sigma_check(
                f"repeater <T_r> vs upper bound p={p} T0/T1={ratio}",
                hi, est.mean_time_s, est.se_time_s, band,
            ))

    failed = [c.name for c in checks if not c.passed]
    logger.info("Validation: %d checks, %d failed", len(checks), len(failed))
    for name in failed:
        logger.warning("Check failed: %s", name)
    return report
