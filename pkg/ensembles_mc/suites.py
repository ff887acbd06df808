"""
Statistical verification of the Monte Carlo route against the analytic kernels.
"""
import logging
from dataclasses import replace
from typing import List, Sequence, Tuple

import numpy as np

from core.reports import VerificationReport
from ensembles_mc.sampling import SEED_LIMIT, expected_trace_square
from ensembles_mc.services import MCConfig, MonteCarloService
from kernels.services import KernelService, KernelValue

logger = logging.getLogger(__name__)

# |x_p - x_q| >= 1 keeps every pair at least 10 eta apart under the default clamp.
MC_POINTS = [(0.5, -0.5), (0.8, -0.3), (-1.0, 0.2), (0.3, 1.3), (-0.6, 0.9)]
SIGMA_GATE = 3.0
COVERAGE_REPETITIONS = 20
COVERAGE_TARGET = 0.95


def seed_coverage(config: MCConfig, points: Sequence[Tuple[float, float]],
                  repetitions: int = COVERAGE_REPETITIONS) -> Tuple[List[float], List[KernelValue]]:
    """
    Fraction of the seeds config.seed, config.seed + 1, ... (repetitions of
    them) whose kernel_mc lies within SIGMA_GATE standard errors of the
    analytic kernel, per point. Also returns the estimates of the first seed.
    """
    if repetitions < 1:
        raise ValueError(f"repetitions must be at least 1 (got {repetitions}).")
    ensemble = config.ensemble
    expected = np.array([float(KernelService.kernel(ensemble.beta, ensemble.n_levels, x_p, x_q))
                         for x_p, x_q in points])
    hits = np.zeros(len(points), dtype=int)
    first = []
    for i in range(repetitions):
        run = replace(config, seed=(config.seed + i) % SEED_LIMIT)
        estimates = MonteCarloService.kernel_mc_points(run, points)
        if i == 0:
            first = estimates
        values = np.array([e.value for e in estimates])
        errors = np.array([e.uncertainty for e in estimates])
        hits += np.abs(values - expected) <= SIGMA_GATE * errors

    coverage = (hits / repetitions).tolist()
    logger.info(f"seed coverage beta={ensemble.beta} N={ensemble.n_levels} over {repetitions} seeds: {coverage}")
    return coverage, first


def mc_suite(config: MCConfig, points=None, repetitions: int = COVERAGE_REPETITIONS) -> VerificationReport:
    ensemble = config.ensemble
    points = points or MC_POINTS
    report = VerificationReport(f"mc.beta{ensemble.beta}")

    z1 = MonteCarloService.z1_mc(config, 0.3, 0.3)
    report.add_check('Z1 at coincident arguments', 1.0, z1.mean.real, 0.0)

    moment = MonteCarloService.trace_moment(config)
    report.add_check('E[tr H^2]', expected_trace_square(ensemble), moment.mean, 4.0 * moment.stderr)

    histogram = MonteCarloService.eigen_histogram(config, np.linspace(-4.0, 4.0, 33))
    report.add_check('histogram mass', ensemble.n_levels, histogram.mass, 1e-12)

    coverage, estimates = seed_coverage(config, points, repetitions)
    for (x_p, x_q), estimate, fraction in zip(points, estimates, coverage):
        label = f"K{ensemble.beta}_{ensemble.n_levels}({x_p:+.2f},{x_q:+.2f})"
        expected = KernelService.kernel(ensemble.beta, ensemble.n_levels, x_p, x_q)
        report.add_check(f"{label} mc", expected, estimate.value, SIGMA_GATE * estimate.uncertainty)
        # passes when at least COVERAGE_TARGET of the seeds bracket the analytic value
        report.add_check(f"{label} coverage over {repetitions} seeds", 1.0, fraction, 1.0 - COVERAGE_TARGET)

    logger.info(f"mc suite beta={ensemble.beta} N={ensemble.n_levels}: {report.summary}")
    return report
