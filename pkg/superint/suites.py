"""
Verification suites for the superintegral route. Each returns a
VerificationReport; failed checks are recorded, never raised.
"""
import logging
import math

import numpy as np

from core.reports import VerificationReport
from core.specs import QuadratureSpec
from kernels.services import KernelService
from special.services import OscillatorService
from superint.jets import JetSeries, im_pole_functional, jet_order, pole_functional_by_extrapolation
from superint.services import SuperintegralService, double_factorial

logger = logging.getLogger(__name__)

OMEGA_1_AT_ORIGIN = -8.0 * math.pi + 4.0 * math.sqrt(2.0) * math.pi
C_1 = -4.0 * math.sqrt(2.0) * math.pi
CLOSURE_MAX_LEVELS = {1: 8, 2: 8, 4: 4}


def closure_grid():
    """Off-diagonal pairs of the 5x5 grid on [-1.5, 1.5]²."""
    axis = np.linspace(-1.5, 1.5, 5)
    return [(float(a), float(b)) for a in axis for b in axis if a != b]


def golden_constants():
    """(name, closed form, value) rows for the constants table."""
    rows = [
        ('c_0', '0', SuperintegralService.integration_constant_goe(0)),
        ('c_1', '-4*sqrt(2)*pi', SuperintegralService.integration_constant_goe(1)),
    ]
    for N in (3, 5, 7):
        rows.append((f"c_{N}", f"-4*pi*2^({N}/2)/{N}!!", SuperintegralService.integration_constant_goe(N)))
    rows.append(('omega_1(0)', '-8*pi+4*sqrt(2)*pi', float(SuperintegralService.omega_goe(1, 0.0))))
    return rows


def recursion_suite(N_max: int = 12) -> VerificationReport:
    if N_max < 2:
        raise ValueError("recursion_suite needs N_max >= 2.")
    report = VerificationReport('recursions')
    grid = np.linspace(-1.5, 1.5, 7)
    h = 1e-5
    omega = SuperintegralService.omega_goe

    for N in range(0, N_max - 1):
        factor = N / 2.0 + 1.0
        for x in grid:
            # ω_N - (N/2+1) ω_{N+2} = 4π (-1)^{N+1}/(N+1)! H_{N+1}(x) e^{-x²}
            source = 4.0 * math.pi * (-1) ** (N + 1) / math.factorial(N + 1) \
                * OscillatorService.hermite(N + 1, x) * math.exp(-x * x)
            residual = omega(N, x) - factor * omega(N + 2, x) - source
            report.add_bound(f"omega recursion difference N={N} x={x:+.2f}", residual, 1e-5)

            # -(N/2+1)(∂ + 2x) ω_{N+2} = ∂ ω_N, derivatives by central differences
            d_upper = (omega(N + 2, x + h) - omega(N + 2, x - h)) / (2 * h)
            d_lower = (omega(N, x + h) - omega(N, x - h)) / (2 * h)
            residual = -factor * (d_upper + 2 * x * omega(N + 2, x)) - d_lower
            report.add_bound(f"omega recursion derivative N={N} x={x:+.2f}", residual, 1e-5)

    moments = {n: SuperintegralService.step_moment(n) for n in range(0, N_max + 3)}
    for N in range(0, N_max + 1):
        bracket = OscillatorService.hermite(N + 1, 0.0) + (N + 1) * moments[N] - 0.5 * moments[N + 2]
        rhs = 4.0 * math.pi * (-1) ** (N + 1) / math.factorial(N + 1) * bracket
        report.add_bound(f"integration-constant recursion rhs N={N}", rhs, 1e-8)

        lhs = SuperintegralService.integration_constant_goe(N) \
            - (N / 2.0 + 1.0) * SuperintegralService.integration_constant_goe(N + 2)
        report.add_bound(f"c recursion N={N}", lhs, 1e-10)

    c = C_1
    for N in range(3, N_max + 1, 2):
        c = c / ((N - 2) / 2.0 + 1.0)
        closed = -4.0 * math.pi * 2.0 ** (N / 2.0) / double_factorial(N)
        report.add_check(f"c_{N} from recursion", closed, c, 1e-8)

    logger.info(f"recursion suite: {report.summary}")
    return report


def constants_suite(spec: QuadratureSpec = None) -> VerificationReport:
    report = VerificationReport('constants')
    svc = SuperintegralService

    report.add_check('c_0 closed form', 0.0, svc.integration_constant_goe(0), 0.0)
    report.add_check('c_1 closed form', C_1, svc.integration_constant_goe(1), 1e-8)

    c = C_1
    for N in (3, 5, 7):
        c = c / ((N - 2) / 2.0 + 1.0)
        report.add_check(f"c_{N} via recursion", -4.0 * math.pi * 2.0 ** (N / 2.0) / double_factorial(N), c, 1e-8)

    report.add_check('omega_1(0) closed form', OMEGA_1_AT_ORIGIN, svc.omega_goe(1, 0.0), 1e-10)
    report.add_check('omega_1(0) 2D contour', OMEGA_1_AT_ORIGIN, svc.omega_goe_contour(1, 0.0, spec), 1e-6)
    report.add_check('omega_1(0) Bessel', OMEGA_1_AT_ORIGIN, svc.omega_goe_bessel(0.0, spec), 1e-6)
    report.add_check('c_0 from 2D contour', 0.0, svc.integration_constant_from_contour(0, spec), 1e-6)
    report.add_check('c_1 from 2D contour', C_1, svc.integration_constant_from_contour(1, spec), 1e-6)

    logger.info(f"constants suite: {report.summary}")
    return report


def closure_suite(beta: int, N_max: int = None, spec: QuadratureSpec = None, points=None) -> VerificationReport:
    """Superintegral kernel against the analytic kernel, N = 1..N_max on the closure grid."""
    N_max = N_max or CLOSURE_MAX_LEVELS[beta]
    points = points or closure_grid()
    report = VerificationReport(f"closure.beta{beta}")
    for N in range(1, N_max + 1):
        for x_p, x_q in points:
            got = SuperintegralService.kernel_superint(beta, N, x_p, x_q, spec)
            expected = KernelService.kernel(beta, N, x_p, x_q)
            report.add_check(f"K{beta}_{N}({x_p:+.3f},{x_q:+.3f})", expected, got, 1e-7)
    logger.info(f"closure suite beta={beta}: {report.summary}")
    return report


def identity_suite(spec: QuadratureSpec = None) -> VerificationReport:
    report = VerificationReport('identities')
    spec = spec or QuadratureSpec.default()

    x = np.linspace(-3.0, 3.0, 9)
    conv = OscillatorService.eps_convolution_table(41, x)
    phi = OscillatorService.wavefunction_table(41, x)
    for n in range(1, 41):
        residual = math.sqrt(n / 2.0) * conv[n - 1] - phi[n] - math.sqrt((n + 1) / 2.0) * conv[n + 1]
        report.add_bound(f"eps stepping n={n}", float(np.max(np.abs(residual))), 1e-10)

    for N in range(1, 31):
        x_p, x_q = 0.7, -0.45
        lhs = (x_p - x_q) * KernelService.kernel_gue(N, x_p, x_q)
        rhs = math.sqrt(N / 2.0) * (
            OscillatorService.osc_wavefunction(N, x_p) * OscillatorService.osc_wavefunction(N - 1, x_q)
            - OscillatorService.osc_wavefunction(N - 1, x_p) * OscillatorService.osc_wavefunction(N, x_q)
        )
        report.add_bound(f"Christoffel-Darboux N={N}", lhs - rhs, 1e-9)

    shift = 0.3
    for order in range(1, 10):
        exact = im_pole_functional(order, JetSeries.gaussian(shift, jet_order(order)))
        extrapolated = pole_functional_by_extrapolation(order, lambda s: np.exp(-(s + shift) ** 2), spec)
        report.add_check(f"pole functional order={order}", exact, extrapolated, 1e-6)

    for N in range(1, 5):
        for x_q in (-0.6, 0.7):
            report.add_check(
                f"psi1 defining N={N} x={x_q:+.2f}", SuperintegralService.psi_goe(N, x_q),
                SuperintegralService.psi_goe_defining(N, x_q, spec), 1e-8,
            )
            report.add_check(
                f"psi4 defining N={N} x={x_q:+.2f}", SuperintegralService.psi_gse(N, x_q),
                SuperintegralService.psi_gse_defining(N, x_q), 1e-8,
            )
        for x_p, x_q in ((0.4, -0.2), (-1.1, 0.8)):
            report.add_check(
                f"L4 even vs odd sum form N={N} ({x_p:+.2f},{x_q:+.2f})",
                SuperintegralService.l4_odd_sum_form(N, x_p, x_q), SuperintegralService.l4_even_sum_form(N, x_p, x_q), 1e-10,
            )

    for N in range(1, 7):
        x_p, x_q = 0.35, -0.8
        difference = KernelService.kernel_goe(N, x_q, x_p) - KernelService.kernel_gue(N, x_q, x_p)
        expected = math.exp((x_q ** 2 - x_p ** 2) / 2.0) * difference
        report.add_check(f"M1 kernel difference N={N}", expected, SuperintegralService.m_goe(N, x_p, x_q), 1e-9)

    logger.info(f"identity suite: {report.summary}")
    return report


def superint_suite(beta: int = None, N_max: int = None, spec: QuadratureSpec = None) -> VerificationReport:
    """Closure for one ensemble (or all three) plus the identity checks."""
    report = VerificationReport('superint')
    for b in ([beta] if beta else [1, 2, 4]):
        report.extend(closure_suite(b, N_max, spec))
    report.extend(identity_suite(spec))
    return report
