import logging
import math

import numpy as np
from scipy import special as sp

from core.config import ConfigurationManager
from core.quadrature import integrate_plane, integrate_real, integrate_whole_line
from core.specs import GAMMA_BY_BETA, QuadratureSpec
from special.services import OscillatorService
from superint.jets import JetSeries, im_pole_functional, jet_order

logger = logging.getLogger(__name__)

# Looser default for the 2D validation routes; nested adaptive quadrature at 1e-11 is slow.
VALIDATION_TOL = 1e-9


def _check_levels(N: int, minimum: int = 1) -> int:
    if int(N) != N or N < minimum:
        raise ValueError(f"Level number must be an integer >= {minimum} (got {N}).")
    return int(N)


def _validation_spec(spec: QuadratureSpec = None) -> QuadratureSpec:
    return spec or QuadratureSpec(abs_tol=VALIDATION_TOL, rel_tol=VALIDATION_TOL)


def double_factorial(n: int) -> int:
    return math.prod(range(n, 0, -2)) if n > 0 else 1


def eps_weighted_hermite(n: int, x):
    """∫ ε(x - t) H_n(t) e^{-t²/2} dt = √(2^n n! √π) I_n(x)."""
    norm = math.sqrt(2.0 ** n * math.factorial(n) * math.sqrt(math.pi))
    return norm * OscillatorService.eps_convolution(n, x)


class SuperintegralService:
    """
    Reduced superspace eigenvalue integrals L_N^(β) and their building blocks.

    Pole integrals Im ∫ g(s)/(s - i0)^N ds go through the jet pole functional;
    the remaining smooth integrals are done by adaptive quadrature after
    moving the contour so the integrand is a real Gaussian times a polynomial.
    """

    # Unitary
    # --------------------------------------------------------------------------
    @staticmethod
    def l2_superint(N: int, x_p: float, x_q: float, spec: QuadratureSpec = None) -> float:
        """
        -(1/π²) ∬ e^{-(s₁+x_p)² + (i s₂+x_q)²} (i s₂)^N / (s₁ - i s₂) Im 1/(s₁^-)^N.

        With w = i s₂ the s₁ jet of w^N/(s₁ - w) is -Σ_m s₁^m w^{N-1-m}; the s₂
        contour is shifted to w = i t - x_q so the Gaussian becomes e^{-t²}.
        """
        N = _check_levels(N)
        spec = spec or QuadratureSpec.default()
        order = jet_order(N)
        gauss = JetSeries.gaussian(x_p, order)

        def integrand(t: float) -> float:
            w = complex(-x_q, t)
            geometric = JetSeries.polynomial([-w ** (N - 1 - m) for m in range(N)], order)
            pole = im_pole_functional(N, gauss * geometric)
            return math.exp(-t * t) * pole.real

        value = -integrate_real(integrand, -math.inf, math.inf, spec, label=f"L2_{N}") / math.pi ** 2
        logger.debug(f"l2_superint N={N} x_p={x_p} x_q={x_q} -> {value:.17g}")
        return value

    # Orthogonal
    # --------------------------------------------------------------------------
    @staticmethod
    def psi_goe(N: int, x_q):
        """√π (-1)^{N-1} / 2^{N-1} H_{N-1}(x_q)."""
        N = _check_levels(N)
        return math.sqrt(math.pi) * (-1) ** (N - 1) / 2.0 ** (N - 1) * OscillatorService.hermite(N - 1, x_q)

    @staticmethod
    def psi_goe_defining(N: int, x_q: float, spec: QuadratureSpec = None) -> float:
        """∫ ds₂ e^{(i s₂ + x_q)²} (i s₂)^{N-1}, after completing the square."""
        N = _check_levels(N)
        spec = spec or QuadratureSpec.default()

        def integrand(t: float) -> float:
            return math.exp(-t * t) * (complex(-x_q, t) ** (N - 1)).real

        return integrate_real(integrand, -math.inf, math.inf, spec, label=f"psi1_{N}")

    @staticmethod
    def integration_constant_goe(N: int) -> float:
        """c_N = 0 for even N, -4π 2^{N/2} / N!! for odd N."""
        N = _check_levels(N, minimum=0)
        if N % 2 == 0:
            return 0.0
        return -4.0 * math.pi * 2.0 ** (N / 2.0) / double_factorial(N)

    @staticmethod
    def omega_goe(N: int, x_p):
        """-e^{-x_p²/2} (4π (-1)^N / N! ∫ ε(x_p - t) H_N(t) e^{-t²/2} dt + c_N)."""
        N = _check_levels(N, minimum=0)
        step_integral = eps_weighted_hermite(N, x_p)
        c_N = SuperintegralService.integration_constant_goe(N)
        return -np.exp(-np.square(x_p) / 2.0) * (
            4.0 * math.pi * (-1) ** N / math.factorial(N) * step_integral + c_N
        )

    @staticmethod
    def omega_goe_contour(N: int, x_p: float, spec: QuadratureSpec = None, shift: float = None) -> float:
        """
        Defining double integral of ω_N in rotated eigenvalues u, v:

            Im ∬ 4|v| e^{-(u + x_p)² - v²} / ((u + v)^- (u - v)^-)^{N/2 + 1} du dv

        with u on the line Im u = -shift, where the η -> 0 limit is regular.
        Powers use the principal branch factor by factor.
        """
        N = _check_levels(N, minimum=0)
        spec = _validation_spec(spec)
        if shift is None:
            shift = ConfigurationManager.get_setting('CONTOUR_SHIFT', 1.0, float)
        power = N / 2.0 + 1.0

        def integrand(t: float, v: float) -> float:
            u = complex(t, -shift)
            value = 4.0 * v * np.exp(-(u + x_p) ** 2 - v * v) * (u + v) ** (-power) * (u - v) ** (-power)
            # even in v
            return 2.0 * value.imag

        return integrate_plane(integrand, (0.0, math.inf), (-math.inf, math.inf), spec, label=f"omega1_{N} contour")

    @staticmethod
    def omega_goe_bessel(x_p: float, spec: QuadratureSpec = None) -> float:
        """
        ω_1(x_p) = -8√π ∫_0^∞ cos(T x_p) e^{-T²/4} T B(T) dT,
        B(T) = ∫_0^∞ e^{-v²} J_1(T v) dv.
        """
        spec = _validation_spec(spec)

        def bessel_factor(T: float) -> float:
            if T == 0.0:
                return 0.0
            return integrate_real(lambda v: math.exp(-v * v) * sp.j1(T * v), 0.0, math.inf, spec,
                                  label="Bessel factor")

        def integrand(T: float) -> float:
            return math.cos(T * x_p) * math.exp(-T * T / 4.0) * T * bessel_factor(T)

        return -8.0 * math.sqrt(math.pi) * integrate_real(integrand, 0.0, math.inf, spec, label="omega1_1 Bessel")

    @staticmethod
    def integration_constant_from_contour(N: int, spec: QuadratureSpec = None) -> float:
        """c_N = -ω_N(0) - 4π (-1)^N / N! ∫ ε(-t) H_N(t) e^{-t²/2} dt with ω_N(0) by 2D quadrature."""
        omega_0 = SuperintegralService.omega_goe_contour(N, 0.0, spec)
        return -omega_0 - 4.0 * math.pi * (-1) ** N / math.factorial(N) * eps_weighted_hermite(N, 0.0)

    @staticmethod
    def m_goe(N: int, x_p, x_q):
        """(N / 8π²) ω_N(x_p) ψ_N(x_q)."""
        N = _check_levels(N)
        return N / (8.0 * math.pi ** 2) * SuperintegralService.omega_goe(N, x_p) * SuperintegralService.psi_goe(N, x_q)

    @staticmethod
    def l1_superint(N: int, x_p: float, x_q: float, spec: QuadratureSpec = None) -> float:
        return SuperintegralService.l2_superint(N, x_p, x_q, spec) + SuperintegralService.m_goe(N, x_p, x_q)

    # Symplectic
    # --------------------------------------------------------------------------
    @staticmethod
    def psi_gse(N: int, x_q):
        """(π / (2N)!) e^{-2x_q²} H_{2N}(√2 x_q)."""
        N = _check_levels(N)
        return (
            math.pi / math.factorial(2 * N) * np.exp(-2.0 * np.square(x_q))
            * OscillatorService.hermite(2 * N, math.sqrt(2.0) * np.asarray(x_q, dtype=float))
        )

    @staticmethod
    def psi_gse_defining(N: int, x_q: float) -> float:
        """Im ∫ e^{-(s + √2 x_q)²} / (s^-)^{2N+1} ds through the jet pole functional."""
        N = _check_levels(N)
        pole_order = 2 * N + 1
        return im_pole_functional(pole_order, JetSeries.gaussian(math.sqrt(2.0) * x_q, jet_order(pole_order)))

    @staticmethod
    def omega_gse(N: int, x_p):
        """-(√π / 2^{2N-3}) e^{x_p²} ∫ ε(√2 x_p - t) e^{-t²/2} H_{2N-1}(t) dt."""
        N = _check_levels(N)
        step_integral = eps_weighted_hermite(2 * N - 1, math.sqrt(2.0) * np.asarray(x_p, dtype=float))
        return -math.sqrt(math.pi) / 2.0 ** (2 * N - 3) * np.exp(np.square(x_p)) * step_integral

    @staticmethod
    def omega_gse_defining(N: int, x_p: float, spec: QuadratureSpec = None) -> float:
        """4 ∫ |v| e^{-v²} ∫ e^{-t²} Re (v² - (t + i√2 x_p)²)^{N-1} dt dv."""
        N = _check_levels(N)
        spec = _validation_spec(spec)
        shift = math.sqrt(2.0) * x_p

        def integrand(t: float, v: float) -> float:
            polynomial = (v * v - complex(t, shift) ** 2) ** (N - 1)
            return 8.0 * v * math.exp(-v * v - t * t) * polynomial.real

        return integrate_plane(integrand, (0.0, math.inf), (-math.inf, math.inf), spec, label=f"omega4_{N}")

    @staticmethod
    def m_gse(N: int, x_p, x_q):
        """(2N / 8π²) ω_N^(4)(x_p) ψ_N^(4)(x_q); enters L^(4) with a minus sign."""
        N = _check_levels(N)
        return 2 * N / (8.0 * math.pi ** 2) * SuperintegralService.omega_gse(N, x_p) * SuperintegralService.psi_gse(N, x_q)

    @staticmethod
    def l4_superint(N: int, x_p: float, x_q: float, spec: QuadratureSpec = None) -> float:
        """L_{2N}^(2)(√2 x_q, √2 x_p) - M^(4)(x_p, x_q)."""
        N = _check_levels(N)
        root2 = math.sqrt(2.0)
        unitary = SuperintegralService.l2_superint(2 * N, root2 * x_q, root2 * x_p, spec)
        return unitary - float(SuperintegralService.m_gse(N, x_p, x_q))

    @staticmethod
    def l4_even_sum_form(N: int, x_p, x_q):
        """e^{x_p² - x_q²} (K_{2N}^(2)(√2x_p, √2x_q) + √N φ_{2N}(√2x_q) I_{2N-1}(√2x_p))."""
        N = _check_levels(N)
        a = math.sqrt(2.0) * np.asarray(x_p, dtype=float)
        b = math.sqrt(2.0) * np.asarray(x_q, dtype=float)
        partial = sum(OscillatorService.osc_wavefunction(n, a) * OscillatorService.osc_wavefunction(n, b)
                      for n in range(2 * N))
        step = math.sqrt(N) * OscillatorService.osc_wavefunction(2 * N, b) * OscillatorService.eps_convolution(2 * N - 1, a)
        return np.exp(np.square(x_p) - np.square(x_q)) * (partial + step)

    @staticmethod
    def l4_odd_sum_form(N: int, x_p, x_q):
        """e^{x_p² - x_q²} (K_{2N+1}^(2)(√2x_p, √2x_q) + √((2N+1)/2) φ_{2N}(√2x_q) I_{2N+1}(√2x_p))."""
        N = _check_levels(N)
        a = math.sqrt(2.0) * np.asarray(x_p, dtype=float)
        b = math.sqrt(2.0) * np.asarray(x_q, dtype=float)
        partial = sum(OscillatorService.osc_wavefunction(n, a) * OscillatorService.osc_wavefunction(n, b)
                      for n in range(2 * N + 1))
        step = math.sqrt((2 * N + 1) / 2.0) * OscillatorService.osc_wavefunction(2 * N, b) \
            * OscillatorService.eps_convolution(2 * N + 1, a)
        return np.exp(np.square(x_p) - np.square(x_q)) * (partial + step)

    # Shared
    # --------------------------------------------------------------------------
    @staticmethod
    def l_superint(beta: int, N: int, x_p: float, x_q: float, spec: QuadratureSpec = None) -> float:
        routes = {
            1: SuperintegralService.l1_superint,
            2: SuperintegralService.l2_superint,
            4: SuperintegralService.l4_superint,
        }
        if beta not in routes:
            raise ValueError(f"beta must be one of 1, 2, 4 (got {beta}).")
        return routes[beta](N, x_p, x_q, spec)

    @staticmethod
    def kernel_from_l(beta: int, x_p, x_q, L):
        """e^{γ(x_p² - x_q²)/2} L / √|γ| = K_N^(β)(x_q, x_p)."""
        gamma = GAMMA_BY_BETA[beta]
        return np.exp(gamma * (np.square(x_p) - np.square(x_q)) / 2.0) * L / math.sqrt(abs(gamma))

    @staticmethod
    def kernel_superint(beta: int, N: int, x_p: float, x_q: float, spec: QuadratureSpec = None) -> float:
        """K_N^(β)(x_p, x_q) through the superintegral route."""
        # L is built with the arguments interchanged
        L = SuperintegralService.l_superint(beta, N, x_q, x_p, spec)
        return float(SuperintegralService.kernel_from_l(beta, x_q, x_p, L))

    @staticmethod
    def step_moment(N: int, spec: QuadratureSpec = None) -> float:
        """b_N = ∫ ε(t) e^{-t²/2} H_N(t) dt by quadrature."""
        N = _check_levels(N, minimum=0)
        spec = spec or QuadratureSpec.default()

        def integrand(t: float) -> float:
            return OscillatorService.eps(t) * math.exp(-t * t / 2.0) * OscillatorService.hermite(N, t)

        return integrate_whole_line(integrand, spec, label=f"b_{N}")
