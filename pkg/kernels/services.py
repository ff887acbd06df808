import logging
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from core.config import ConfigurationManager
from core.exceptions import DegenerateArguments
from core.specs import GAMMA_BY_BETA, QuadratureSpec
from kernels.expansions import (
    KernelExpansion, gse_expansion, goe_expansion, goe_s_expansion, gue_expansion,
)
from special.services import OscillatorService

logger = logging.getLogger(__name__)

ROUTES = ('analytic', 'mc', 'superint')


@dataclass(frozen=True)
class KernelValue:
    value: float
    route: str
    uncertainty: float = 0.0

    def __post_init__(self):
        if self.route not in ROUTES:
            raise ValueError(f"Unknown route '{self.route}'.")
        if self.uncertainty < 0:
            raise ValueError("Uncertainty must be nonnegative.")
        if self.route != 'mc' and self.uncertainty != 0:
            raise ValueError("Deterministic routes carry zero uncertainty.")


@lru_cache(maxsize=64)
def _cached_expansion(kind: str, N: int) -> KernelExpansion:
    builders = {
        'gue': gue_expansion,
        'goe': goe_expansion,
        'goe_s': goe_s_expansion,
        'gse': gse_expansion,
    }
    return builders[kind](N)


def _check_levels(N: int) -> None:
    if int(N) != N or N < 1:
        raise ValueError(f"Level number must be a positive integer (got {N}).")


class KernelService:
    """
    Analytic finite-N kernels K_N^(β)(x_p, x_q), Mehta's S_N, the operators
    D, I, J, and the difference-quotient assembly from a generating-function value.

    Argument order: K(x_p, x_q) carries the "left" functions (φ_{N-1}, α_N) at x_p
    and the eps-convolution at x_q.
    """

    @staticmethod
    def expansion(beta: int, N: int) -> KernelExpansion:
        _check_levels(N)
        kinds = {1: 'goe', 2: 'gue', 4: 'gse'}
        if beta not in kinds:
            raise ValueError(f"beta must be one of 1, 2, 4 (got {beta}).")
        return _cached_expansion(kinds[beta], int(N))

    @staticmethod
    def mehta_s_expansion(N: int) -> KernelExpansion:
        _check_levels(N)
        return _cached_expansion('goe_s', int(N))

    @staticmethod
    def kernel_gue(N: int, x_p, x_q):
        return KernelService.expansion(2, N).evaluate(x_p, x_q)

    @staticmethod
    def kernel_goe(N: int, x_p, x_q):
        return KernelService.expansion(1, N).evaluate(x_p, x_q)

    @staticmethod
    def kernel_gse(N: int, x_p, x_q):
        """N counts Kramers doublets; internally (1/√2) S_{2N+1}(√2 x_p, √2 x_q)."""
        return KernelService.expansion(4, N).evaluate(x_p, x_q)

    @staticmethod
    def kernel(beta: int, N: int, x_p, x_q):
        return KernelService.expansion(beta, N).evaluate(x_p, x_q)

    @staticmethod
    def s_mehta(N: int, x_p, x_q):
        """S_N = K_N^(1) - α_N(x_p)."""
        return KernelService.mehta_s_expansion(N).evaluate(x_p, x_q)

    @staticmethod
    def level_density(beta: int, N: int, x):
        return KernelService.expansion(beta, N).evaluate(x, x)

    # Operators (antisymmetrized in the two energies)
    # --------------------------------------------------------------------------
    @staticmethod
    def op_D(kernel: KernelExpansion, beta: int, x_p, x_q):
        """½ (∂_{x_p} K(x_q, x_p) - ∂_{x_q} K(x_p, x_q)) via the φ ladder."""
        return 0.5 * (kernel.d_second(x_q, x_p) - kernel.d_second(x_p, x_q))

    @staticmethod
    def op_I(kernel: KernelExpansion, beta: int, x_p, x_q, spec: QuadratureSpec = None, method: str = 'closed'):
        """½ (∫ ε(x_p - t) K(t, x_q) dt - (x_p ↔ x_q))."""
        if method == 'closed':
            return 0.5 * (kernel.eps_first(x_p, x_q) - kernel.eps_first(x_q, x_p))
        if method == 'quadrature':
            spec = spec or QuadratureSpec.default()
            forward = kernel.eps_first_quadrature(float(x_p), float(x_q), spec)
            backward = kernel.eps_first_quadrature(float(x_q), float(x_p), spec)
            return 0.5 * (forward - backward)
        raise ValueError(f"Unknown method '{method}'.")

    @staticmethod
    def op_J(kernel: KernelExpansion, beta: int, x_p, x_q, spec: QuadratureSpec = None):
        """
        Lower-left entry of the quaternion block.

        GOE: I K + ½ (A(x_p) - A(x_q)) - ε(x_p - x_q), A(x) = ∫_0^x α_N.
        The closed-form I K only carries half of the α antiderivative difference.
        GSE: no step term and no α, J K = I K.
        """
        ik = KernelService.op_I(kernel, beta, x_p, x_q, spec)
        if beta == 4:
            return ik
        if beta != 1:
            raise ValueError("op_J is defined for the GOE and GSE kernels only.")
        correction = -OscillatorService.eps(np.subtract(x_p, x_q))
        if kernel.alpha_levels:
            N = kernel.alpha_levels
            correction = correction + 0.5 * (
                OscillatorService.alpha_antiderivative(N, x_p) - OscillatorService.alpha_antiderivative(N, x_q)
            )
        return ik + correction

    # Generating function -> kernel
    # --------------------------------------------------------------------------
    @staticmethod
    def difference_prefactor(beta: int, x_p: float, x_q: float) -> float:
        """e^{γ(x_p² - x_q²)/2} / (γ π)."""
        gamma = GAMMA_BY_BETA[beta]
        return math.exp(gamma * (x_p * x_p - x_q * x_q) / 2.0) / (gamma * math.pi)

    @staticmethod
    def kernel_from_z1(beta: int, N: int, x_p: float, x_q: float, z1_value: complex) -> float:
        """
        (1/(γπ)) e^{γ(x_p²-x_q²)/2} Im[(Z_1 - 1)/(x_q - x_p)] = K_N^(β)(x_q, x_p).
        """
        floor = ConfigurationManager.get_setting('DEGENERACY_FLOOR', 1e-8, float)
        if abs(x_p - x_q) < floor:
            raise DegenerateArguments(
                f"|x_p - x_q| = {abs(x_p - x_q):.3e} below floor {floor:g}; use level_density for the diagonal."
            )
        quotient = (complex(z1_value) - 1.0) / (x_q - x_p)
        return KernelService.difference_prefactor(beta, x_p, x_q) * quotient.imag
