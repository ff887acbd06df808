import logging
import math
from dataclasses import dataclass
from itertools import combinations
from typing import Tuple

import numpy as np
from scipy import linalg

from core.config import ConfigurationManager
from core.exceptions import DegenerateArguments
from correlations.quaternion import SelfDualQuaternionMatrix, qdet
from kernels.services import KernelService
from special.services import OscillatorService

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EnergyTuple:
    xs: Tuple[float, ...]

    def __post_init__(self):
        xs = tuple(float(x) for x in self.xs)
        if not xs:
            raise ValueError("EnergyTuple needs at least one energy.")
        if not all(math.isfinite(x) for x in xs):
            raise ValueError("Energies must be finite.")
        floor = ConfigurationManager.get_setting('DEGENERACY_FLOOR', 1e-8, float)
        for a, b in combinations(xs, 2):
            if abs(a - b) < floor:
                raise DegenerateArguments(
                    f"Energies {a!r} and {b!r} closer than {floor:g}; contact terms are not evaluated."
                )
        object.__setattr__(self, 'xs', xs)

    @classmethod
    def of(cls, xs) -> 'EnergyTuple':
        return xs if isinstance(xs, cls) else cls(tuple(xs))

    @property
    def k(self) -> int:
        return len(self.xs)

    def grid(self) -> Tuple[np.ndarray, np.ndarray]:
        """(X_p, X_q) with X_p[p, q] = x_p and X_q[p, q] = x_q."""
        x = np.asarray(self.xs)
        return np.meshgrid(x, x, indexing='ij')


class CorrelationService:
    """
    k-point correlation functions R_k^(β)(x_1..x_k).

    GUE: det[K(x_p, x_q)]. GOE/GSE: qdet of the self-dual matrix with blocks
    [[K(x_p, x_q), D K], [J K, K(x_q, x_p)]] (antisymmetrized operators), or
    the equivalent assembly from Mehta's S_N (`*_mehta`).
    """

    @staticmethod
    def r_k_gue(N: int, xs) -> float:
        energies = EnergyTuple.of(xs)
        X_p, X_q = energies.grid()
        matrix = np.atleast_2d(KernelService.kernel_gue(N, X_p, X_q))
        lu, piv = linalg.lu_factor(matrix, check_finite=False)
        swaps = np.count_nonzero(piv != np.arange(len(piv)))
        value = float((-1) ** swaps * np.prod(np.diag(lu)))
        logger.debug(f"r_k_gue N={N} k={energies.k} -> {value:.6e}")
        return value

    @staticmethod
    def quaternion_matrix(beta: int, N: int, xs) -> SelfDualQuaternionMatrix:
        if beta not in (1, 4):
            raise ValueError("Quaternion assembly is defined for beta = 1 and beta = 4.")
        energies = EnergyTuple.of(xs)
        X_p, X_q = energies.grid()
        kernel = KernelService.expansion(beta, N)
        return SelfDualQuaternionMatrix.from_components(
            kernel.evaluate(X_p, X_q),
            KernelService.op_D(kernel, beta, X_p, X_q),
            KernelService.op_J(kernel, beta, X_p, X_q),
            kernel.evaluate(X_q, X_p),
        )

    @staticmethod
    def r_k_goe(N: int, xs) -> float:
        return qdet(CorrelationService.quaternion_matrix(1, N, xs))

    @staticmethod
    def r_k_gse(N: int, xs) -> float:
        return qdet(CorrelationService.quaternion_matrix(4, N, xs))

    @staticmethod
    def r_k(beta: int, N: int, xs) -> float:
        if beta == 2:
            return CorrelationService.r_k_gue(N, xs)
        return qdet(CorrelationService.quaternion_matrix(beta, N, xs))

    # Mehta's S_N forms
    # --------------------------------------------------------------------------
    @staticmethod
    def mehta_matrix_goe(N: int, xs) -> SelfDualQuaternionMatrix:
        """
        [[S(x_p,x_q) + α(x_p), -∂_q S(x_p,x_q)],
         [ε S(x_p,x_q) + A(x_p) - A(x_q) - ε(x_p - x_q), S(x_q,x_p) + α(x_q)]]
        """
        energies = EnergyTuple.of(xs)
        X_p, X_q = energies.grid()
        s = KernelService.mehta_s_expansion(N)
        alpha_p = OscillatorService.alpha(N, X_p)
        alpha_q = OscillatorService.alpha(N, X_q)
        step = (
            s.eps_first(X_p, X_q)
            + OscillatorService.alpha_antiderivative(N, X_p) - OscillatorService.alpha_antiderivative(N, X_q)
            - OscillatorService.eps(X_p - X_q)
        )
        return SelfDualQuaternionMatrix.from_components(
            s.evaluate(X_p, X_q) + alpha_p, -s.d_second(X_p, X_q), step, s.evaluate(X_q, X_p) + alpha_q,
        )

    @staticmethod
    def mehta_matrix_gse(N: int, xs) -> SelfDualQuaternionMatrix:
        """(1/√2) [[S_M(u_p,u_q), -∂_q S_M], [ε S_M, S_M(u_q,u_p)]] at u = √2 x, M = 2N + 1."""
        energies = EnergyTuple.of(xs)
        X_p, X_q = energies.grid()
        s = KernelService.mehta_s_expansion(2 * N + 1)
        U_p, U_q = math.sqrt(2.0) * X_p, math.sqrt(2.0) * X_q
        c = 1.0 / math.sqrt(2.0)
        return SelfDualQuaternionMatrix.from_components(
            c * s.evaluate(U_p, U_q), -c * s.d_second(U_p, U_q), c * s.eps_first(U_p, U_q), c * s.evaluate(U_q, U_p),
        )

    @staticmethod
    def r_k_goe_mehta(N: int, xs) -> float:
        return qdet(CorrelationService.mehta_matrix_goe(N, xs))

    @staticmethod
    def r_k_gse_mehta(N: int, xs) -> float:
        return qdet(CorrelationService.mehta_matrix_gse(N, xs))
