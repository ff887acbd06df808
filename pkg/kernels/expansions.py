"""
Kernels as finite sums of separable terms

    K(x, y) = Σ c · L(s x) · R(s y)

with factors φ_n, I_n (eps-convolution of φ_n) or the constant 1. Derivatives
in the second argument and eps-integrals in the first argument act factor by
factor in closed form.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

import numpy as np

from core.quadrature import integrate_whole_line
from core.specs import QuadratureSpec
from special.services import OscillatorService

logger = logging.getLogger(__name__)

PHI = 'phi'
EPS = 'eps'
ONE = 'one'


@dataclass(frozen=True)
class Term:
    coef: float
    left: Tuple[str, int]
    right: Tuple[str, int]


@dataclass
class KernelExpansion:
    """
    beta/n_levels identify the kernel; `alpha_levels` is N for the odd-N GOE
    kernel (which carries α_N(x_p)) and None otherwise.
    """
    beta: int
    n_levels: int
    terms: List[Term] = field(default_factory=list)
    scale: float = 1.0
    alpha_levels: int = None
    label: str = ''

    @property
    def max_order(self) -> int:
        return max(max(t.left[1], t.right[1]) for t in self.terms)

    def _tables(self, z) -> Dict[str, np.ndarray]:
        z = self.scale * np.asarray(z, dtype=float)
        n_max = self.max_order
        return {
            PHI: OscillatorService.wavefunction_table(n_max + 1, z),
            EPS: OscillatorService.eps_convolution_table(n_max, z),
            'dphi': OscillatorService.derivative_table(n_max, z),
        }

    @staticmethod
    def _value(factor, tables):
        kind, n = factor
        if kind == PHI:
            return tables[PHI][n]
        if kind == EPS:
            return tables[EPS][n]
        return 1.0

    def _derivative(self, factor, tables):
        kind, n = factor
        if kind == PHI:
            return self.scale * tables['dphi'][n]
        if kind == EPS:
            return self.scale * tables[PHI][n]
        return 0.0

    def _eps_integral(self, factor, tables):
        kind, n = factor
        if kind != PHI:
            raise ValueError(f"No closed-form eps-integral for a left factor of kind '{kind}'.")
        return tables[EPS][n] / self.scale

    def _combine(self, x, y, left_op, right_op):
        tx, ty = self._tables(x), self._tables(y)
        total = 0.0
        for term in self.terms:
            total = total + term.coef * left_op(term.left, tx) * right_op(term.right, ty)
        return total

    def evaluate(self, x, y):
        """K(x, y)."""
        return self._combine(x, y, self._value, self._value)

    def d_second(self, x, y):
        """∂/∂y K(x, y)."""
        return self._combine(x, y, self._value, self._derivative)

    def eps_first(self, x, y):
        """∫ ε(x - t) K(t, y) dt, closed form."""
        return self._combine(x, y, self._eps_integral, self._value)

    def eps_first_quadrature(self, x: float, y: float, spec: QuadratureSpec) -> float:
        """Same integral by adaptive quadrature over t, split at the step."""
        def integrand(t):
            return OscillatorService.eps(x - t) * float(self.evaluate(t, y))

        return integrate_whole_line(integrand, spec, label=f"eps-integral of {self.label}", split=x)


def gue_expansion(N: int) -> KernelExpansion:
    terms = [Term(1.0, (PHI, n), (PHI, n)) for n in range(N)]
    return KernelExpansion(beta=2, n_levels=N, terms=terms, label=f"K2_{N}")


def goe_s_expansion(N: int) -> KernelExpansion:
    """Mehta's S_N: the GUE sum plus √(N/2) φ_{N-1}(x) I_N(y)."""
    expansion = gue_expansion(N)
    expansion.terms.append(Term(math.sqrt(N / 2.0), (PHI, N - 1), (EPS, N)))
    expansion.beta = 1
    expansion.label = f"S_{N}"
    return expansion


def goe_expansion(N: int) -> KernelExpansion:
    expansion = goe_s_expansion(N)
    expansion.label = f"K1_{N}"
    if N % 2:
        norm = OscillatorService.wavefunction_integral(N - 1)
        expansion.terms.append(Term(1.0 / norm, (PHI, N - 1), (ONE, 0)))
        expansion.alpha_levels = N
    return expansion


def gse_expansion(N: int) -> KernelExpansion:
    """(1/√2) S_{2N+1}(√2 x, √2 y), N counting Kramers doublets."""
    M = 2 * N + 1
    s_terms = goe_s_expansion(M).terms
    terms = [Term(t.coef / math.sqrt(2.0), t.left, t.right) for t in s_terms]
    return KernelExpansion(beta=4, n_levels=N, terms=terms, scale=math.sqrt(2.0), label=f"K4_{N}")
