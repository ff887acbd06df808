"""
Truncated Taylor series ("jets") around s = 0 and the pole functional

    ∫ g(s) Im 1/(s - i0)^N ds = π · [s^(N-1)] g(s)

that turns every singular pole integral into a coefficient lookup.
A finite-eta contour evaluation with extrapolation to eta -> 0 is kept
alongside as an independent check.
"""
import logging
import math
from typing import Callable, Sequence, Tuple, Union

import numpy as np

from core.config import ConfigurationManager
from core.exceptions import InsufficientJetOrder, QuadratureFailure
from core.quadrature import integrate_real
from core.specs import QuadratureSpec

logger = logging.getLogger(__name__)

Number = Union[int, float, complex]


def jet_order(pole_order: int) -> int:
    """Number of coefficients to carry for a pole of the given order."""
    return pole_order + ConfigurationManager.get_setting('JET_GUARD_TERMS', 4, int)


class JetSeries:
    """
    Coefficients c_0..c_{n-1} of a function of s around s = 0.

    All arithmetic is exact truncated-polynomial algebra; results are
    truncated to the shorter operand.
    """

    __slots__ = ('coefficients',)

    def __init__(self, coefficients: Sequence[Number]):
        coefficients = np.asarray(coefficients)
        if coefficients.ndim != 1 or coefficients.size == 0:
            raise ValueError("A jet needs a non-empty 1D coefficient sequence.")
        if not np.iscomplexobj(coefficients):
            coefficients = coefficients.astype(float)
        self.coefficients = coefficients

    # Constructors
    # --------------------------------------------------------------------------
    @classmethod
    def constant(cls, value: Number, order: int) -> 'JetSeries':
        coefficients = np.zeros(order, dtype=complex if isinstance(value, complex) else float)
        coefficients[0] = value
        return cls(coefficients)

    @classmethod
    def polynomial(cls, coefficients: Sequence[Number], order: int) -> 'JetSeries':
        """Polynomial given by ascending coefficients, padded or cut to `order` terms."""
        coefficients = np.asarray(coefficients)
        padded = np.zeros(order, dtype=np.result_type(coefficients, float))
        n = min(order, coefficients.size)
        padded[:n] = coefficients[:n]
        return cls(padded)

    @classmethod
    def gaussian(cls, shift: Number, order: int) -> 'JetSeries':
        """exp(-(s + shift)^2)."""
        return cls.polynomial([-shift * shift, -2 * shift, -1], order).exp()

    # Arithmetic
    # --------------------------------------------------------------------------
    @property
    def order(self) -> int:
        return self.coefficients.size

    def coefficient(self, k: int) -> Number:
        if k >= self.order:
            raise InsufficientJetOrder(f"Coefficient {k} requested from a jet with {self.order} terms.")
        return self.coefficients[k].item()

    def _coerce(self, other) -> 'JetSeries':
        if isinstance(other, JetSeries):
            return other
        return JetSeries.constant(other, self.order)

    def __add__(self, other) -> 'JetSeries':
        other = self._coerce(other)
        n = min(self.order, other.order)
        return JetSeries(self.coefficients[:n] + other.coefficients[:n])

    __radd__ = __add__

    def __neg__(self) -> 'JetSeries':
        return JetSeries(-self.coefficients)

    def __sub__(self, other) -> 'JetSeries':
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> 'JetSeries':
        return self._coerce(other) - self

    def __mul__(self, other) -> 'JetSeries':
        if not isinstance(other, JetSeries):
            return JetSeries(self.coefficients * other)
        n = min(self.order, other.order)
        return JetSeries(np.convolve(self.coefficients[:n], other.coefficients[:n])[:n])

    __rmul__ = __mul__

    def __truediv__(self, other) -> 'JetSeries':
        if not isinstance(other, JetSeries):
            return JetSeries(self.coefficients / other)
        n = min(self.order, other.order)
        a, b = self.coefficients[:n], other.coefficients[:n]
        if b[0] == 0:
            raise ZeroDivisionError("Jet division needs a nonzero constant term.")
        q = np.zeros(n, dtype=np.result_type(a, b))
        for k in range(n):
            q[k] = (a[k] - np.dot(b[1:k + 1], q[k - 1::-1][:k])) / b[0]
        return JetSeries(q)

    def exp(self) -> 'JetSeries':
        """exp of a jet via h' = f' h, i.e. h_k = (1/k) Σ_j j f_j h_{k-j}."""
        f = self.coefficients
        n = f.size
        h = np.zeros(n, dtype=np.result_type(f, float))
        h[0] = np.exp(f[0])
        j = np.arange(1, n)
        for k in range(1, n):
            h[k] = np.dot(j[:k] * f[1:k + 1], h[k - 1::-1][:k]) / k
        return JetSeries(h)

    def evaluate(self, s: Number) -> Number:
        return np.polyval(self.coefficients[::-1], s)

    def __repr__(self) -> str:
        return f"JetSeries({self.coefficients!r})"


def im_pole_functional(pole_order: int, g: JetSeries) -> Number:
    """
    ∫ g(s) Im 1/(s - i0)^N ds for the jet of a smooth factor g around s = 0.

    Im 1/(s - i0)^N = π (-1)^(N-1) δ^(N-1)(s)/(N-1)!, and integrating by parts
    N-1 times cancels the sign, leaving π g^(N-1)(0)/(N-1)!.
    """
    if pole_order < 1:
        raise ValueError("Pole order must be at least 1.")
    if g.order < pole_order:
        raise InsufficientJetOrder(f"Pole of order {pole_order} needs {pole_order} coefficients, jet has {g.order}.")
    return math.pi * g.coefficient(pole_order - 1)


def im_pole_finite_eta(pole_order: int, g: Callable[[complex], complex], eta: float,
                       spec: QuadratureSpec, shift: float = None) -> float:
    """
    Im ∫ g(s)/(s - i eta)^N ds for entire g with Gaussian decay, real on the real axis.

    The contour is moved to Im s = -shift, away from the pole at +i eta, so the
    integrand is smooth for every eta >= 0.
    """
    if shift is None:
        shift = ConfigurationManager.get_setting('CONTOUR_SHIFT', 1.0, float)

    def integrand(t: float) -> float:
        s = complex(t, -shift)
        return (g(s) / (s - 1j * eta) ** pole_order).imag

    return integrate_real(integrand, -math.inf, math.inf, spec,
                          label=f"pole order {pole_order} at eta={eta:g}")


def richardson_limit(etas: Sequence[float], values: Sequence[float]) -> Tuple[float, float]:
    """
    Neville extrapolation of values(eta) to eta = 0.

    Returns (limit, error estimate) where the estimate is the change between
    the last two diagonal entries of the tableau.
    """
    etas = np.asarray(etas, dtype=float)
    table = np.asarray(values, dtype=float).copy()
    if etas.size != table.size or etas.size < 2:
        raise ValueError("Need at least two (eta, value) pairs of equal length.")

    diagonal = [table[0]]
    for level in range(1, etas.size):
        for i in range(etas.size - level):
            table[i] = (etas[i] * table[i + 1] - etas[i + level] * table[i]) / (etas[i] - etas[i + level])
        diagonal.append(table[0])
    limit = diagonal[-1]
    previous = diagonal[-2]
    return float(limit), float(abs(limit - previous))


def pole_functional_by_extrapolation(pole_order: int, g: Callable[[complex], complex],
                                     spec: QuadratureSpec) -> float:
    values = [im_pole_finite_eta(pole_order, g, eta, spec) for eta in spec.eta_ladder]
    limit, error = richardson_limit(spec.eta_ladder, values)
    logger.debug(f"pole order {pole_order}: extrapolated {limit:.15g} (tableau change {error:.2e})")
    if not np.isfinite(limit):
        raise QuadratureFailure(f"Extrapolation of pole order {pole_order} produced {limit!r}.")
    return limit
