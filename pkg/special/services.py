import logging
import math
from typing import Union

import numpy as np
from scipy import special as sp

from core.specs import QuadratureSpec
from superint.jets import JetSeries, im_pole_functional, jet_order, pole_functional_by_extrapolation

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]

PI_QUARTER = math.pi ** 0.25
# Rescale the unnormalized recursion before it leaves the float range.
_RESCALE_AT = 1e150
_LOG_RESCALE = 150 * math.log(10)


def _unwrap(values: np.ndarray, like) -> ArrayLike:
    return float(values) if np.ndim(like) == 0 else values


def _finite(z) -> np.ndarray:
    z = np.asarray(z, dtype=float)
    if not np.all(np.isfinite(z)):
        raise ValueError("Arguments must be finite.")
    return z


def _check_order(n: int) -> int:
    if int(n) != n or n < 0:
        raise ValueError(f"Order must be a nonnegative integer (got {n}).")
    return int(n)


class OscillatorService:
    """
    Hermite polynomials, oscillator wave functions φ_n, the step function ε
    and the eps-convolutions I_n(x) = ∫ ε(x - t) φ_n(t) dt.

    All functions accept scalars or numpy arrays and are pure.
    Valid range of the wave function recursion: n <= 1000, |z| <= 40.
    """

    @staticmethod
    def hermite(n: int, z: ArrayLike) -> ArrayLike:
        """Physicists' H_n via H_{k+1} = 2z H_k - 2k H_{k-1}."""
        n = _check_order(n)
        z_arr = _finite(z)
        h_prev, h = np.zeros_like(z_arr), np.ones_like(z_arr)
        for k in range(n):
            h_prev, h = h, 2 * z_arr * h - 2 * k * h_prev
        return _unwrap(h, z)

    @staticmethod
    def wavefunction_table(n_max: int, z: ArrayLike) -> np.ndarray:
        """
        φ_0..φ_{n_max} at z, shape (n_max + 1,) + shape(z).

        Uses the normalized recursion on the polynomial part and carries the
        Gaussian as a per-point log scale, so nothing under- or overflows.
        """
        n_max = _check_order(n_max)
        z = _finite(z)
        table = np.empty((n_max + 1,) + z.shape)
        log_scale = -0.5 * z * z
        prev = np.zeros_like(z)
        cur = np.full_like(z, 1.0 / PI_QUARTER)
        table[0] = cur * np.exp(log_scale)
        for n in range(n_max):
            prev, cur = cur, math.sqrt(2.0 / (n + 1)) * z * cur - math.sqrt(n / (n + 1)) * prev
            big = np.abs(cur) > _RESCALE_AT
            if np.any(big):
                cur = np.where(big, cur / _RESCALE_AT, cur)
                prev = np.where(big, prev / _RESCALE_AT, prev)
                log_scale = np.where(big, log_scale + _LOG_RESCALE, log_scale)
            table[n + 1] = cur * np.exp(log_scale)
        return table

    @staticmethod
    def osc_wavefunction(n: int, z: ArrayLike) -> ArrayLike:
        n = _check_order(n)
        return _unwrap(OscillatorService.wavefunction_table(n, z)[n], z)

    @staticmethod
    def derivative_table(n_max: int, z: ArrayLike) -> np.ndarray:
        """φ_n'(z) = √(n/2) φ_{n-1} - √((n+1)/2) φ_{n+1} for n = 0..n_max."""
        phi = OscillatorService.wavefunction_table(n_max + 1, z)
        deriv = np.empty_like(phi[:-1])
        for n in range(n_max + 1):
            lower = math.sqrt(n / 2.0) * phi[n - 1] if n > 0 else 0.0
            deriv[n] = lower - math.sqrt((n + 1) / 2.0) * phi[n + 1]
        return deriv

    @staticmethod
    def eps(z: ArrayLike) -> ArrayLike:
        """½ sign(z), with ε(0) = 0."""
        z_arr = _finite(z)
        return _unwrap(0.5 * np.sign(z_arr), z)

    @staticmethod
    def eps_convolution_table(n_max: int, x: ArrayLike) -> np.ndarray:
        """
        I_0..I_{n_max} at x, shape (n_max + 1,) + shape(x).

        I_0 = (π^¼/√2) erf(x/√2), then upward
        I_{n+1} = √(n/(n+1)) I_{n-1} - √(2/(n+1)) φ_n.
        """
        n_max = _check_order(n_max)
        x = _finite(x)
        phi = OscillatorService.wavefunction_table(n_max, x)
        table = np.empty((n_max + 1,) + x.shape)
        table[0] = PI_QUARTER / math.sqrt(2.0) * sp.erf(x / math.sqrt(2.0))
        for n in range(n_max):
            lower = math.sqrt(n / (n + 1)) * table[n - 1] if n > 0 else 0.0
            table[n + 1] = lower - math.sqrt(2.0 / (n + 1)) * phi[n]
        return table

    @staticmethod
    def eps_convolution(n: int, x: ArrayLike) -> ArrayLike:
        n = _check_order(n)
        return _unwrap(OscillatorService.eps_convolution_table(n, x)[n], x)

    @staticmethod
    def wavefunction_integral(n: int) -> float:
        """∫ φ_n = √2 π^¼ Π_{j<=n/2} √((2j-1)/(2j)) for even n, 0 for odd n."""
        n = _check_order(n)
        if n % 2:
            return 0.0
        ratio = 1.0
        for j in range(1, n // 2 + 1):
            ratio *= math.sqrt((2 * j - 1) / (2 * j))
        return math.sqrt(2.0) * PI_QUARTER * ratio

    @staticmethod
    def alpha(N: int, x: ArrayLike) -> ArrayLike:
        """α_N = φ_{N-1} / ∫φ_{N-1} for odd N, 0 for even N."""
        if N < 1:
            raise ValueError("alpha needs N >= 1.")
        x_arr = _finite(x)
        if N % 2 == 0:
            return _unwrap(np.zeros_like(x_arr), x)
        phi = OscillatorService.wavefunction_table(N - 1, x_arr)[N - 1]
        return _unwrap(phi / OscillatorService.wavefunction_integral(N - 1), x)

    @staticmethod
    def alpha_antiderivative(N: int, x: ArrayLike) -> ArrayLike:
        """A(x) = ∫_0^x α_N = I_{N-1}(x) / ∫φ_{N-1} (zero for even N)."""
        if N < 1:
            raise ValueError("alpha needs N >= 1.")
        x_arr = _finite(x)
        if N % 2 == 0:
            return _unwrap(np.zeros_like(x_arr), x)
        eps_conv = OscillatorService.eps_convolution_table(N - 1, x_arr)[N - 1]
        return _unwrap(eps_conv / OscillatorService.wavefunction_integral(N - 1), x)

    @staticmethod
    def hermite_integral_repr(N: int, x: float, spec: QuadratureSpec = None, route: str = 'jet') -> float:
        """
        H_N(x) = ((-1)^N N!/π) e^{x²} Im ∫ e^{-(ξ+x)²} / (ξ - i0)^{N+1} dξ.

        route='jet' applies the pole functional to the Taylor jet of the Gaussian;
        route='contour' evaluates finite eta on a shifted contour and extrapolates.
        """
        N = _check_order(N)
        x = float(_finite(x))
        prefactor = (-1) ** N * math.factorial(N) / math.pi * math.exp(x * x)

        if route == 'jet':
            jet = JetSeries.gaussian(x, jet_order(N + 1))
            integral = im_pole_functional(N + 1, jet)
        elif route == 'contour':
            spec = spec or QuadratureSpec.default()
            integral = pole_functional_by_extrapolation(N + 1, lambda s: np.exp(-(s + x) ** 2), spec)
        else:
            raise ValueError(f"Unknown route '{route}'.")

        logger.debug(f"hermite_integral_repr N={N} x={x} route={route}")
        return prefactor * integral
