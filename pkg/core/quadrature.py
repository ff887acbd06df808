"""
Thin wrappers around scipy.integrate.quad that turn unmet tolerances into
QuadratureFailure instead of warnings.
"""
import logging
import math
from typing import Callable

import numpy as np
from scipy import integrate

from core.exceptions import QuadratureFailure
from core.specs import QuadratureSpec

logger = logging.getLogger(__name__)

# quad's error estimate is conservative; accept up to this multiple of the request.
TOLERANCE_SLACK = 1e3


def integrate_real(func: Callable[[float], float], lo: float, hi: float,
                   spec: QuadratureSpec, label: str = 'integral', points=None) -> float:
    """
    Integrate a real function over [lo, hi] (infinite bounds allowed).

    Raises QuadratureFailure if the reported error exceeds the (slackened) tolerance.
    """
    kwargs = spec.quad_kwargs()
    if points is not None and math.isfinite(lo) and math.isfinite(hi):
        kwargs['points'] = points
    result = integrate.quad(func, lo, hi, full_output=1, **kwargs)
    value, abserr = result[0], result[1]
    allowed = TOLERANCE_SLACK * max(spec.abs_tol, spec.rel_tol * abs(value))

    if not np.isfinite(value) or abserr > allowed:
        message = result[3] if len(result) > 3 else 'tolerance not met'
        logger.error(f"{label}: quad value={value!r} err={abserr:.3e} allowed={allowed:.3e} ({message})")
        raise QuadratureFailure(f"{label}: error estimate {abserr:.3e} exceeds {allowed:.3e}")

    logger.debug(f"{label}: value={value:.17g} err={abserr:.3e}")
    return value


def integrate_whole_line(func: Callable[[float], float], spec: QuadratureSpec,
                         label: str = 'integral', split: float = 0.0) -> float:
    """Integrate over the real line, split at `split` (kinks of eps-type integrands)."""
    left = integrate_real(func, -math.inf, split, spec, f"{label} (left)")
    right = integrate_real(func, split, math.inf, spec, f"{label} (right)")
    return left + right


def integrate_plane(func: Callable[[float, float], float], outer: tuple, inner: tuple,
                    spec: QuadratureSpec, label: str = 'integral') -> float:
    """
    ∫_outer dv ∫_inner dt func(t, v) with scipy's nested dblquad.

    Bounds are (lo, hi) pairs; infinite bounds allowed.
    """
    value, abserr = integrate.dblquad(
        func, outer[0], outer[1], inner[0], inner[1], epsabs=spec.abs_tol, epsrel=spec.rel_tol,
    )
    allowed = TOLERANCE_SLACK * max(spec.abs_tol, spec.rel_tol * abs(value))
    if not np.isfinite(value) or abserr > allowed:
        logger.error(f"{label}: dblquad value={value!r} err={abserr:.3e} allowed={allowed:.3e}")
        raise QuadratureFailure(f"{label}: error estimate {abserr:.3e} exceeds {allowed:.3e}")

    logger.debug(f"{label}: value={value:.17g} err={abserr:.3e}")
    return value
