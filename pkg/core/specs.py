"""
Value types shared across the numerical apps.
"""
import math
from dataclasses import dataclass, field
from typing import Tuple

from core.config import ConfigurationManager

GAMMA_BY_BETA = {1: 1, 2: 1, 4: -2}
ENSEMBLE_NAMES = {1: 'GOE', 2: 'GUE', 4: 'GSE'}


@dataclass(frozen=True)
class EnsembleSpec:
    """Dyson index beta, level number N (Kramers doublets for beta=4) and derived gamma."""
    beta: int
    n_levels: int

    def __post_init__(self):
        if self.beta not in GAMMA_BY_BETA:
            raise ValueError(f"beta must be one of 1, 2, 4 (got {self.beta}).")
        if int(self.n_levels) != self.n_levels or self.n_levels < 1:
            raise ValueError(f"Level number must be a positive integer (got {self.n_levels}).")

    @property
    def gamma(self) -> int:
        return GAMMA_BY_BETA[self.beta]

    @property
    def name(self) -> str:
        return ENSEMBLE_NAMES[self.beta]

    @property
    def matrix_dim(self) -> int:
        # GSE matrices live in the 2N x 2N complex representation
        return 2 * self.n_levels if self.beta == 4 else self.n_levels


@dataclass(frozen=True)
class EnergyArgs:
    x_p: float
    x_q: float
    eta: float

    def __post_init__(self):
        if not (math.isfinite(self.x_p) and math.isfinite(self.x_q)):
            raise ValueError("Energies must be finite.")
        if not self.eta > 0:
            raise ValueError(f"eta must be positive (got {self.eta}).")

    @property
    def x_p_minus(self) -> complex:
        return complex(self.x_p, -self.eta)


@dataclass(frozen=True)
class QuadratureSpec:
    abs_tol: float = 1e-11
    rel_tol: float = 1e-11
    max_subdivisions: int = 200
    eta_ladder: Tuple[float, ...] = field(default=(0.04, 0.02, 0.01, 0.005, 0.0025))

    def __post_init__(self):
        if self.abs_tol <= 0 or self.rel_tol <= 0:
            raise ValueError("Quadrature tolerances must be positive.")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be at least 1.")
        ladder = tuple(self.eta_ladder)
        if any(eta <= 0 for eta in ladder) or any(a <= b for a, b in zip(ladder, ladder[1:])):
            raise ValueError("eta_ladder must be positive and strictly decreasing.")
        object.__setattr__(self, 'eta_ladder', ladder)

    @classmethod
    def default(cls) -> 'QuadratureSpec':
        return cls(
            abs_tol=ConfigurationManager.get_setting('QUAD_ABS_TOL', 1e-11, float),
            rel_tol=ConfigurationManager.get_setting('QUAD_REL_TOL', 1e-11, float),
            max_subdivisions=ConfigurationManager.get_setting('QUAD_MAX_SUBDIVISIONS', 200, int),
            eta_ladder=tuple(ConfigurationManager.get_setting('ETA_LADDER', (0.04, 0.02, 0.01, 0.005, 0.0025))),
        )

    def quad_kwargs(self) -> dict:
        """Keyword arguments for scipy.integrate.quad."""
        return {'epsabs': self.abs_tol, 'epsrel': self.rel_tol, 'limit': self.max_subdivisions}
