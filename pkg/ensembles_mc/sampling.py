"""
Gaussian ensemble sampling with counter-based streams.

Matrices are distributed as exp(-(β/2) tr H²) with tr taken in the
quaternion sense for the GSE, which is exp(-tr H²) in the 2N x 2N complex
representation used here.
"""
import logging
import math

import numpy as np

from core.config import ConfigurationManager
from core.exceptions import EigenFailure
from core.specs import EnsembleSpec

logger = logging.getLogger(__name__)

SEED_LIMIT = 2 ** 64


def chunk_stream(seed: int, chunk_index: int) -> np.random.Generator:
    """
    Philox stream keyed by the seed, with the chunk index in the upper half
    of the 256-bit counter. Streams never overlap and do not depend on how
    chunks are scheduled.
    """
    if not 0 <= seed < SEED_LIMIT:
        raise ValueError(f"Seed must be a 64-bit unsigned integer (got {seed}).")
    return np.random.Generator(np.random.Philox(key=seed, counter=chunk_index << 128))


def chunk_bounds(samples: int, chunk: int):
    """[(chunk_index, start, stop)] covering range(samples)."""
    return [(i, start, min(start + chunk, samples)) for i, start in enumerate(range(0, samples, chunk))]


def _hermitian_batch(rng: np.random.Generator, count: int, n: int, scale: float) -> np.ndarray:
    """Complex Hermitian batch with diagonal variance scale/2 and off-diagonal components scale/4."""
    a = rng.standard_normal((count, n, n)) + 1j * rng.standard_normal((count, n, n))
    return (a + np.conj(np.swapaxes(a, -1, -2))) * math.sqrt(scale / 8.0)


def interleave_permutation(n: int) -> np.ndarray:
    """Row order taking [[A, B], [-B̄, Ā]] to 2x2 quaternion blocks."""
    return np.column_stack([np.arange(n), np.arange(n) + n]).ravel()


def sample_batch(ensemble: EnsembleSpec, rng: np.random.Generator, count: int) -> np.ndarray:
    """
    `count` independent matrices, shape (count, d, d).

    GOE: real symmetric, diagonal variance 1, off-diagonal 1/2.
    GUE: complex Hermitian, diagonal variance 1/2, off-diagonal real and imaginary parts 1/4.
    GSE: self-dual 2N x 2N, A Hermitian (diagonal 1/4, components 1/8) and
         B antisymmetric (components 1/8) in [[A, B], [-B̄, Ā]].
    """
    n = ensemble.n_levels
    if ensemble.beta == 1:
        a = rng.standard_normal((count, n, n))
        return (a + np.swapaxes(a, -1, -2)) / 2.0
    if ensemble.beta == 2:
        return _hermitian_batch(rng, count, n, 1.0)

    hermitian = _hermitian_batch(rng, count, n, 0.5)
    c = rng.standard_normal((count, n, n)) + 1j * rng.standard_normal((count, n, n))
    antisymmetric = (c - np.swapaxes(c, -1, -2)) / 4.0
    top = np.concatenate([hermitian, antisymmetric], axis=-1)
    bottom = np.concatenate([-np.conj(antisymmetric), np.conj(hermitian)], axis=-1)
    block = np.concatenate([top, bottom], axis=-2)
    perm = interleave_permutation(n)
    return block[..., perm, :][..., :, perm]


def sample_matrix(ensemble: EnsembleSpec, rng: np.random.Generator) -> np.ndarray:
    return sample_batch(ensemble, rng, 1)[0]


def expected_trace_square(ensemble: EnsembleSpec) -> float:
    """E[tr H²] in the representation `sample_batch` returns."""
    n = ensemble.n_levels
    if ensemble.beta == 1:
        return n * (n + 1) / 2.0
    if ensemble.beta == 2:
        return n * n / 2.0
    return n * n - n / 2.0


def kramers_distinct(eigenvalues: np.ndarray) -> np.ndarray:
    """
    Collapse ascending, doubly degenerate spectra (last axis) to one value per doublet.

    Raises EigenFailure if a pair splits by more than KRAMERS_PAIR_TOL (relative).
    """
    tol = ConfigurationManager.get_setting('KRAMERS_PAIR_TOL', 1e-8, float)
    lower, upper = eigenvalues[..., 0::2], eigenvalues[..., 1::2]
    scale = np.maximum(1.0, np.max(np.abs(eigenvalues), axis=-1, keepdims=True))
    split = np.max(np.abs(upper - lower) / scale)
    if split > tol:
        logger.error(f"Kramers pairing failed: relative split {split:.3e} > {tol:g}")
        raise EigenFailure(f"Eigenvalues are not doubly degenerate (relative split {split:.3e}).")
    return (lower + upper) / 2.0


def batch_eigenvalues(ensemble: EnsembleSpec, matrices: np.ndarray) -> np.ndarray:
    """Ascending eigenvalues, shape (count, N); GSE doublets counted once."""
    try:
        eigenvalues = np.linalg.eigvalsh(matrices)
    except np.linalg.LinAlgError as e:
        logger.error(f"eigvalsh failed for a {ensemble.name} batch: {e}")
        raise EigenFailure(str(e)) from e
    if ensemble.beta == 4:
        return kramers_distinct(eigenvalues)
    return eigenvalues


def log_ratio(eigenvalues: np.ndarray, numerator: float, pole: float, eta: float) -> np.ndarray:
    """Σ log(λ - numerator) - Σ log(λ - pole + iη) over the last axis (principal branch)."""
    top = np.sum(np.log((eigenvalues - numerator).astype(complex)), axis=-1)
    bottom = np.sum(np.log(eigenvalues - pole + 1j * eta), axis=-1)
    return top - bottom


def char_ratio(H: np.ndarray, x_p: float, x_q: float, eta: float, gamma_abs: int) -> complex:
    """
    (det(H - x_q) / det(H - x_p + iη))^|γ| from one eigendecomposition,
    accumulated in the log domain.
    """
    if not eta > 0:
        raise ValueError(f"eta must be positive (got {eta}).")
    try:
        eigenvalues = np.linalg.eigvalsh(H)
    except np.linalg.LinAlgError as e:
        raise EigenFailure(str(e)) from e
    return complex(np.exp(gamma_abs * log_ratio(eigenvalues, x_q, x_p, eta)))
