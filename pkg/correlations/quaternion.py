"""
Pfaffians and self-dual quaternion matrices in the 2x2 complex block embedding.
"""
import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from core.config import ConfigurationManager
from core.exceptions import NotAntisymmetric, NumericalFailure, OddDimension, SelfDualityViolated

logger = logging.getLogger(__name__)

_UNIT_BLOCK = np.array([[0.0, 1.0], [-1.0, 0.0]])
_ANTISYMMETRY_TOL = 1e-10
_SELF_DUALITY_TOL = 1e-10


def symplectic_unit(k: int) -> np.ndarray:
    """Block-diagonal Z with k copies of [[0, 1], [-1, 0]]."""
    if k < 0:
        raise ValueError("k must be nonnegative.")
    return np.kron(np.eye(k), _UNIT_BLOCK)


def pfaffian(A) -> complex:
    """
    Pfaffian by skew-symmetric Gaussian elimination (Parlett-Reid) with
    partial pivoting; O(n³) and valid for complex input.
    """
    A = np.array(A, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise NotAntisymmetric(f"Expected a square matrix, got shape {A.shape}.")
    n = A.shape[0]
    if n % 2:
        raise OddDimension(f"Pfaffian needs an even dimension (got {n}).")
    if n == 0:
        return 1.0 + 0j

    scale = np.max(np.abs(A))
    if np.max(np.abs(A + A.T)) > _ANTISYMMETRY_TOL * scale:
        raise NotAntisymmetric(f"|A + A^T| = {np.max(np.abs(A + A.T)):.3e} exceeds tolerance.")

    result = 1.0 + 0j
    for k in range(0, n - 1, 2):
        pivot = k + 1 + int(np.argmax(np.abs(A[k + 1:, k])))
        if pivot != k + 1:
            A[[k + 1, pivot], k:] = A[[pivot, k + 1], k:]
            A[k:, [k + 1, pivot]] = A[k:, [pivot, k + 1]]
            result = -result

        if A[k + 1, k] == 0:
            return 0j

        result *= A[k, k + 1]
        if k + 2 < n:
            tau = A[k, k + 2:] / A[k, k + 1]
            column = A[k + 2:, k + 1].copy()
            A[k + 2:, k + 2:] += np.outer(tau, column) - np.outer(column, tau)
    return result


@dataclass
class SelfDualQuaternionMatrix:
    """
    k x k quaternion matrix stored as its 2k x 2k complex representation.
    Block (p, q) sits at rows 2p..2p+1, columns 2q..2q+1.
    """
    entries: np.ndarray

    def __post_init__(self):
        self.entries = np.asarray(self.entries, dtype=complex)
        rows, cols = self.entries.shape
        if rows != cols or rows % 2:
            raise OddDimension(f"Quaternion matrices need a 2k x 2k representation (got {rows}x{cols}).")

    @property
    def dim_quaternion(self) -> int:
        return self.entries.shape[0] // 2

    @classmethod
    def from_blocks(cls, blocks: Sequence[Sequence[np.ndarray]]) -> 'SelfDualQuaternionMatrix':
        return cls(np.block([[np.asarray(b, dtype=complex) for b in row] for row in blocks]))

    @classmethod
    def from_components(cls, upper_left, upper_right, lower_left, lower_right) -> 'SelfDualQuaternionMatrix':
        """Interleave four k x k arrays into the 2x2 block layout."""
        k = np.shape(upper_left)[0]
        entries = np.empty((2 * k, 2 * k), dtype=complex)
        entries[0::2, 0::2] = upper_left
        entries[0::2, 1::2] = upper_right
        entries[1::2, 0::2] = lower_left
        entries[1::2, 1::2] = lower_right
        return cls(entries)

    def block(self, p: int, q: int) -> np.ndarray:
        return self.entries[2 * p:2 * p + 2, 2 * q:2 * q + 2]

    def dual(self) -> np.ndarray:
        """Z M^T Z^{-1}; block-wise [[a, b], [c, d]] -> [[d, -b], [-c, a]] at the transposed position."""
        Z = symplectic_unit(self.dim_quaternion)
        return Z @ self.entries.T @ Z.T

    def self_duality_defect(self) -> float:
        scale = max(1.0, float(np.max(np.abs(self.entries))))
        return float(np.max(np.abs(self.dual() - self.entries))) / scale

    def is_self_dual(self, tol: float = _SELF_DUALITY_TOL) -> bool:
        return self.self_duality_defect() <= tol


def qdet(Q: SelfDualQuaternionMatrix) -> float:
    """
    Quaternion determinant Pf(Z M).

    For k = 1 and a block [[s, 0], [0, s]] this gives s; qdet² = det M.
    """
    defect = Q.self_duality_defect()
    if defect > _SELF_DUALITY_TOL:
        raise SelfDualityViolated(f"Matrix is not self-dual (relative defect {defect:.3e}).")

    Z = symplectic_unit(Q.dim_quaternion)
    skew = Z @ Q.entries
    # self-duality makes Z M antisymmetric; remove rounding before the elimination
    value = pfaffian(0.5 * (skew - skew.T))

    imag_tol = ConfigurationManager.get_setting('IMAG_RESIDUE_TOL', 1e-9, float)
    residue = abs(value.imag)
    if residue > imag_tol * max(1.0, abs(value.real)):
        logger.error(f"qdet imaginary residue {residue:.3e} exceeds {imag_tol:g}")
        raise NumericalFailure(f"Quaternion determinant has imaginary residue {residue:.3e}.")
    if residue > 0.1 * imag_tol:
        logger.warning(f"qdet imaginary residue {residue:.3e} close to threshold {imag_tol:g}")
    return float(value.real)
