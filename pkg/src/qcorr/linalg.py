"""Dense complex matrix helpers for 1 to 4 qubit problems.

Matrices are plain ``numpy.ndarray`` objects of dtype ``complex128``. Tensor
factor 1 is the leftmost (most significant) index block, so the basis state
``|q1 q2 ... qn>`` sits at row ``int("q1q2...qn", 2)`` with ``0 = up``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np

from . import _backend
from .errors import DimensionMismatch, NotHermitian

HERMITIAN_TOL = 1e-12
JACOBI_TOL = 1e-13
JACOBI_MAX_SWEEPS = 100


def as_matrix(m) -> np.ndarray:
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise DimensionMismatch(f"expected a 2-d matrix, got shape {a.shape}")
    return a


def frozen(m) -> np.ndarray:
    """Return a read-only complex copy of ``m``."""
    a = np.array(as_matrix(m), dtype=np.complex128)
    a.flags.writeable = False
    return a


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(np.asarray(m)).T


def hermiticity_error(m) -> float:
    a = as_matrix(m)
    if a.shape[0] != a.shape[1]:
        return float("inf")
    return float(np.max(np.abs(a - dagger(a))))


def is_hermitian(m, tol: float = HERMITIAN_TOL) -> bool:
    return hermiticity_error(m) <= tol


def kron(a, b, *more) -> np.ndarray:
    """Kronecker product of two or more matrices, left factor most significant."""
    return reduce(np.kron, (as_matrix(x) for x in (a, b, *more)))


def kron_all(factors) -> np.ndarray:
    factors = [as_matrix(f) for f in factors]
    if not factors:
        raise DimensionMismatch("need at least one factor")
    return reduce(np.kron, factors)


@dataclass(frozen=True)
class Eigensystem:
    values: np.ndarray
    vectors: np.ndarray
    sweeps: int

    def __iter__(self):
        yield self.values
        yield self.vectors


def hermitian_eigs(m, tol: float = HERMITIAN_TOL) -> Eigensystem:
    """Eigen-decompose a Hermitian matrix with cyclic Jacobi rotations.

    Eigenvalues come back ascending with eigenvectors as matching columns.
    Raises ``NotHermitian`` if ``max|M - M^H|`` exceeds ``tol``.
    """
    a = as_matrix(m)
    if a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"matrix is not square: {a.shape}")
    err = hermiticity_error(a)
    if err > tol:
        raise NotHermitian(f"max|M - M^H| = {err:.3e} exceeds {tol:.0e}")
    sym = 0.5 * (a + dagger(a))
    values, vectors, sweeps = _backend.jacobi_hermitian(
        np.ascontiguousarray(sym), JACOBI_TOL, JACOBI_MAX_SWEEPS
    )
    order = np.argsort(values, kind="stable")
    return Eigensystem(values[order], vectors[:, order], int(sweeps))


def eigvalsh(m, tol: float = HERMITIAN_TOL) -> np.ndarray:
    return hermitian_eigs(m, tol).values


def min_eigenvalue(m, tol: float = HERMITIAN_TOL) -> float:
    return float(eigvalsh(m, tol)[0])


def operator_norm(m, tol: float = HERMITIAN_TOL) -> float:
    """Spectral norm of a Hermitian matrix (largest absolute eigenvalue)."""
    return float(np.max(np.abs(eigvalsh(m, tol))))


def trace_distance(a, b) -> float:
    """Half the sum of absolute eigenvalues of ``a - b``."""
    ma = a.matrix if hasattr(a, "matrix") else as_matrix(a)
    mb = b.matrix if hasattr(b, "matrix") else as_matrix(b)
    if ma.shape != mb.shape:
        raise DimensionMismatch(f"shapes differ: {ma.shape} vs {mb.shape}")
    diff = ma - mb
    # differences of valid states are Hermitian up to rounding of both inputs
    return float(0.5 * np.sum(np.abs(eigvalsh(diff, tol=1e-10))))


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary from the QR factorization of a complex Gaussian matrix."""
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))
