"""Certified dense kernels: spectral norm and Hermitian minimum eigenvalue.

Both operations run Lanczos from a fixed start vector (all-ones plus a small
deterministic perturbation that breaks symmetric structure), so repeated
calls return bit-identical values.  Accuracy follows the Tolerance contract:
the result is within ``rel * scale + abs`` of the true quantity, where scale
is the largest singular value (spectral_norm) or the matrix norm
(min_eig_hermitian).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .model import FiniteMatrix


@dataclass(frozen=True)
class Tolerance:
    rel: float = 1e-10
    abs: float = 1e-12
    max_iter: int = 100_000

    def __post_init__(self) -> None:
        if self.rel <= 0 or self.abs <= 0:
            raise ValueError("rel and abs must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be positive")


DEFAULT_TOLERANCE = Tolerance()


class NumericFailureError(RuntimeError):
    """An iterative kernel failed to converge within its step budget."""

    def __init__(self, shape: tuple[int, int], detail: str):
        self.shape = shape
        super().__init__(f"kernel failed on {shape[0]}x{shape[1]} matrix: {detail}")


class HermiticityError(ValueError):
    """Input claimed Hermitian has a conjugate-symmetry violation."""

    def __init__(self, row: int, col: int, deviation: float):
        self.row = row
        self.col = col
        self.deviation = deviation
        super().__init__(
            f"matrix is not Hermitian at ({row}, {col}); |m - m*| = {deviation:.3e}"
        )


def start_vector(n: int) -> np.ndarray:
    """Deterministic all-ones start with a fixed hash perturbation."""
    t = np.arange(1, n + 1, dtype=np.uint64)
    mixed = (t * np.uint64(2654435761)) % np.uint64(2**32)
    jitter = mixed.astype(np.float64) / 2.0**32 - 0.5
    return (1.0 + 1e-4 * jitter).astype(np.complex128)


def _as_array(m: FiniteMatrix | np.ndarray) -> np.ndarray:
    if isinstance(m, FiniteMatrix):
        return m.data
    return np.asarray(m, dtype=np.complex128)


def spectral_norm(
    m: FiniteMatrix | np.ndarray,
    tol: Tolerance = DEFAULT_TOLERANCE,
    backend: str | None = None,
) -> float:
    """Largest singular value of a dense complex matrix.

    Computed as the square root of the extreme eigenvalue of the smaller of
    the two Gram matrices.  Raises NumericFailureError on non-convergence.
    """
    a = _as_array(m)
    if a.ndim != 2 or a.size == 0:
        raise ValueError(f"spectral_norm needs a non-empty matrix, got shape {a.shape}")
    if a.shape[0] >= a.shape[1]:
        gram = a.conj().T @ a
    else:
        gram = a @ a.conj().T
    gram = 0.5 * (gram + gram.conj().T)
    n = gram.shape[0]
    kern = kernels.get_backend(backend)
    lam, steps, converged = kern.extreme_eig(
        np.ascontiguousarray(gram),
        start_vector(n),
        True,
        tol.rel,
        max(tol.abs * tol.abs, 1e-300),
        tol.max_iter,
    )
    if not converged:
        raise NumericFailureError(a.shape, f"no convergence after {steps} Lanczos steps")
    return float(np.sqrt(max(lam, 0.0)))


def hermiticity_violation(a: np.ndarray, slack: float) -> tuple[int, int, float] | None:
    """First lower-triangle position (row-major) violating conjugate symmetry."""
    dev = a - a.conj().T
    bad = np.abs(dev) > slack
    if not bad.any():
        return None
    for r in range(a.shape[0]):
        for c in range(r + 1):
            if bad[r, c]:
                return r, c, float(np.abs(dev[r, c]))
    # violations only above the diagonal cannot happen (dev is anti-Hermitian)
    r, c = np.argwhere(bad)[0]
    return int(r), int(c), float(np.abs(dev[r, c]))


def min_eig_hermitian(
    m: FiniteMatrix | np.ndarray,
    tol: Tolerance = DEFAULT_TOLERANCE,
    backend: str | None = None,
) -> float:
    """Minimum eigenvalue of a Hermitian matrix.

    The input must be square over identical row/col index lists and Hermitian
    within ``tol.abs`` entrywise; the offending position is reported
    otherwise.
    """
    a = _as_array(m)
    if a.ndim != 2 or a.size == 0:
        raise ValueError(f"min_eig_hermitian needs a non-empty matrix, got {a.shape}")
    if a.shape[0] != a.shape[1]:
        raise ValueError(f"matrix must be square, got {a.shape}")
    if isinstance(m, FiniteMatrix) and m.rows != m.cols:
        raise ValueError("row and column index lists differ")
    violation = hermiticity_violation(a, tol.abs)
    if violation is not None:
        raise HermiticityError(*violation)
    sym = 0.5 * (a + a.conj().T)
    kern = kernels.get_backend(backend)
    lam, steps, converged = kern.extreme_eig(
        np.ascontiguousarray(sym),
        start_vector(sym.shape[0]),
        False,
        tol.rel,
        tol.abs,
        tol.max_iter,
    )
    if not converged:
        raise NumericFailureError(a.shape, f"no convergence after {steps} Lanczos steps")
    return float(lam)
