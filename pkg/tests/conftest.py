"""Shared helpers and independent oracles for the test suite.

The spectral-norm oracle here deliberately takes a different route from the
library kernel: it diagonalizes the Hermitian dilation [[0, A], [A*, 0]] with
numpy's dense eigensolver, so agreement between the two is a real check.
"""

from __future__ import annotations

import math

import numpy as np
import pytest

from ndc.model import ExplicitOperator


def dilation_norm_oracle(a: np.ndarray) -> float:
    """Largest singular value via the eigenvalues of the 2x2-block dilation."""
    a = np.asarray(a, dtype=np.complex128)
    r, c = a.shape
    dil = np.zeros((r + c, r + c), dtype=np.complex128)
    dil[:r, r:] = a
    dil[r:, :r] = a.conj().T
    return float(np.linalg.eigvalsh(dil)[-1])


def min_eig_oracle(a: np.ndarray) -> float:
    return float(np.linalg.eigvalsh(np.asarray(a, dtype=np.complex128))[0])


def random_complex_matrix(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    return rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))


def random_explicit(
    rng: np.random.Generator, max_index: int = 15, entries: int = 8
) -> ExplicitOperator:
    out: dict[tuple[int, int], complex] = {}
    while len(out) < entries:
        r = int(rng.integers(0, max_index + 1))
        c = int(rng.integers(0, max_index + 1))
        out[(r, c)] = complex(rng.standard_normal(), rng.standard_normal())
    return ExplicitOperator(entries=out)


def dense_of(op: ExplicitOperator, size: int) -> np.ndarray:
    m = np.zeros((size, size), dtype=np.complex128)
    for (r, c), v in op.entries.items():
        m[r, c] = v
    return m


def geometric_hook_value(b: float, i: int) -> float:
    """Closed form for the i-th hook of the geometric sample over width-1 blocks.

    The strip is b**i times an L of ones on {0..i}, whose norm is
    (1 + sqrt(4i+1)) / 2 (rank-2 computation in the span of the corner basis
    vector and the flat vector).
    """
    return b**i * (1.0 + math.sqrt(4.0 * i + 1.0)) / 2.0


@pytest.fixture(params=["python", "cython"])
def backend(request):
    from ndc import kernels

    if request.param not in kernels.available_backends():
        pytest.skip(f"backend {request.param} not built")
    return request.param
