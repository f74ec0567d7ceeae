"""Kernel contracts: examples, oracle agreement, scaling, error paths."""

from __future__ import annotations

import numpy as np
import pytest

from conftest import dilation_norm_oracle, min_eig_oracle, random_complex_matrix

from ndc import kernels
from ndc.numerics import (
    HermiticityError,
    NumericFailureError,
    Tolerance,
    min_eig_hermitian,
    spectral_norm,
)

GOLDEN_2X2 = (1.0 + np.sqrt(5.0)) / 4.0


def test_spectral_norm_examples(backend):
    assert spectral_norm(np.array([[3 + 4j]]), backend=backend) == pytest.approx(5.0, abs=1e-12)
    assert spectral_norm(np.eye(2, dtype=complex), backend=backend) == pytest.approx(1.0, abs=1e-12)
    m = np.array([[0, 0.5], [0.5, 0.5]], dtype=complex)
    assert spectral_norm(m, backend=backend) == pytest.approx(GOLDEN_2X2, abs=1e-10)


def test_min_eig_examples(backend):
    assert min_eig_hermitian(np.diag([1.0, -0.5]).astype(complex), backend=backend) == pytest.approx(-0.5, abs=1e-12)
    m = np.array([[2, 1], [1, 2]], dtype=complex)
    assert min_eig_hermitian(m, backend=backend) == pytest.approx(1.0, abs=1e-10)
    assert min_eig_hermitian(np.zeros((3, 3), dtype=complex), backend=backend) == pytest.approx(0.0, abs=1e-14)


def test_empty_matrix_rejected():
    with pytest.raises(ValueError):
        spectral_norm(np.zeros((0, 0), dtype=complex))
    with pytest.raises(ValueError):
        min_eig_hermitian(np.zeros((0, 0), dtype=complex))


def test_non_hermitian_rejected_with_position():
    m = np.zeros((3, 3), dtype=complex)
    m[0, 1] = 1.0
    with pytest.raises(HermiticityError) as info:
        min_eig_hermitian(m)
    assert (info.value.row, info.value.col) == (1, 0)
    m2 = np.eye(2, dtype=complex)
    m2[1, 1] = 1 + 1e-6j
    with pytest.raises(HermiticityError) as info:
        min_eig_hermitian(m2)
    assert (info.value.row, info.value.col) == (1, 1)


def test_non_square_rejected():
    with pytest.raises(ValueError):
        min_eig_hermitian(np.zeros((2, 3), dtype=complex))


def test_non_convergence_raises_numeric_failure():
    rng = np.random.default_rng(3)
    m = rng.standard_normal((64, 64)) + 1j * rng.standard_normal((64, 64))
    m = m + m.conj().T
    tol = Tolerance(max_iter=3)
    with pytest.raises(NumericFailureError) as info:
        min_eig_hermitian(m, tol=tol)
    assert "64x64" in str(info.value)


def test_oracle_agreement_200_matrices(backend):
    rng = np.random.default_rng(42)
    for trial in range(200):
        rows = int(rng.integers(1, 13))
        cols = int(rng.integers(1, 13))
        m = random_complex_matrix(rng, rows, cols)
        ours = spectral_norm(m, backend=backend)
        oracle = dilation_norm_oracle(m)
        assert abs(ours - oracle) <= 1e-9, f"trial {trial}: {ours} vs {oracle}"


def test_min_eig_oracle_agreement(backend):
    rng = np.random.default_rng(7)
    for _ in range(100):
        n = int(rng.integers(1, 13))
        m = random_complex_matrix(rng, n, n)
        m = m + m.conj().T
        ours = min_eig_hermitian(m, backend=backend)
        assert abs(ours - min_eig_oracle(m)) <= 1e-9


def test_scaling_homogeneity():
    rng = np.random.default_rng(11)
    m = random_complex_matrix(rng, 9, 9)
    base = spectral_norm(m)
    for lam in (0.5, 3.0, 7.25):
        scaled = spectral_norm(lam * m)
        assert scaled == pytest.approx(lam * base, rel=1e-10)


def test_gram_min_eig_nonnegative():
    rng = np.random.default_rng(13)
    for _ in range(50):
        rows = int(rng.integers(1, 13))
        cols = int(rng.integers(1, 13))
        m = random_complex_matrix(rng, rows, cols)
        gram = m.conj().T @ m
        assert min_eig_hermitian(gram) >= -1e-12


def test_deterministic_results():
    rng = np.random.default_rng(17)
    m = random_complex_matrix(rng, 20, 20)
    first = spectral_norm(m)
    second = spectral_norm(m)
    assert first == second


def test_backend_parity():
    if "cython" not in kernels.available_backends():
        pytest.skip("compiled kernel not built")
    rng = np.random.default_rng(19)
    for _ in range(25):
        n = int(rng.integers(2, 24))
        m = random_complex_matrix(rng, n, n)
        assert spectral_norm(m, backend="python") == pytest.approx(
            spectral_norm(m, backend="cython"), abs=1e-11, rel=1e-11
        )
        h = m + m.conj().T
        assert min_eig_hermitian(h, backend="python") == pytest.approx(
            min_eig_hermitian(h, backend="cython"), abs=1e-10, rel=1e-10
        )


def test_large_matrix_early_exit(backend):
    # big enough to take the plateau path rather than full exhaustion
    rng = np.random.default_rng(23)
    m = random_complex_matrix(rng, 200, 200)
    ours = spectral_norm(m, backend=backend)
    assert abs(ours - dilation_norm_oracle(m)) <= 1e-7 * ours


def test_tolerance_validation():
    with pytest.raises(ValueError):
        Tolerance(rel=0.0)
    with pytest.raises(ValueError):
        Tolerance(abs=-1.0)
    with pytest.raises(ValueError):
        Tolerance(max_iter=0)
