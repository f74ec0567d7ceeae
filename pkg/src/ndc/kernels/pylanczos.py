"""Numpy implementation of the extreme-eigenvalue kernel.

The compiled module ``_lanczos`` mirrors this algorithm step for step; this
file is the readable reference and the fallback when no compiler was
available at install time.

Algorithm: Lanczos with full two-pass reorthogonalization, extreme Ritz
values extracted from the tridiagonal by Sturm-count bisection.  For n <= 32
the iteration always runs to Krylov exhaustion, which at these sizes is
dense-eigensolver quality; beyond that a guarded plateau test allows early
exit.  The start vector is supplied by the caller and fixed, so results are
bit-stable across runs.
"""

from __future__ import annotations

import math

import numpy as np

_EPS = float(np.finfo(np.float64).eps)


def tridiag_extreme(alphas: np.ndarray, betas: np.ndarray, want_max: bool) -> float:
    """Largest or smallest eigenvalue of a symmetric tridiagonal matrix.

    ``alphas`` is the diagonal (length k), ``betas`` the off-diagonal
    (length k-1).  Bisection on the Sturm count; accurate to a few ulp of
    the spectral radius.
    """
    k = alphas.shape[0]
    if k == 1:
        return float(alphas[0])
    b2 = np.square(betas)
    radius = np.zeros(k)
    radius[:-1] += np.abs(betas)
    radius[1:] += np.abs(betas)
    lo = float(np.min(alphas - radius))
    hi = float(np.max(alphas + radius))
    scale = max(abs(lo), abs(hi), 1e-300)
    pivmin = max(1e-292, _EPS * _EPS * float(np.max(b2, initial=0.0)))
    margin = 2.0 * _EPS * scale + 2.0 * pivmin
    lo -= margin
    hi += margin

    def count_less(x: float) -> int:
        d = float(alphas[0]) - x
        cnt = 1 if d < 0 else 0
        for i in range(1, k):
            if abs(d) < pivmin:
                d = -pivmin
            d = (float(alphas[i]) - x) - b2[i - 1] / d
            if d < 0:
                cnt += 1
        return cnt

    target_tol = 2.0 * _EPS * scale + pivmin
    for _ in range(120):
        if hi - lo <= target_tol:
            break
        mid = 0.5 * (lo + hi)
        c = count_less(mid)
        if want_max:
            if c >= k:
                hi = mid
            else:
                lo = mid
        else:
            if c >= 1:
                hi = mid
            else:
                lo = mid
    return 0.5 * (lo + hi)


def extreme_eig(
    h: np.ndarray,
    v0: np.ndarray,
    want_max: bool,
    rel: float,
    abs_tol: float,
    max_iter: int,
) -> tuple[float, int, bool]:
    """Extreme eigenvalue of a Hermitian matrix from a fixed start vector.

    Returns (value, steps, converged).  ``converged`` is False only when the
    step budget ran out before Krylov exhaustion, breakdown, or a stable
    plateau.
    """
    n = h.shape[0]
    if n == 0:
        raise ValueError("empty matrix")
    kmax = int(min(n, max_iter))
    norm0 = float(np.linalg.norm(v0))
    v = v0.astype(np.complex128) / norm0
    basis = np.empty((kmax, n), dtype=np.complex128)
    alphas = np.empty(kmax)
    betas = np.empty(kmax)
    v_prev = np.zeros(n, dtype=np.complex128)
    beta_prev = 0.0
    theta = 0.0
    history: list[float] = []
    k = 0
    while k < kmax:
        basis[k] = v
        w = h @ v - beta_prev * v_prev
        alpha = float(np.real(np.vdot(v, w)))
        w -= alpha * v
        for _ in range(2):
            coeffs = basis[: k + 1].conj() @ w
            w -= basis[: k + 1].T @ coeffs
        beta = float(np.linalg.norm(w))
        alphas[k] = alpha
        betas[k] = beta
        k += 1
        theta = tridiag_extreme(alphas[:k], betas[: k - 1], want_max)
        history.append(theta)
        scale = max(float(np.max(np.abs(alphas[:k]))), float(np.max(betas[:k])), 1e-300)
        if beta <= 16.0 * _EPS * scale * max(n, 4):
            return theta, k, True
        if k == n:
            return theta, k, True
        if k >= 32 and len(history) >= 5:
            tol_target = rel * abs(theta) + abs_tol
            recent = history[-5:]
            if max(recent) - min(recent) <= 0.01 * tol_target:
                return theta, k, True
        v_prev = basis[k - 1]
        v = w / beta
        beta_prev = beta
    return theta, k, False
