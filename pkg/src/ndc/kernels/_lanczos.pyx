# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled extreme-eigenvalue kernel; mirrors ``pylanczos`` exactly.

Same Lanczos-with-full-reorthogonalization iteration and the same Sturm
bisection on the tridiagonal, with the inner loops in C.  The win over the
numpy lane is per-iteration overhead, which dominates for the small strip
and compression matrices this library mostly sees.
"""

import numpy as np

from libc.math cimport fabs, sqrt

cdef double _EPS = 2.220446049250313e-16


cdef int _count_less(double* alphas, double* b2, int k, double x, double pivmin) noexcept:
    cdef double d = alphas[0] - x
    cdef int cnt = 1 if d < 0 else 0
    cdef int i
    for i in range(1, k):
        if fabs(d) < pivmin:
            d = -pivmin
        d = (alphas[i] - x) - b2[i - 1] / d
        if d < 0:
            cnt += 1
    return cnt


cdef double _tridiag_extreme(double* alphas, double* betas, int k, bint want_max) noexcept:
    if k == 1:
        return alphas[0]
    cdef double[::1] b2v = np.empty(k - 1, dtype=np.float64)
    cdef double* b2 = &b2v[0]
    cdef int i
    cdef double lo, hi, r, scale, pivmin, margin, target_tol, mid, maxb2
    maxb2 = 0.0
    for i in range(k - 1):
        b2[i] = betas[i] * betas[i]
        if b2[i] > maxb2:
            maxb2 = b2[i]
    lo = alphas[0]
    hi = alphas[0]
    for i in range(k):
        r = 0.0
        if i > 0:
            r += fabs(betas[i - 1])
        if i < k - 1:
            r += fabs(betas[i])
        if alphas[i] - r < lo:
            lo = alphas[i] - r
        if alphas[i] + r > hi:
            hi = alphas[i] + r
    scale = fabs(lo)
    if fabs(hi) > scale:
        scale = fabs(hi)
    if scale < 1e-300:
        scale = 1e-300
    pivmin = _EPS * _EPS * maxb2
    if pivmin < 1e-292:
        pivmin = 1e-292
    margin = 2.0 * _EPS * scale + 2.0 * pivmin
    lo -= margin
    hi += margin
    target_tol = 2.0 * _EPS * scale + pivmin
    cdef int it, c
    for it in range(120):
        if hi - lo <= target_tol:
            break
        mid = 0.5 * (lo + hi)
        c = _count_less(alphas, b2, k, mid, pivmin)
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


def tridiag_extreme(alphas, betas, bint want_max):
    """Python-visible wrapper, used by tests to compare the lanes."""
    cdef double[::1] a = np.ascontiguousarray(alphas, dtype=np.float64)
    cdef double[::1] b = np.ascontiguousarray(betas, dtype=np.float64)
    if a.shape[0] == 1:
        return float(a[0])
    return _tridiag_extreme(&a[0], &b[0], a.shape[0], want_max)


def extreme_eig(h, v0, bint want_max, double rel, double abs_tol, long max_iter):
    """Extreme eigenvalue of a Hermitian matrix; see pylanczos.extreme_eig."""
    cdef double complex[:, ::1] hm = np.ascontiguousarray(h, dtype=np.complex128)
    cdef int n = hm.shape[0]
    if n == 0:
        raise ValueError("empty matrix")
    cdef int kmax = n if n < max_iter else <int>max_iter
    cdef double complex[:, ::1] basis = np.empty((kmax, n), dtype=np.complex128)
    cdef double complex[::1] v = np.ascontiguousarray(v0, dtype=np.complex128).copy()
    cdef double complex[::1] w = np.empty(n, dtype=np.complex128)
    cdef double complex[::1] v_prev = np.zeros(n, dtype=np.complex128)
    cdef double[::1] alphas = np.empty(kmax, dtype=np.float64)
    cdef double[::1] betas = np.empty(kmax, dtype=np.float64)
    cdef double[::1] history = np.empty(kmax, dtype=np.float64)
    cdef double norm0 = 0.0, alpha, beta, beta_prev = 0.0, theta = 0.0
    cdef double scale, tol_target, hist_lo, hist_hi
    cdef double complex acc, coeff
    cdef int i, j, k = 0, p, rpass

    for i in range(n):
        norm0 += v[i].real * v[i].real + v[i].imag * v[i].imag
    norm0 = sqrt(norm0)
    for i in range(n):
        v[i] = v[i] / norm0

    while k < kmax:
        for i in range(n):
            basis[k, i] = v[i]
        # w = h @ v - beta_prev * v_prev
        for i in range(n):
            acc = 0
            for j in range(n):
                acc = acc + hm[i, j] * v[j]
            w[i] = acc - beta_prev * v_prev[i]
        # alpha = Re <v, w>
        alpha = 0.0
        for i in range(n):
            alpha += v[i].real * w[i].real + v[i].imag * w[i].imag
        for i in range(n):
            w[i] = w[i] - alpha * v[i]
        # two-pass full reorthogonalization against basis[0..k]
        for rpass in range(2):
            for p in range(k + 1):
                coeff = 0
                for i in range(n):
                    coeff = coeff + basis[p, i].conjugate() * w[i]
                for i in range(n):
                    w[i] = w[i] - coeff * basis[p, i]
        beta = 0.0
        for i in range(n):
            beta += w[i].real * w[i].real + w[i].imag * w[i].imag
        beta = sqrt(beta)
        alphas[k] = alpha
        betas[k] = beta
        k += 1
        theta = _tridiag_extreme(&alphas[0], &betas[0], k, want_max)
        history[k - 1] = theta
        scale = 1e-300
        for i in range(k):
            if fabs(alphas[i]) > scale:
                scale = fabs(alphas[i])
            if betas[i] > scale:
                scale = betas[i]
        if beta <= 16.0 * _EPS * scale * (n if n > 4 else 4):
            return theta, k, True
        if k == n:
            return theta, k, True
        if k >= 32 and k >= 5:
            tol_target = rel * fabs(theta) + abs_tol
            hist_lo = history[k - 5]
            hist_hi = history[k - 5]
            for i in range(k - 4, k):
                if history[i] < hist_lo:
                    hist_lo = history[i]
                if history[i] > hist_hi:
                    hist_hi = history[i]
            if hist_hi - hist_lo <= 0.01 * tol_target:
                return theta, k, True
        for i in range(n):
            v_prev[i] = basis[k - 1, i]
            v[i] = w[i] / beta
        beta_prev = beta
    return theta, k, False
