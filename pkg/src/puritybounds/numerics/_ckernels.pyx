# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled dense kernels: Householder tridiagonalization, implicit QL, LU determinant."""

import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, hypot, sqrt, copysign
from libc.float cimport DBL_EPSILON

cnp.import_array()

cdef extern from "complex.h":
    double cabs(double complex) nogil
    double creal(double complex) nogil
    double cimag(double complex) nogil
    double complex conj(double complex) nogil


def tridiagonalize(double complex[:, ::1] a):
    """Reduce a Hermitian matrix (overwritten) to real symmetric tridiagonal form.

    Returns ``(d, e, q)`` with ``q^H a q = tridiag(e, d, e)`` and ``e[i]``
    coupling rows ``i`` and ``i + 1``. ``e[n-1]`` is zero.
    """
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t k, i, j, m
    cdef double xnorm, vnorm, kr
    cdef double complex alpha, ph, s, tk, dk
    d_arr = np.zeros(n, dtype=np.float64)
    e_arr = np.zeros(n, dtype=np.float64)
    q_arr = np.eye(n, dtype=np.complex128)
    v_arr = np.zeros(n, dtype=np.complex128)
    p_arr = np.zeros(n, dtype=np.complex128)
    w_arr = np.zeros(n, dtype=np.complex128)
    cdef double[::1] d = d_arr
    cdef double[::1] e = e_arr
    cdef double complex[:, ::1] q = q_arr
    cdef double complex[::1] v = v_arr
    cdef double complex[::1] p = p_arr
    cdef double complex[::1] w = w_arr
    cdef double complex[::1] sub = np.zeros(n, dtype=np.complex128)

    with nogil:
        for k in range(n - 2):
            m = n - k - 1
            xnorm = 0.0
            for i in range(m):
                xnorm += creal(a[k + 1 + i, k]) ** 2 + cimag(a[k + 1 + i, k]) ** 2
            xnorm = sqrt(xnorm)
            if xnorm == 0.0:
                sub[k] = 0.0
                continue
            if cabs(a[k + 1, k]) > 0.0:
                ph = a[k + 1, k] / cabs(a[k + 1, k])
            else:
                ph = 1.0
            alpha = -ph * xnorm
            for i in range(m):
                v[i] = a[k + 1 + i, k]
            v[0] = v[0] - alpha
            vnorm = 0.0
            for i in range(m):
                vnorm += creal(v[i]) ** 2 + cimag(v[i]) ** 2
            vnorm = sqrt(vnorm)
            if vnorm == 0.0:
                sub[k] = a[k + 1, k]
                continue
            for i in range(m):
                v[i] = v[i] / vnorm
            # p = A v on the trailing block
            for i in range(m):
                s = 0.0
                for j in range(m):
                    s = s + a[k + 1 + i, k + 1 + j] * v[j]
                p[i] = s
            kr = 0.0
            for i in range(m):
                kr += creal(conj(v[i]) * p[i])
            for i in range(m):
                w[i] = p[i] - kr * v[i]
            # A <- A - 2 v w^H - 2 w v^H
            for i in range(m):
                for j in range(m):
                    a[k + 1 + i, k + 1 + j] = (a[k + 1 + i, k + 1 + j]
                                               - 2.0 * v[i] * conj(w[j])
                                               - 2.0 * w[i] * conj(v[j]))
            sub[k] = alpha
            # Q <- Q (I - 2 v v^H) on columns k+1..n-1
            for i in range(n):
                s = 0.0
                for j in range(m):
                    s = s + q[i, k + 1 + j] * v[j]
                for j in range(m):
                    q[i, k + 1 + j] = q[i, k + 1 + j] - 2.0 * s * conj(v[j])
        if n >= 2:
            sub[n - 2] = a[n - 1, n - 2]
        for i in range(n):
            d[i] = creal(a[i, i])
        # diagonal phase similarity makes the off-diagonal real and non-negative
        dk = 1.0
        for k in range(n - 1):
            tk = sub[k]
            e[k] = cabs(tk)
            if e[k] > 0.0:
                dk = dk * tk / e[k]
            for i in range(n):
                q[i, k + 1] = q[i, k + 1] * dk
    return d_arr, e_arr, q_arr


def tql(double[::1] d, double[::1] e, double[:, ::1] zt):
    """Implicit-shift QL on a real symmetric tridiagonal matrix (in place).

    ``zt`` holds eigenvectors as rows; pass the identity to get the
    tridiagonal eigenvectors. Eigenvalues are left unsorted in ``d``.
    """
    cdef Py_ssize_t n = d.shape[0]
    cdef Py_ssize_t l, m, i, k, it
    cdef double g, r, s, c, p, f, b, dd, zi, zi1, floor = 0.0
    cdef bint underflow
    if n == 0:
        return
    e[n - 1] = 0.0
    with nogil:
        # absolute floor eps * max(|d| + |e|) stops graded spectra from stalling
        for i in range(n):
            floor = max(floor, fabs(d[i]) + fabs(e[i]))
        floor *= DBL_EPSILON
        for l in range(n):
            it = 0
            while True:
                m = l
                while m < n - 1:
                    dd = fabs(d[m]) + fabs(d[m + 1])
                    if fabs(e[m]) <= DBL_EPSILON * dd or fabs(e[m]) <= floor:
                        break
                    m += 1
                if m == l:
                    break
                it += 1
                if it > 60:
                    with gil:
                        raise ArithmeticError("QL iteration failed to converge")
                g = (d[l + 1] - d[l]) / (2.0 * e[l])
                r = hypot(g, 1.0)
                g = d[m] - d[l] + e[l] / (g + copysign(r, g))
                s = 1.0
                c = 1.0
                p = 0.0
                underflow = False
                i = m - 1
                while i >= l:
                    f = s * e[i]
                    b = c * e[i]
                    r = hypot(f, g)
                    e[i + 1] = r
                    if r == 0.0:
                        d[i + 1] -= p
                        e[m] = 0.0
                        underflow = True
                        break
                    s = f / r
                    c = g / r
                    g = d[i + 1] - p
                    r = (d[i] - g) * s + 2.0 * c * b
                    p = s * r
                    d[i + 1] = g + p
                    g = c * r - b
                    for k in range(n):
                        zi1 = zt[i + 1, k]
                        zi = zt[i, k]
                        zt[i + 1, k] = s * zi + c * zi1
                        zt[i, k] = c * zi - s * zi1
                    i -= 1
                if underflow:
                    continue
                d[l] -= p
                e[l] = g
                e[m] = 0.0


def lu_det(double complex[:, ::1] a):
    """Determinant by LU with partial pivoting; ``a`` is overwritten."""
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t k, i, j, piv
    cdef double best, mag
    cdef double complex det = 1.0, f, tmp
    with nogil:
        for k in range(n):
            piv = k
            best = cabs(a[k, k])
            for i in range(k + 1, n):
                mag = cabs(a[i, k])
                if mag > best:
                    best = mag
                    piv = i
            if best == 0.0:
                det = 0.0
                break
            if piv != k:
                for j in range(n):
                    tmp = a[k, j]
                    a[k, j] = a[piv, j]
                    a[piv, j] = tmp
                det = -det
            det = det * a[k, k]
            for i in range(k + 1, n):
                f = a[i, k] / a[k, k]
                if f != 0.0:
                    for j in range(k + 1, n):
                        a[i, j] = a[i, j] - f * a[k, j]
    return complex(det)
