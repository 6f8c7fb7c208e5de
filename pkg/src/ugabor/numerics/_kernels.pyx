# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled dense kernels: LU determinant, Householder R factor, and the
one-sided Jacobi sweep used for singular values.

Mirrors ``_fallback.py`` operation for operation.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, fabs

cnp.import_array()

ctypedef double complex cplx


cdef inline double cabs2(cplx z) nogil:
    return z.real * z.real + z.imag * z.imag


cdef inline cplx conj(cplx z) nogil:
    return z.real - 1j * z.imag


def det_lu(a):
    cdef cplx[:, ::1] m = np.array(a, dtype=np.complex128, order="C", copy=True)
    cdef Py_ssize_t n = m.shape[0]
    cdef Py_ssize_t i, j, k, p
    cdef double best, v
    cdef cplx det = 1.0, piv, f, tmp
    for k in range(n):
        p = k
        best = cabs2(m[k, k])
        for i in range(k + 1, n):
            v = cabs2(m[i, k])
            if v > best:
                best = v
                p = i
        if best == 0.0:
            return 0j
        if p != k:
            for j in range(n):
                tmp = m[k, j]
                m[k, j] = m[p, j]
                m[p, j] = tmp
            det = -det
        piv = m[k, k]
        det = det * piv
        for i in range(k + 1, n):
            f = m[i, k] / piv
            for j in range(k + 1, n):
                m[i, j] = m[i, j] - f * m[k, j]
    return complex(det)


def householder_r(a):
    cdef cplx[:, ::1] m = np.array(a, dtype=np.complex128, order="C", copy=True)
    cdef Py_ssize_t rows = m.shape[0], cols = m.shape[1]
    cdef Py_ssize_t i, j, k
    cdef double nx, nv, ax0
    cdef cplx alpha, phase, s
    cdef cplx[::1] v = np.empty(rows, dtype=np.complex128)
    for k in range(cols):
        nx = 0.0
        for i in range(k, rows):
            nx += cabs2(m[i, k])
        nx = sqrt(nx)
        if nx == 0.0:
            continue
        ax0 = sqrt(cabs2(m[k, k]))
        if ax0 != 0.0:
            phase = m[k, k] / ax0
        else:
            phase = 1.0
        alpha = -phase * nx
        for i in range(k, rows):
            v[i] = m[i, k]
        v[k] = v[k] - alpha
        nv = 0.0
        for i in range(k, rows):
            nv += cabs2(v[i])
        nv = sqrt(nv)
        if nv == 0.0:
            continue
        for i in range(k, rows):
            v[i] = v[i] / nv
        for j in range(k, cols):
            s = 0.0
            for i in range(k, rows):
                s = s + conj(v[i]) * m[i, j]
            s = 2.0 * s
            for i in range(k, rows):
                m[i, j] = m[i, j] - v[i] * s
        m[k, k] = alpha
        for i in range(k + 1, rows):
            m[i, k] = 0.0
    out = np.zeros((cols, cols), dtype=np.complex128)
    cdef cplx[:, ::1] r = out
    for i in range(cols):
        for j in range(i, cols):
            r[i, j] = m[i, j]
    return out


def jacobi_sv(r_in, double tol, int max_sweeps):
    cdef cplx[::1, :] a = np.array(r_in, dtype=np.complex128, order="F", copy=True)
    cdef Py_ssize_t m = a.shape[0], n = a.shape[1]
    cdef Py_ssize_t i, p, q
    cdef double alpha, beta, g, zeta, t, c, s
    cdef cplx gamma, ph, x, y
    cdef int sweeps = 0
    cdef bint converged = n < 2
    while not converged and sweeps < max_sweeps:
        sweeps += 1
        converged = True
        for p in range(n - 1):
            for q in range(p + 1, n):
                alpha = 0.0
                beta = 0.0
                gamma = 0.0
                for i in range(m):
                    alpha += cabs2(a[i, p])
                    beta += cabs2(a[i, q])
                    gamma = gamma + conj(a[i, p]) * a[i, q]
                g = sqrt(cabs2(gamma))
                if g == 0.0 or g <= tol * sqrt(alpha * beta):
                    continue
                converged = False
                ph = gamma / g
                zeta = (beta - alpha) / (2.0 * g)
                t = (1.0 if zeta >= 0 else -1.0) / (fabs(zeta) + sqrt(1.0 + zeta * zeta))
                c = 1.0 / sqrt(1.0 + t * t)
                s = c * t
                for i in range(m):
                    x = a[i, p]
                    y = a[i, q] / ph
                    a[i, p] = c * x - s * y
                    a[i, q] = s * x + c * y
    sv = np.empty(n)
    cdef double[::1] out = sv
    for p in range(n):
        alpha = 0.0
        for i in range(m):
            alpha += cabs2(a[i, p])
        out[p] = sqrt(alpha)
    return sv, sweeps, converged
