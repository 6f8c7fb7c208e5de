"""Pure-Python (numpy) versions of the dense kernels.

Same algorithms, same operation order as ``_kernels.pyx``; selected when the
compiled extension is unavailable or ``UGABOR_PURE_PYTHON`` is set.
"""

import numpy as np


def det_lu(a, dtype=complex):
    a = np.array(a, dtype=dtype, copy=True)
    n = a.shape[0]
    det = a.dtype.type(1)
    for k in range(n):
        p = k + int(np.argmax(np.abs(a[k:, k])))
        if a[p, k] == 0:
            return a.dtype.type(0)
        if p != k:
            a[[k, p]] = a[[p, k]]
            det = -det
        piv = a[k, k]
        det *= piv
        if k + 1 < n:
            f = a[k + 1:, k] / piv
            a[k + 1:, k + 1:] -= np.outer(f, a[k, k + 1:])
    return det


def householder_r(a):
    """Upper-triangular factor R (cols x cols) of a = QR, rows >= cols."""
    a = np.array(a, dtype=complex, copy=True)
    m, n = a.shape
    for k in range(n):
        x = a[k:, k]
        nx = np.sqrt(np.sum(x.real ** 2 + x.imag ** 2))
        if nx == 0.0:
            continue
        x0 = x[0]
        phase = x0 / abs(x0) if x0 != 0 else 1.0
        alpha = -phase * nx
        v = x.copy()
        v[0] -= alpha
        nv = np.sqrt(np.sum(v.real ** 2 + v.imag ** 2))
        if nv == 0.0:
            continue
        v /= nv
        block = a[k:, k:]
        block -= 2.0 * np.outer(v, v.conj() @ block)
        a[k, k] = alpha
        a[k + 1:, k] = 0.0
    return np.triu(a[:n, :n])


def jacobi_sv(r, tol, max_sweeps):
    """Singular values of a square R by one-sided (Hestenes) Jacobi.

    Column pairs are rotated until every pair is orthogonal to relative
    precision ``tol``; the column norms are then the singular values.
    Returns (values, sweeps, converged).
    """
    a = np.array(r, dtype=complex, copy=True)
    n = a.shape[1]
    sweeps = 0
    converged = n < 2
    while not converged and sweeps < max_sweeps:
        sweeps += 1
        converged = True
        for p in range(n - 1):
            for q in range(p + 1, n):
                ap, aq = a[:, p], a[:, q]
                alpha = float(np.sum(ap.real ** 2 + ap.imag ** 2))
                beta = float(np.sum(aq.real ** 2 + aq.imag ** 2))
                gamma = complex(np.vdot(ap, aq))
                g = abs(gamma)
                if g == 0.0 or g <= tol * np.sqrt(alpha * beta):
                    continue
                converged = False
                ph = gamma / g
                zeta = (beta - alpha) / (2.0 * g)
                t = (1.0 if zeta >= 0 else -1.0) / (abs(zeta) + np.sqrt(1.0 + zeta * zeta))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = c * t
                bq = aq / ph
                a[:, p], a[:, q] = c * ap - s * bq, s * ap + c * bq
    sv = np.sqrt(np.sum(a.real ** 2 + a.imag ** 2, axis=0))
    return sv, sweeps, converged
