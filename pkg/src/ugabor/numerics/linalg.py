"""Determinants and extremal singular values of small dense complex matrices."""

import numpy as np

from ..errors import NoConvergence
from . import _fallback

MAX_DET_SIZE = 64


def get_backend(name=None):
    """Return the kernel module for ``name`` ("cython", "python" or None).

    ``None`` gives the backend chosen at import time.
    """
    from . import BACKEND, _backend
    if name is None or name == BACKEND:
        return _backend
    if name == "python":
        return _fallback
    if name == "cython":
        from . import _kernels
        return _kernels
    raise ValueError(f"unknown backend {name!r}")


def _as_matrix(m):
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    return a


def det_lu(m, backend=None):
    """Determinant by LU with partial pivoting. Singular input gives ~0."""
    a = _as_matrix(m)
    n, k = a.shape
    if n != k:
        raise ValueError(f"det_lu needs a square matrix, got {a.shape}")
    if n > MAX_DET_SIZE:
        raise ValueError(f"det_lu supports size <= {MAX_DET_SIZE}, got {n}")
    if n == 0:
        return 1.0 + 0.0j
    return complex(get_backend(backend).det_lu(a))


def det_lu_extended(m):
    """det_lu carried out in extended precision (numpy clongdouble).

    Returns a clongdouble scalar; on platforms where longdouble is plain
    binary64 this is the ordinary pure-Python LU.
    """
    a = np.asarray(m)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"det_lu_extended needs a square matrix, got {a.shape}")
    if a.shape[0] == 0:
        return np.clongdouble(1)
    return _fallback.det_lu(a, dtype=np.clongdouble)


def singular_values(m, tol=1e-15, max_sweeps=60, backend=None):
    """All singular values (descending) of a rows >= cols matrix.

    Householder QR reduces the matrix to its cols x cols factor R, then
    one-sided Jacobi orthogonalises the columns of R. Raises NoConvergence
    if the sweeps run out before every column pair is orthogonal to ``tol``.
    """
    a = _as_matrix(m)
    rows, cols = a.shape
    if cols < 1 or rows < cols:
        raise ValueError(f"needs rows >= cols >= 1, got {a.shape}")
    kern = get_backend(backend)
    r = kern.householder_r(a)
    sv, sweeps, ok = kern.jacobi_sv(r, tol, max_sweeps)
    if not ok:
        raise NoConvergence(f"Jacobi not converged after {sweeps} sweeps", sweeps)
    sv = np.sort(np.asarray(sv))[::-1]
    # a zero column of R (exactly zero diagonal) means an exact null vector
    if np.any(np.diag(r) == 0.0):
        sv[-1] = 0.0
    return sv


def svd_extremes(m, tol=1e-15, max_sweeps=60, backend=None):
    """Return ``(sigma_min, sigma_max)`` with sigma_min = inf |Ax|/|x|.

    An exactly zero column, or fewer rows than columns, gives
    sigma_min = 0.0 exactly.
    """
    a = _as_matrix(m)
    if a.size == 0:
        raise ValueError(f"empty matrix {a.shape}")
    rows, cols = a.shape
    if rows < cols:
        sv = singular_values(a.conj().T, tol, max_sweeps, backend)
        return 0.0, float(sv[0])
    sv = singular_values(a, tol, max_sweeps, backend)
    lo = 0.0 if not np.all(np.any(a != 0, axis=0)) else float(sv[-1])
    return lo, float(sv[0])
