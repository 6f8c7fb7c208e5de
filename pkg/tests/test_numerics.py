import math

import numpy as np
import pytest

from oracles import perm_det, sv_2x2
from ugabor.errors import ToleranceNotMet
from ugabor.numerics import (BACKEND, det_lu, det_lu_extended, integrate,
                             singular_values, svd_extremes)
from ugabor.numerics.quadrature import midpoint


def test_det_trivial():
    assert det_lu(np.eye(3)) == pytest.approx(1)
    assert det_lu([[0, 1], [1, 0]]) == pytest.approx(-1)
    assert det_lu(np.zeros((0, 0))) == 1


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_det_matches_permutation_expansion(rng, n):
    for _ in range(20):
        a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        ref = perm_det(a)
        assert abs(det_lu(a) - ref) <= 1e-12 * abs(ref)


def test_det_singular_and_guards():
    assert abs(det_lu([[1, 2], [2, 4]])) < 1e-14
    with pytest.raises(ValueError):
        det_lu(np.ones((2, 3)))
    with pytest.raises(ValueError):
        det_lu(np.eye(65))


def test_det_extended_matches(rng):
    a = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
    assert complex(det_lu_extended(a)) == pytest.approx(np.linalg.det(a), rel=1e-12)


def test_svd_examples():
    lo, hi = svd_extremes(np.diag([1.0, math.exp(2 * math.pi)]))
    assert lo == pytest.approx(1.0, rel=1e-14)
    assert hi == pytest.approx(math.exp(2 * math.pi), rel=1e-14)
    lo, hi = svd_extremes([[1.0], [1.0]])
    assert lo == pytest.approx(math.sqrt(2)) and hi == pytest.approx(math.sqrt(2))


def test_svd_random_2x2(rng):
    for _ in range(50):
        a = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        ref = sv_2x2(a)
        got = svd_extremes(a)
        assert got[0] == pytest.approx(ref[0], rel=1e-9, abs=1e-14)
        assert got[1] == pytest.approx(ref[1], rel=1e-12)


def test_svd_zero_column_is_exact_zero(rng):
    a = rng.standard_normal((6, 4)) + 0j
    a[:, 2] = 0
    assert svd_extremes(a)[0] == 0.0
    # more columns than rows: nontrivial kernel
    assert svd_extremes(rng.standard_normal((3, 5)))[0] == 0.0


def test_singular_values_full_spectrum(rng):
    a = rng.standard_normal((30, 20)) + 1j * rng.standard_normal((30, 20))
    ref = np.linalg.svd(a, compute_uv=False)
    np.testing.assert_allclose(singular_values(a), ref, rtol=1e-12)


def test_svd_clustered_spectrum():
    # banded Toeplitz section: extreme singular values are tightly clustered
    n = 80
    a = np.zeros((n + 1, n), dtype=complex)
    for i in range(n):
        a[i, i] = 1.0
        a[i + 1, i] = 0.999
    ref = np.linalg.svd(a, compute_uv=False)
    lo, hi = svd_extremes(a)
    assert lo == pytest.approx(ref[-1], rel=1e-10)
    assert hi == pytest.approx(ref[0], rel=1e-12)


def test_svd_preconditions():
    with pytest.raises(ValueError):
        svd_extremes(np.zeros((0, 0)))


def test_backend_selected():
    assert BACKEND in ("cython", "python")


def test_integrate_examples():
    assert integrate(lambda t: np.ones_like(t), 0, 1) == pytest.approx(1)
    assert abs(integrate(lambda t: np.exp(2j * np.pi * t), 0, 1)) < 1e-10
    # arctan closed form, truncated tails contribute ~ 2e-4
    val = integrate(lambda t: 1 / (t * t + 1), -1e4, 1e4, n0=2 ** 14, max_nodes=2 ** 22)
    assert val.real == pytest.approx(2 * math.atan(1e4), rel=1e-8)
    assert abs(val.real - math.pi) < 1e-3


def test_integrate_samples_and_errors():
    n = 1000
    t = (np.arange(n) + 0.5) / n
    assert integrate(t ** 2, 0, 1).real == pytest.approx(1 / 3, rel=1e-6)
    assert midpoint(lambda x: x, 0, 2, 4) == pytest.approx(2)
    with pytest.raises(ValueError):
        integrate(lambda x: x, 1, 0)
    with pytest.raises(ToleranceNotMet):
        integrate(lambda x: np.sign(np.sin(1e4 * x)), 0, 1, rtol=1e-14, max_nodes=2 ** 12)
