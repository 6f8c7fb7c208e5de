import math

import numpy as np
import pytest

from ugabor.framecheck import (FrameEstimate, TestFunction, bloch_extremes,
                               column_section, criterion_form, fibre_form,
                               frame_bounds_estimate, gabor_sum_oracle,
                               l2_norm2, truncated_matrix, truncated_operator,
                               xi_grid, _atoms)
from ugabor.numerics import svd_extremes
from ugabor.symbols import general_symbol_family, simple_symbol_family
from ugabor.universal import build_universal, periodic_set

TWO_PI = 2 * math.pi


def test_truncated_matrix_m1(cauchy):
    uset = build_universal(0.5, 1)
    fam = simple_symbol_family(cauchy)
    op = truncated_operator(0.3, uset, fam, periods=2)
    assert op.matrix.shape[0] == 8
    assert np.all(np.count_nonzero(op.matrix, axis=1) == 1)
    for i, r in enumerate(op.rows):
        assert op.matrix[i, r.b - op.col0] == pytest.approx(np.exp(TWO_PI * r.t))
    np.testing.assert_array_equal(truncated_matrix(0.3, uset, fam, 2), op.matrix)
    with pytest.raises(ValueError):
        truncated_matrix(0.3, uset, fam, 0)


def test_entries_are_symbols(mixed):
    fam = general_symbol_family(mixed)
    uset = build_universal(0.5, 3)
    sec = column_section(0.41, uset, fam, periods=2)
    for i, r in enumerate(sec.rows):
        for s in range(fam.M):
            c = r.b + s - sec.col0
            if 0 <= c < sec.matrix.shape[1]:
                assert sec.matrix[i, c] == pytest.approx(fam.m[s](r.t))


def test_xi_grid_excludes_degenerate_points():
    uset = build_universal(0.5, 1)
    xs = xi_grid(uset, 64)
    assert xs.size == 64
    xs = xi_grid(uset, 8, eta=0.07)
    bad = np.array([0, 0.5, 0.75, 1.0])
    assert np.min(np.abs(xs[:, None] - bad[None, :])) > 0.07
    np.testing.assert_allclose(xs, [0.1875, 0.3125])
    with pytest.raises(ValueError):
        xi_grid(uset, 0)


def test_columns_covered_for_m2(window23):
    uset = build_universal(0.5, 2)
    fam = simple_symbol_family(window23)
    for xi in xi_grid(uset, 32):
        sec = column_section(float(xi), uset, fam, periods=4)
        assert np.all(np.any(sec.matrix != 0, axis=0))


def test_column_gap_for_m1_near_half(cauchy):
    # Lambda(0.5, 1): for xi in (1/2, 3/4) nothing lands on columns 1 mod 3
    uset = build_universal(0.5, 1)
    fam = simple_symbol_family(cauchy)
    sec = column_section(0.6, uset, fam, periods=4)
    empty = np.nonzero(~np.any(sec.matrix != 0, axis=0))[0]
    np.testing.assert_array_equal(empty, np.arange(1, 12, 3))
    assert svd_extremes(sec.matrix)[0] == 0.0
    sec = column_section(0.3, uset, fam, periods=4)
    assert np.all(np.any(sec.matrix != 0, axis=0))
    # M = 1 rows are diagonal, so sigma_min = min over columns of column norms >= 1
    assert svd_extremes(sec.matrix)[0] >= 1.0


def test_subcritical_control(cauchy):
    two = periodic_set([0], 2)
    est = frame_bounds_estimate(cauchy, two, xi_steps=16, periods=4)
    assert est.A_est == 0.0
    assert np.all(est.sigma_min == 0.0)


def test_section_vs_bloch(window23):
    uset = build_universal(0.5, 2)
    fam = simple_symbol_family(window23)
    for xi in (0.13, 0.68, 0.91):
        lo_b, hi_b = bloch_extremes(xi, uset, fam, n_theta=512)
        lo, hi = svd_extremes(column_section(xi, uset, fam, periods=16).matrix)
        # a column section is the operator on a subspace
        assert lo >= lo_b * (1 - 1e-6)
        assert lo <= lo_b * 1.05
        assert hi <= hi_b * (1 + 1e-6)


def test_frame_estimate_outputs(window23):
    uset = build_universal(0.5, 2)
    est = frame_bounds_estimate(window23, uset, xi_steps=8, periods=4)
    assert isinstance(est, FrameEstimate)
    assert 0 < est.A_est <= est.B_est
    lines = est.to_csv().splitlines()
    assert lines[0] == "xi,sigma_min,sigma_max"
    assert len(lines) == est.xi.size + 1
    x, lo, hi = map(float, lines[1].split(","))
    assert (x, lo, hi) == (est.xi[0], est.sigma_min[0], est.sigma_max[0])
    assert est.summary()["A_est"] == est.A_est


def test_backends_agree_on_estimate(window23):
    uset = build_universal(0.5, 2)
    a = frame_bounds_estimate(window23, uset, xi_steps=8, periods=4, backend="python")
    b = frame_bounds_estimate(window23, uset, xi_steps=8, periods=4)
    np.testing.assert_allclose(a.sigma_min, b.sigma_min, rtol=1e-10)
    np.testing.assert_allclose(a.sigma_max, b.sigma_max, rtol=1e-12)


# --- criterion form ---------------------------------------------------------------

def test_test_function():
    G = TestFunction([1, 2, 3], start=-1)
    np.testing.assert_array_equal(G(np.array([-1.5, -0.5, 0.2, 1.9, 2.0])), [0, 1, 2, 3, 0])
    assert G.norm2() == 14


def test_criterion_zero(cauchy):
    fam = simple_symbol_family(cauchy)
    assert criterion_form(TestFunction(np.zeros(4)), fam, build_universal(0.5, 1)) == 0


def test_criterion_single_column(cauchy):
    uset = build_universal(0.5, 1)
    fam = simple_symbol_family(cauchy)
    S = criterion_form(TestFunction([1.0], 0), fam, uset)
    # squared norm of column 0 of L_xi, integrated over xi; midpoint error
    # with 2048 nodes is about h^2 (4 pi)^2 / 24 = 1.6e-6 relative
    fib = fibre_form(TestFunction([1.0], 0), fam, uset, 4096)
    assert S == pytest.approx(fib, rel=3e-6)
    fine = criterion_form(TestFunction([1.0], 0), fam, uset, nodes=8192)
    # closed form: lambda contributes int e^{4 pi t} over the t with
    # 0 <= t + lambda < 1: lambda = -1/2, 0, 1/2 give [1/2, 1), [0, 1), [0, 1/2)
    ref = sum(
        (math.exp(4 * math.pi * hi) - math.exp(4 * math.pi * lo)) / (4 * math.pi)
        for lo, hi in [(0.5, 1.0), (0.0, 1.0), (0.0, 0.5)])
    assert S == pytest.approx(ref, rel=3e-6)
    assert fib == pytest.approx(ref, rel=1e-6)
    # second-order convergence: 4x the nodes, 1/16 of the error
    assert abs(fine / ref - 1) < abs(S / ref - 1) / 12


def test_criterion_two_routes_agree(mixed, rng):
    fam = general_symbol_family(mixed)
    uset = build_universal(0.5, 3)
    G = TestFunction(rng.standard_normal(6) + 1j * rng.standard_normal(6), start=-2)
    assert criterion_form(G, fam, uset) == pytest.approx(fibre_form(G, fam, uset, 2048), rel=1e-7)


def test_criterion_consistency_band(window23, rng):
    uset = build_universal(0.5, 2)
    fam = simple_symbol_family(window23)
    est = frame_bounds_estimate(window23, uset)
    for _ in range(3):
        G = TestFunction(rng.standard_normal(16), start=0)
        ratio = criterion_form(G, fam, uset) / G.norm2()
        assert est.A_est * 0.95 <= ratio <= est.B_est * 1.05


# --- Gabor sum oracle ------------------------------------------------------------

def test_oracle_self_term(cauchy):
    uset = build_universal(0.5, 1)
    L = 50.0
    # only lambda = 0 and n = 0: the single term is ||g||^4 on [-L, L]
    total = gabor_sum_oracle(cauchy, cauchy, uset, T=0.1, n_shift=0, support=(-L, L))
    assert total == pytest.approx((2 * math.atan(L)) ** 2, rel=1e-7)
    full = gabor_sum_oracle(cauchy, cauchy, uset, T=2.0, n_shift=5, support=(-L, L))
    assert full >= total
    assert total <= math.pi ** 2


def test_oracle_orthogonal_complement(cauchy, rng):
    uset = build_universal(0.5, 1)
    n, a, b = 1200, -6.0, 6.0
    h = (b - a) / n
    t = a + h * (np.arange(n) + 0.5)
    T, n_shift = 2.0, 4
    lams = uset.points_in(-T, 2 * T)
    atoms = _atoms(cauchy, lams, np.arange(-n_shift, n_shift + 1, dtype=float), t)
    basis = atoms.reshape(-1, n).T
    q, _ = np.linalg.qr(basis)
    f = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    f = f - q @ (q.conj().T @ f)
    total = gabor_sum_oracle(f, cauchy, uset, T=T, n_shift=n_shift, t_grid=t)
    assert total < 1e-20 * np.sum(np.abs(f) ** 2) * h


def test_l2_norm_gaussian():
    assert l2_norm2(lambda t: np.exp(-t ** 2)) == pytest.approx(math.sqrt(math.pi / 2), rel=1e-10)
