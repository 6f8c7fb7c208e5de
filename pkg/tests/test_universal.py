from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ugabor.errors import InvalidOverride
from ugabor.universal import build_universal, periodic_set, strict_floor


def test_strict_floor():
    assert strict_floor(2) == 1
    assert strict_floor(2.5) == 2
    assert strict_floor(Fraction(7, 2)) == 3
    assert strict_floor(-1) == -2


def test_build_examples():
    s = build_universal(0.5, 1)
    assert s.N1 == 2 and s.period == 3
    assert s.base_points == (0.0, 0.5, 1.75, 2.5)
    assert s.delta == 0.25
    assert build_universal(1, 1).density() == Fraction(3, 2)
    assert build_universal(0.5, 2).density() == Fraction(7, 5)
    assert build_universal(0.5, 1).density() == Fraction(4, 3)


def test_lambda_at():
    s = build_universal(0.5, 1)
    assert s.lambda_at(0) == 0
    assert s.lambda_at(4) == 3
    assert s.lambda_at(-1) == pytest.approx(-2 * s.delta)
    idx = np.arange(-20, 20)
    lams = s.lambdas(-20, 20)
    assert np.all(np.diff(lams) > 0)
    assert all(s.lambda_at(i) == lam for i, lam in zip(idx, lams))


def test_points_in():
    s = build_universal(0.5, 1)
    np.testing.assert_array_equal(s.points_in(0, 3), [0, 0.5, 1.75, 2.5, 3.0])
    np.testing.assert_array_equal(s.points_in(0, 2.9), [0, 0.5, 1.75, 2.5])
    np.testing.assert_array_equal(s.points_in(3, 2.9), [3, 3.5, 4.75, 5.5])
    assert s.points_in(0.1, 0.1).size == 0
    with pytest.raises(ValueError):
        s.points_in(0, 0)


def test_overrides():
    s = build_universal(0.5, 1, delta=0.2)
    assert s.eps1 == pytest.approx(0.1)
    with pytest.raises(InvalidOverride):
        build_universal(0.5, 1, delta=0.6)
    with pytest.raises(InvalidOverride):
        build_universal(0.5, 1, delta=0.2, eps1=0.2)
    with pytest.raises(ValueError):
        build_universal(0, 1)
    with pytest.raises(ValueError):
        build_universal(0.5, 0)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([0.1, 0.2, 0.25, 0.3, 0.5, 0.75, 1.0, 2.0]), st.integers(1, 6))
def test_density_formula_and_bound(eps, N):
    s = build_universal(eps, N)
    d = s.density()
    assert d == Fraction(N + 1 + s.N1, s.N1 + 1)
    assert 1 < d <= 1 + Fraction(str(eps))
    # tail points stay strictly inside their unit intervals, away from integers
    tail = np.asarray(s.base_points[N + 1:])
    assert np.all(np.mod(tail, 1) > s.eps1)
    assert len(set(s.base_points)) == s.n_base


def test_periodic_set():
    two = periodic_set([0], 2)
    assert two.density() == Fraction(1, 2)
    np.testing.assert_array_equal(two.lambdas(-2, 3), [-4, -2, 0, 2, 4])
    with pytest.raises(ValueError):
        periodic_set([3], 2)


def test_to_json():
    doc = build_universal(0.5, 1).to_json()
    assert doc["density"] == [4, 3] and doc["period"] == 3
