import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import brute_phi, fourier_quad
from ugabor.errors import (DuplicatePole, ImaginaryPoleParameter,
                           NonpositiveMultiplicity, OverflowRisk,
                           UnsupportedWindow, WindowError, ZeroAmplitude)
from ugabor.windows import (GeneralWindow, SimpleWindow, _phi, class_test,
                            eval_window, fourier_transform, load_window,
                            validate)

TWO_PI = 2 * math.pi


def test_validate_examples():
    w = validate([{"a": 1, "w": 1, "j": 1}])
    assert isinstance(w, SimpleWindow) and w.N == 1
    with pytest.raises(ImaginaryPoleParameter):
        validate([{"a": 1, "w": 1j, "j": 1}])
    g = validate([{"a": 1, "w": 1, "j": 2}, {"a": 2, "w": 2, "j": 1}])
    assert isinstance(g, GeneralWindow)
    assert (g.M, g.N) == (3, 2)
    assert list(g.j) == [1, 2] and g.terms[0].w == 2


def test_validate_errors():
    with pytest.raises(ZeroAmplitude):
        validate([{"a": 0, "w": 1}])
    with pytest.raises(NonpositiveMultiplicity):
        validate([{"a": 1, "w": 1, "j": 0}])
    with pytest.raises(DuplicatePole):
        validate([{"a": 1, "w": 1}, {"a": 2, "w": 1}])
    # e^{2 pi w} is periodic in Im w with period 1
    with pytest.raises(DuplicatePole):
        validate([{"a": 1, "w": 0.5}, {"a": 2, "w": 0.5 + 1j}])
    with pytest.raises(OverflowRisk):
        validate([{"a": 1, "w": 10}])
    with pytest.raises(WindowError):
        validate([])
    with pytest.raises(WindowError):
        validate([{"a": [1, 2, 3], "w": 1}])


def test_load_window_json(tmp_path):
    p = tmp_path / "g.json"
    p.write_text('{"terms": [{"a": [1, 0], "w": [1, 0]}]}')
    w = load_window(p)
    assert w.to_json() == {"terms": [{"a": [1.0, 0.0], "w": [1.0, 0.0], "j": 1}]}
    assert load_window(w.to_json()) == w


def test_eval_examples():
    g = validate([{"a": 1, "w": 1}])
    assert eval_window(g, 0.0) == pytest.approx(1j)
    assert eval_window(validate([{"a": 1, "w": 1, "j": 2}]), 0.0) == pytest.approx(-1)
    h = validate([{"a": 1, "w": 1}, {"a": -1, "w": 2}])
    assert h(1.0) == pytest.approx(1 / (1 - 1j) - 1 / (1 - 2j))
    assert g(np.array([0.0, 1.0])).shape == (2,)


@settings(max_examples=50, deadline=None)
@given(st.floats(0.01, 6.0), st.floats(-5, 5), st.floats(-100, 100))
def test_no_real_singularity(wr, wi, t):
    g = validate([{"a": 1, "w": complex(wr, wi)}])
    assert abs(t - 1j * complex(wr, wi)) >= wr
    assert np.isfinite(g(t))


def test_class_test_counterexample():
    # e^{2 pi w1} = e^{2 pi}, e^{2 pi w2} = e^{4 pi}, a = (1, -e^pi)
    g = validate([{"a": 1, "w": 1.0}, {"a": -math.exp(math.pi), "w": 2.0}])
    rep = class_test(g)
    assert not rep.member
    assert abs(rep.witness - (-0.5)) < 1e-6


def test_class_test_members():
    rep = class_test(validate([{"a": 1, "w": 1}]))
    assert rep.member and rep.min_modulus > 0 and rep.witness is None
    w = np.log([2.0, 3.0]) / TWO_PI
    rep = class_test(validate([{"a": 1, "w": w[0]}, {"a": -1, "w": w[1]}]))
    assert rep.member and rep.min_modulus > 0


def test_class_test_general_window():
    # Phi(t) = e^{2 pi w t} (1 + 2 pi i t): never zero for real t
    rep = class_test(validate([{"a": 1, "w": 0.5, "j": 1}, {"a": 1, "w": 0.5 + 0.25j, "j": 2}]))
    assert rep.min_modulus > 0


def test_phi_matches_brute(mixed):
    from ugabor.windows import class_test_terms
    t = np.linspace(-3, -0.1, 17)
    val, _ = _phi(class_test_terms(mixed), t)
    np.testing.assert_allclose(val, [brute_phi(mixed, x) for x in t], rtol=1e-13)


def test_class_test_args():
    with pytest.raises(ValueError):
        class_test(validate([{"a": 1, "w": 1}]), T_max=-1)


def test_fourier_examples():
    g = validate([{"a": 1, "w": 1}])
    assert fourier_transform(g, 1.0) == pytest.approx(TWO_PI * 1j * math.exp(-TWO_PI))
    assert fourier_transform(g, -1.0) == 0
    h = validate([{"a": 1, "w": 1}, {"a": 1, "w": 2}])
    assert fourier_transform(h, 0.5) == pytest.approx(
        TWO_PI * 1j * (math.exp(-math.pi) + math.exp(-TWO_PI)))
    with pytest.raises(UnsupportedWindow):
        fourier_transform(validate([{"a": 1, "w": -1}]), 1.0)


@pytest.mark.parametrize("tau", [0.25, 0.5, 1.0, -0.5])
def test_fourier_against_quadrature(tau):
    g = validate([{"a": 1, "w": 0.3}])
    ref = fourier_quad(g, tau)
    assert abs(fourier_transform(g, tau) - ref) < 1e-6
