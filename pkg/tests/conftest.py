import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from ugabor.windows import validate  # noqa: E402

TWO_PI = 2 * np.pi


@pytest.fixture
def cauchy():
    """g(t) = 1/(t - i)."""
    return validate([{"a": 1, "w": 1}])


@pytest.fixture
def window23():
    """a = (1, 1), e^{2 pi w} = (2, 3)."""
    w = np.log([2.0, 3.0]) / TWO_PI
    return validate([{"a": 1, "w": float(w[0])}, {"a": 1, "w": float(w[1])}])


@pytest.fixture
def mixed():
    """Pole orders (1, 2), M = 3."""
    return validate([{"a": 1, "w": 0.3, "j": 1}, {"a": 0.5, "w": 0.6, "j": 2}])


@pytest.fixture
def rng():
    return np.random.default_rng(20241018)


# one PASS/FAIL line per acceptance criterion, repeated in the terminal summary
ACCEPTANCE: list = []


@pytest.fixture
def accept():
    def record(criterion, ok, detail):
        line = f"criterion {criterion}: {'PASS' if ok else 'FAIL'} ({detail})"
        ACCEPTANCE.append(line)
        print(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
