"""The periodic frequency set Lambda(eps, N).

One period [0, N1 + 1) holds the cluster j/(N+1), 0 <= j <= N, and one point
j + 1 - j*delta in each (j, j+1), 1 <= j <= N1; the set is that period
repeated with step N1 + 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import InvalidOverride


def strict_floor(x) -> int:
    """Largest integer strictly smaller than x (so strict_floor(2) == 1)."""
    x = Fraction(x) if not isinstance(x, float) else x
    f = math.floor(x)
    return f - 1 if f == x else f


@dataclass(frozen=True)
class UniversalSet:
    N: int
    N1: int
    eps1: float
    delta: float
    base_points: tuple[float, ...]
    eps: float | None = None

    @property
    def period(self) -> int:
        return self.N1 + 1

    @property
    def n_base(self) -> int:
        return len(self.base_points)

    @property
    def cluster_size(self) -> int:
        return self.N + 1

    def lambda_at(self, i: int) -> float:
        q, r = divmod(int(i), self.n_base)
        return self.base_points[r] + q * self.period

    def lambdas(self, start: int, stop: int) -> np.ndarray:
        """Points with enumeration index in [start, stop)."""
        idx = np.arange(start, stop)
        q, r = np.divmod(idx, self.n_base)
        return np.asarray(self.base_points)[r] + q * self.period

    def density(self) -> Fraction:
        """Exact density: points per period over the period length."""
        return Fraction(self.n_base, self.period)

    def points_in(self, R: float, a: float) -> np.ndarray:
        """All points of the set in the closed window [R, R + a], sorted."""
        if a <= 0:
            raise ValueError("window length must be positive")
        lo = (math.floor(R / self.period) - 1) * self.n_base
        hi = (math.floor((R + a) / self.period) + 2) * self.n_base
        pts = self.lambdas(lo, hi)
        return pts[(pts >= R) & (pts <= R + a)]

    def fractional_parts(self) -> np.ndarray:
        return np.mod(np.asarray(self.base_points), 1.0)

    def to_json(self) -> dict:
        d = self.density()
        return {
            "N": self.N, "N1": self.N1, "delta": self.delta, "eps1": self.eps1,
            "period": self.period, "base_points": list(self.base_points),
            "density": [d.numerator, d.denominator],
        }


def _base_points(N: int, N1: int, delta: float) -> tuple[float, ...]:
    cluster = [j / (N + 1) for j in range(N + 1)]
    tail = [j + 1 - j * delta for j in range(1, N1 + 1)]
    return tuple(cluster + tail)


def build_universal(eps: float, N: int, delta: float | None = None,
                    eps1: float | None = None) -> UniversalSet:
    """Construct Lambda(eps, N) with N1 = strict_floor(N / eps) + 1.

    Defaults: eps1 = 1/(4 N1), delta = 2 eps1 = 1/(2 N1). Overrides must keep
    0 < delta < 1/N1, delta = 2 eps1 and j*delta > eps1 for 1 <= j <= N1.
    """
    if not eps > 0:
        raise ValueError("eps must be positive")
    if int(N) != N or N < 1:
        raise ValueError("N must be a positive integer")
    N = int(N)
    # decimal reading of eps so that e.g. N/0.1 is exactly 10N
    eps_q = eps if isinstance(eps, Fraction) else Fraction(str(float(eps)))
    N1 = strict_floor(Fraction(N) / eps_q) + 1
    if delta is None and eps1 is None:
        eps1 = 1.0 / (4 * N1)
        delta = 2.0 * eps1
    elif delta is None:
        delta = 2.0 * eps1
    elif eps1 is None:
        eps1 = delta / 2.0
    if not 0 < delta < 1.0 / N1:
        raise InvalidOverride(f"delta={delta} must lie in (0, 1/N1) with N1={N1}")
    if not math.isclose(delta, 2.0 * eps1, rel_tol=1e-12):
        raise InvalidOverride(f"delta={delta} must equal 2*eps1={2 * eps1}")
    if not (eps1 > 0 and delta > eps1):
        raise InvalidOverride("need j*delta > eps1 for every tail point")
    return UniversalSet(N=N, N1=N1, eps1=float(eps1), delta=float(delta),
                        base_points=_base_points(N, N1, delta), eps=float(eps))


def periodic_set(base_points, period, N=1) -> UniversalSet:
    """A generic periodic set in the same container, e.g. 2Z as ([0], 2).

    Used for negative controls; N1 is period - 1, eps1 and delta are unused.
    """
    pts = tuple(sorted(float(p) for p in base_points))
    if int(period) != period or period < 1:
        raise ValueError("period must be a positive integer")
    if not all(0 <= p < period for p in pts):
        raise ValueError("base points must lie in [0, period)")
    return UniversalSet(N=N, N1=int(period) - 1, eps1=0.0, delta=0.0,
                        base_points=pts)
