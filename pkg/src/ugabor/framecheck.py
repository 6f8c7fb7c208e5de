"""Finite-section frame-bound estimates and the criterion quadratic form.

The fibre operator L_xi maps a sequence x (indexed by integer columns) to
rows (L_xi x)_lambda = sum_s m_s(t) x_{b+s}. Lower and upper frame-type
bounds are estimated as min/max over a xi grid of the extreme singular
values of a column section: interior columns [0, periods * period) together
with every row that touches them.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .numerics import integrate, svd_extremes
from .segments import RowSpec, row_spec
from .symbols import SymbolFamily, general_symbol_family
from .universal import UniversalSet
from .windows import Window

log = logging.getLogger(__name__)


@dataclass
class Section:
    matrix: np.ndarray
    rows: list[RowSpec]
    col0: int


def _rows_touching(xi, uset: UniversalSet, M: int, cmin: int, cmax: int) -> list[RowSpec]:
    """Rows whose column range [b, b+M-1] meets [cmin, cmax]."""
    # b = ceil(lambda - xi) lies within 1 of lambda
    lo = (math.floor((cmin - M - 1) / uset.period) - 1) * uset.n_base
    hi = (math.floor((cmax + 2) / uset.period) + 1) * uset.n_base
    out = []
    for i, lam in zip(range(lo, hi), uset.lambdas(lo, hi)):
        r = row_spec(xi, float(lam), i)
        if r.b + M - 1 >= cmin and r.b <= cmax:
            out.append(r)
    return out


def _fill(rows, family: SymbolFamily, col0: int, ncols: int) -> np.ndarray:
    M = family.M
    vals = family.values(np.array([r.t for r in rows]))
    mat = np.zeros((len(rows), ncols), dtype=complex)
    for i, r in enumerate(rows):
        for s in range(M):
            c = r.b + s - col0
            if 0 <= c < ncols:
                mat[i, c] = vals[s, i]
    return mat


def column_section(xi: float, uset: UniversalSet, family: SymbolFamily,
                   periods: int = 8) -> Section:
    """L_xi restricted to columns [0, periods * period), all touching rows."""
    if periods < 1:
        raise ValueError("periods must be >= 1")
    ncols = periods * uset.period
    rows = _rows_touching(xi, uset, family.M, 0, ncols - 1)
    return Section(_fill(rows, family, 0, ncols), rows, 0)


def truncated_operator(xi: float, uset: UniversalSet, family: SymbolFamily,
                       periods: int = 2) -> Section:
    """Rows of ``periods`` whole periods (from index 0), with every column
    they touch."""
    from .segments import rows_for

    if periods < 1:
        raise ValueError("periods must be >= 1")
    rows = rows_for(xi, uset, 0, periods * uset.n_base)
    col0 = min(r.b for r in rows)
    ncols = max(r.b for r in rows) + family.M - col0
    return Section(_fill(rows, family, col0, ncols), rows, col0)


def truncated_matrix(xi: float, uset: UniversalSet, family: SymbolFamily,
                     periods: int = 2) -> np.ndarray:
    return truncated_operator(xi, uset, family, periods).matrix


def degenerate_points(uset: UniversalSet) -> np.ndarray:
    return np.unique(np.concatenate([uset.fractional_parts(), [0.0, 1.0]]))


def xi_grid(uset: UniversalSet, steps: int = 64, eta: float = 1e-3) -> np.ndarray:
    """Cell midpoints (i + 1/2)/steps, minus those within eta of a
    fractional part of the set (or of 0, 1)."""
    if steps < 1:
        raise ValueError("steps must be >= 1")
    xs = (np.arange(steps) + 0.5) / steps
    bad = degenerate_points(uset)
    keep = np.min(np.abs(xs[:, None] - bad[None, :]), axis=1) > eta
    return xs[keep]


@dataclass
class FrameEstimate:
    A_est: float
    B_est: float
    xi: np.ndarray
    sigma_min: np.ndarray
    sigma_max: np.ndarray
    periods: int
    eta: float
    xi_argmin: float = field(default=float("nan"))

    def to_csv(self) -> str:
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(["xi", "sigma_min", "sigma_max"])
        for x, lo, hi in zip(self.xi, self.sigma_min, self.sigma_max):
            wr.writerow([repr(float(x)), repr(float(lo)), repr(float(hi))])
        return buf.getvalue()

    def summary(self) -> dict:
        return {"A_est": self.A_est, "B_est": self.B_est,
                "xi_argmin": self.xi_argmin, "n_xi": int(self.xi.size),
                "periods": self.periods, "eta": self.eta}

    def to_json(self) -> str:
        return json.dumps(self.summary(), indent=2)


def frame_bounds_estimate(window: Window, uset: UniversalSet, xi_steps: int = 64,
                          periods: int = 8, eta: float = 1e-3,
                          family: SymbolFamily | None = None,
                          backend: str | None = None) -> FrameEstimate:
    """A_est = min sigma_min^2, B_est = max sigma_max^2 over the xi grid."""
    if family is None:
        family = general_symbol_family(window)
    xs = xi_grid(uset, xi_steps, eta)
    lo = np.empty(xs.size)
    hi = np.empty(xs.size)
    for k, xi in enumerate(xs):
        sec = column_section(float(xi), uset, family, periods)
        lo[k], hi[k] = svd_extremes(sec.matrix, backend=backend)
    i = int(np.argmin(lo))
    return FrameEstimate(A_est=float(lo[i] ** 2), B_est=float(np.max(hi) ** 2),
                         xi=xs, sigma_min=lo, sigma_max=hi, periods=periods,
                         eta=eta, xi_argmin=float(xs[i]))


def bloch_extremes(xi: float, uset: UniversalSet, family: SymbolFamily,
                   n_theta: int = 256):
    """Extreme singular values of the bi-infinite L_xi via its Bloch symbol.

    L_xi commutes with the shift by one period (n_base rows, period columns),
    so its spectrum is the union over theta of the n_base x period matrices
    Lhat(theta)[r, c] = sum_{b_r + s = c + k P} m_s(t_r) e^{i theta k}.
    Returns (min, max) over a theta grid; uses LAPACK singular values.
    """
    P, M = uset.period, family.M
    rows = [row_spec(xi, float(lam), i)
            for i, lam in enumerate(uset.lambdas(0, uset.n_base))]
    vals = family.values(np.array([r.t for r in rows]))
    lo, hi = np.inf, 0.0
    for theta in 2 * np.pi * (np.arange(n_theta) + 0.5) / n_theta:
        sym = np.zeros((len(rows), P), dtype=complex)
        for i, r in enumerate(rows):
            for s in range(M):
                k, c = divmod(r.b + s, P)
                sym[i, c] += vals[s, i] * np.exp(1j * theta * k)
        sv = np.linalg.svd(sym, compute_uv=False)
        lo, hi = min(lo, sv[-1]), max(hi, sv[0])
    return float(lo), float(hi)


@dataclass
class TestFunction:
    """Piecewise-constant G(x) = samples[floor(x) - start] on [start, start + n)."""
    samples: np.ndarray
    start: int = 0

    __test__ = False  # not a pytest class

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=complex)

    @property
    def stop(self) -> int:
        return self.start + self.samples.size

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        k = np.floor(x).astype(int) - self.start
        inside = (k >= 0) & (k < self.samples.size)
        out = np.zeros(x.shape, dtype=complex)
        out[inside] = self.samples[k[inside]]
        return out

    def norm2(self) -> float:
        """||G||_2^2 (unit cells)."""
        return float(np.sum(np.abs(self.samples) ** 2))


def criterion_form(G: TestFunction, family: SymbolFamily, uset: UniversalSet,
                   nodes: int = 2048) -> float:
    """S(G) = sum_lambda int_0^1 |sum_l G(t + lambda + l) m_l(t)|^2 dt.

    The integrand jumps where t + lambda crosses an integer, so each lambda's
    integral is split there and the midpoint rule applied on both pieces.
    """
    M = family.M
    lo_lam = G.start - M - 1
    hi_lam = G.stop + 1
    i0 = (math.floor(lo_lam / uset.period) - 1) * uset.n_base
    i1 = (math.floor(hi_lam / uset.period) + 1) * uset.n_base
    lams = uset.lambdas(i0, i1)
    lams = lams[(lams > lo_lam) & (lams < hi_lam)]
    total = 0.0
    for lam in lams:
        cut = math.ceil(lam) - lam
        pieces = [(0.0, 1.0)] if cut in (0.0, 1.0) else [(0.0, cut), (cut, 1.0)]
        for a, b in pieces:
            n = max(8, int(round(nodes * (b - a))))
            h = (b - a) / n
            t = a + h * (np.arange(n) + 0.5)
            vals = family.values(t)
            acc = np.zeros(n, dtype=complex)
            for l in range(M):
                acc += G(t + lam + l) * vals[l]
            total += float(np.sum(np.abs(acc) ** 2) * h)
    return total


def fibre_form(G: TestFunction, family: SymbolFamily, uset: UniversalSet,
               xi_nodes: int = 512) -> float:
    """int_0^1 ||L_xi x||^2 d xi with x_c = G(c): a second route to S(G).

    The integrand jumps at the fractional parts of the set, so [0, 1] is
    split there and each piece gets its own midpoint rule.
    """
    M = family.M
    cuts = degenerate_points(uset)
    total = 0.0
    for a, b in zip(cuts[:-1], cuts[1:]):
        n = max(8, int(round(xi_nodes * (b - a))))
        h = (b - a) / n
        for xi in a + h * (np.arange(n) + 0.5):
            rows = _rows_touching(float(xi), uset, M, G.start, G.stop - 1)
            sec = _fill(rows, family, G.start, G.samples.size)
            total += float(np.sum(np.abs(sec @ G.samples) ** 2)) * h
    return total


def _atoms(window: Window, lams, shifts, t):
    """pi_{lambda,n} g (t) = e^{2 pi i lambda t} g(t - n), shape (L, S, T)."""
    g = window(t[None, :] - shifts[:, None])
    e = np.exp(2j * np.pi * np.outer(lams, t))
    return e[:, None, :] * g[None, :, :]


def gabor_sum_oracle(f, window: Window, uset: UniversalSet, T: float = 8.0,
                     n_shift: int = 200, support=(-6.0, 6.0), t_grid=None,
                     rtol: float = 1e-8, max_nodes: int = 2 ** 20) -> float:
    """sum_{|lambda| <= T, |n| <= n_shift} |<f, e^{2 pi i lambda .} g(. - n)>|^2.

    ``f`` is a vectorised callable supported in ``support`` (midpoint rule,
    doubled until the sum changes by less than ``rtol``), or an array of
    samples at the midpoints ``t_grid`` of a uniform partition.
    """
    lams = uset.points_in(-T, 2 * T)
    shifts = np.arange(-n_shift, n_shift + 1, dtype=float)

    def total(t, fv, h):
        s = 0.0
        for lam in lams:  # one frequency at a time keeps memory flat
            coef = (_atoms(window, [lam], shifts, t)[0].conj() @ fv) * h
            s += float(np.sum(np.abs(coef) ** 2))
        return s

    if not callable(f):
        t = np.asarray(t_grid, dtype=float)
        h = float(t[1] - t[0])
        return total(t, np.asarray(f, dtype=complex), h)

    a, b = support
    n = 1024
    prev = None
    while n <= max_nodes:
        h = (b - a) / n
        t = a + h * (np.arange(n) + 0.5)
        cur = total(t, np.asarray(f(t), dtype=complex), h)
        if prev is not None and abs(cur - prev) <= rtol * abs(cur):
            return cur
        prev, n = cur, 2 * n
    log.warning("gabor_sum_oracle: rtol %g not met with %d nodes", rtol, max_nodes)
    return prev


def l2_norm2(f, support=(-6.0, 6.0)) -> float:
    a, b = support
    return float(integrate(lambda t: np.abs(f(t)) ** 2, a, b).real)
