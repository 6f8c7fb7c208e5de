"""Randomised and grid sweeps behind the verification subcommands."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .framecheck import xi_grid
from .segments import build_segments, erase_row, segment_det, vandermonde_det
from .symbols import (general_symbol_family, simple_symbol_family, trick_lhs,
                      trick_rhs)
from .universal import build_universal
from .windows import Window, validate


@dataclass
class SweepReport:
    name: str
    trials: int
    max_error: float
    tol: float
    worst: dict

    @property
    def ok(self) -> bool:
        return self.max_error < self.tol

    def to_json(self) -> dict:
        return {"name": self.name, "trials": self.trials,
                "max_error": self.max_error, "tol": self.tol, "ok": self.ok,
                "worst": self.worst}


def random_real_poles(rng, N, lo=-1.0, hi=1.0, band=1e-3):
    """N real pole parameters, pairwise and from 0 at least ``band`` apart."""
    while True:
        w = rng.uniform(lo, hi, N)
        pts = np.append(w, 0.0)
        gaps = np.abs(pts[:, None] - pts[None, :])[np.triu_indices(N + 1, 1)]
        if gaps.min() > band:
            return w


def random_simple_window(rng, N, band=1e-3) -> Window:
    w = random_real_poles(rng, N, band=band)
    mod = rng.uniform(0.5, 2.0, N)
    arg = rng.uniform(0.0, 2 * np.pi, N)
    a = mod * np.exp(1j * arg)
    return validate([{"a": complex(ak), "w": float(wk), "j": 1} for ak, wk in zip(a, w)])


def random_general_window(rng, max_M=6) -> Window:
    while True:
        N = int(rng.integers(1, 4))
        j = rng.integers(1, 4, N)
        if j.sum() <= max_M:
            break
    w = random_real_poles(rng, N, lo=-0.8, hi=0.8, band=0.05)
    a = rng.uniform(0.5, 2.0, N) * np.exp(1j * rng.uniform(0, 2 * np.pi, N))
    return validate([{"a": complex(ak), "w": float(wk), "j": int(jk)}
                     for ak, wk, jk in zip(a, w, j)])


def vandermonde_sweep(N: int, trials: int = 200, seed: int = 0,
                      tol: float = 1e-9) -> SweepReport:
    """max | |det B| - formula | / formula over random valid instances."""
    rng = np.random.default_rng([seed, N])
    worst, err_max = {}, 0.0
    for _ in range(trials):
        win = random_simple_window(rng, N)
        alpha = N + 0.1 + 3.9 * rng.random()
        lo = (N - 1) / alpha
        xi = lo + (1.0 - lo) * (0.01 + 0.98 * rng.random())
        formula, direct = vandermonde_det(win, xi, alpha)
        err = abs(abs(direct) - formula) / formula
        if err >= err_max:
            err_max = err
            worst = {"w": win.w.tolist(), "xi": xi, "alpha": alpha,
                     "formula": formula, "direct_abs": abs(direct)}
    return SweepReport(f"vandermonde N={N}", trials, float(err_max), tol, worst)


def random_support(rng, max_size=8, span=5):
    size = int(rng.integers(1, max_size + 1))
    n = rng.choice(np.arange(-span, span + 1), size=size, replace=False)
    v = rng.standard_normal(size) + 1j * rng.standard_normal(size)
    return {int(k): complex(x) for k, x in zip(n, v)}


def trick_sweep(k: int, trials: int = 100, seed: int = 0,
                tol: float = 1e-8) -> SweepReport:
    rng = np.random.default_rng([seed, k])
    worst, err_max = {}, 0.0
    for _ in range(trials):
        c = random_support(rng)
        z = complex(rng.uniform(-3, 3), rng.uniform(0.2, 2.0))
        lhs, rhs = trick_lhs(k, c, z), trick_rhs(k, c, z)
        err = abs(lhs - rhs) / max(abs(lhs), abs(rhs))
        if err >= err_max:
            err_max = err
            worst = {"z": [z.real, z.imag], "lhs": [lhs.real, lhs.imag],
                     "rhs": [rhs.real, rhs.imag]}
    return SweepReport(f"trick k={k}", trials, float(err_max), tol, worst)


def factorization_sweep(window: Window, eps: float = 0.5, xi_steps: int = 64,
                        periods: int = 1, tol: float = 1e-9) -> SweepReport:
    """|det - block_det * tail_product| / |det| over a nondegenerate xi grid."""
    fam = general_symbol_family(window)
    uset = build_universal(eps, fam.M)
    xs = xi_grid(uset, xi_steps)
    worst, err_max, count = {}, 0.0, 0
    for xi in xs:
        for seg in build_segments(float(xi), uset, fam, periods):
            det, bdet, tail = segment_det(erase_row(seg))
            err = abs(det - bdet * tail) / abs(det)
            count += 1
            if err >= err_max:
                err_max = err
                worst = {"xi": float(xi), "period": seg.period,
                         "det": [det.real, det.imag]}
    return SweepReport(f"factorization M={fam.M}", count, float(err_max), tol, worst)


@dataclass
class FdReport:
    eps1: list
    window_errors: list
    window_ratios: list
    symbol_errors: list   # per eps1, per s
    symbol_orders: list   # per halving, per s
    ratio_band: tuple = (1.7, 2.3)

    @property
    def ok(self) -> bool:
        lo, hi = self.ratio_band
        good = all(lo <= r <= hi for r in self.window_ratios)
        # orders are compared at two decimals: a first-order scheme whose
        # second-order term has the opposite sign reports 0.9999...
        return good and all(round(o, 2) >= 1.0 for row in self.symbol_orders for o in row)

    def to_json(self) -> dict:
        return {"eps1": self.eps1, "window_errors": self.window_errors,
                "window_ratios": self.window_ratios,
                "symbol_errors": self.symbol_errors,
                "symbol_orders": self.symbol_orders, "ok": self.ok}


def fd_convergence(window: Window, eps1=(1e-2, 5e-3, 2.5e-3), t_range=(-5.0, 5.0),
                   n: int = 2001, n_sym: int = 401) -> FdReport:
    """Sup-norm errors of the simple-pole approximation and of its symbols."""
    from .segments import fd_window

    if all(term.j == 1 for term in window.terms):
        raise ValueError("window has only simple poles; its finite-difference "
                         "approximation is exact")
    t = np.linspace(*t_range, n)
    ts = np.linspace(0.0, 1.0, n_sym)
    g = window(t)
    ref = general_symbol_family(window).values(ts)
    werr, serr = [], []
    for e in eps1:
        fd = fd_window(window, e)
        werr.append(float(np.max(np.abs(fd(t) - g))))
        vals = simple_symbol_family(fd).values(ts)
        serr.append([float(x) for x in np.max(np.abs(vals - ref), axis=1)])
    ratios = [werr[i] / werr[i + 1] for i in range(len(werr) - 1)]
    orders = []
    for i in range(len(eps1) - 1):
        step = math.log(eps1[i] / eps1[i + 1])
        orders.append([math.log(a / b) / step if b > 0 else math.inf
                       for a, b in zip(serr[i], serr[i + 1])])
    return FdReport(list(eps1), werr, ratios, serr, orders)
