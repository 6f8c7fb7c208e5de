"""Rational window functions g(t) = sum_k a_k / (t - i w_k)^{j_k}.

Windows are stored as pole data. ``validate`` turns raw term data into a
:class:`SimpleWindow` (all multiplicities 1) or a :class:`GeneralWindow`.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (DuplicatePole, ImaginaryPoleParameter,
                     NonpositiveMultiplicity, OverflowRisk, UnsupportedWindow,
                     WindowError, ZeroAmplitude)

TWO_PI = 2.0 * math.pi
POLE_TOL = 1e-12
# e^{2 pi w} must stay well inside binary64 range
MAX_EXPONENT = 40.0
# zeros closer than this to t = 0 do not count as t < 0
ORIGIN_GAP = 1e-9


@dataclass(frozen=True)
class PoleTerm:
    a: complex
    w: complex
    j: int = 1

    @property
    def u(self) -> complex:
        """e^{2 pi w}."""
        return complex(np.exp(TWO_PI * self.w))


@dataclass(frozen=True)
class Window:
    terms: tuple[PoleTerm, ...]

    @property
    def N(self) -> int:
        return len(self.terms)

    @property
    def M(self) -> int:
        return sum(t.j for t in self.terms)

    @property
    def a(self) -> np.ndarray:
        return np.array([t.a for t in self.terms], dtype=complex)

    @property
    def w(self) -> np.ndarray:
        return np.array([t.w for t in self.terms], dtype=complex)

    @property
    def j(self) -> np.ndarray:
        return np.array([t.j for t in self.terms], dtype=int)

    @property
    def is_simple(self) -> bool:
        return all(t.j == 1 for t in self.terms)

    def __call__(self, t):
        return eval_window(self, t)

    def to_json(self) -> dict:
        return {"terms": [
            {"a": [t.a.real, t.a.imag], "w": [t.w.real, t.w.imag], "j": t.j}
            for t in self.terms]}


@dataclass(frozen=True)
class SimpleWindow(Window):
    pass


@dataclass(frozen=True)
class GeneralWindow(Window):
    pass


@dataclass
class MembershipReport:
    member: bool
    witness: float | None
    min_modulus: float
    # min of |Phi| / sum_k |term_k| over the scan; scale-free closeness to 0
    min_relative: float = math.inf
    # True when the dominant term provably controls Phi beyond the scan
    tail_certified: bool = False
    candidates: list = field(default_factory=list)


def _as_complex(x) -> complex:
    if isinstance(x, (list, tuple)):
        if len(x) != 2:
            raise WindowError(f"complex numbers are [re, im] pairs, got {x!r}")
        return complex(float(x[0]), float(x[1]))
    return complex(x)


def validate(spec) -> SimpleWindow | GeneralWindow:
    """Check raw pole data and return a typed window.

    ``spec`` is a sequence of mappings with keys ``a``, ``w`` and optional
    ``j`` (default 1), or a document ``{"terms": [...]}``. Complex values may
    be Python complex numbers or ``[re, im]`` pairs.
    """
    if isinstance(spec, dict):
        spec = spec.get("terms")
    if not spec:
        raise WindowError("window specification has no terms")

    terms = []
    for raw in spec:
        if isinstance(raw, PoleTerm):
            a, w, j = raw.a, raw.w, raw.j
        else:
            a, w, j = _as_complex(raw["a"]), _as_complex(raw["w"]), raw.get("j", 1)
        if int(j) != j or j < 1:
            raise NonpositiveMultiplicity(f"multiplicity must be >= 1, got {j!r}")
        if a == 0:
            raise ZeroAmplitude("amplitude a = 0")
        if abs(w.real) <= POLE_TOL:
            raise ImaginaryPoleParameter(f"w = {w} lies on the imaginary axis")
        if abs(TWO_PI * w.real) > MAX_EXPONENT:
            raise OverflowRisk(f"|2 pi Re w| > {MAX_EXPONENT} for w = {w}")
        terms.append(PoleTerm(complex(a), complex(w), int(j)))

    for p in range(len(terms)):
        for q in range(p):
            if abs(terms[p].w - terms[q].w) <= POLE_TOL:
                raise DuplicatePole(f"pole parameter {terms[p].w} repeated")
            up, uq = terms[p].u, terms[q].u
            if abs(up - uq) <= POLE_TOL * max(abs(up), abs(uq)):
                raise DuplicatePole(
                    f"e^(2 pi w) coincides for w = {terms[q].w} and {terms[p].w}")

    if all(t.j == 1 for t in terms):
        return SimpleWindow(tuple(terms))
    # stable sort keeps the caller's order among equal multiplicities
    return GeneralWindow(tuple(sorted(terms, key=lambda t: t.j)))


def load_window(path_or_doc):
    if isinstance(path_or_doc, (str, bytes)) or hasattr(path_or_doc, "__fspath__"):
        with open(path_or_doc) as fh:
            doc = json.load(fh)
    else:
        doc = path_or_doc
    return validate(doc)


def eval_window(window: Window, t):
    """g(t) for real t (scalar or array)."""
    t = np.asarray(t, dtype=float)
    out = np.zeros(t.shape, dtype=complex)
    for term in window.terms:
        out = out + term.a / (t - 1j * term.w) ** term.j
    return out[()] if out.ndim == 0 else out


def class_test_terms(window: Window):
    """Terms (c, w, p) of the membership test function

        Phi(t) = sum_k a_k e^{2 pi w_k t} (2 pi i)^{j_k-1} / (j_k-1)! t^{j_k-1}.
    """
    out = []
    for term in window.terms:
        n = term.j - 1
        c = term.a * (2j * math.pi) ** n / math.factorial(n)
        out.append((c, term.w, n))
    return out


def _phi(terms, t):
    t = np.asarray(t, dtype=float)
    vals = [c * np.exp(TWO_PI * w * t) * t ** p for c, w, p in terms]
    total = np.sum(vals, axis=0)
    scale = np.sum(np.abs(vals), axis=0)
    return total, scale


def _dphi(terms, t):
    out = 0j
    for c, w, p in terms:
        e = np.exp(TWO_PI * w * t)
        out += c * e * (TWO_PI * w * t ** p + (p * t ** (p - 1) if p else 0.0))
    return out


def _refine(terms, t0, lo, hi, atol):
    """Refine a candidate zero of Phi near t0 inside [lo, hi].

    Complex Newton on the analytic extension of Phi; the root is accepted
    only if it is (numerically) real. Falls back to bisection on a sign
    change of Re Phi for real-valued test functions.
    """
    z = complex(t0)
    for _ in range(60):
        f = _phi_complex(terms, z)
        df = _dphi(terms, z)
        if df == 0:
            break
        step = f / df
        z = z - step
        if not (lo - 1.0 <= z.real <= hi + 1.0):
            break
        if abs(step) <= 1e-15 * max(1.0, abs(z)):
            break
    cands = []
    if abs(z.imag) <= 1e-9 and z.real < -ORIGIN_GAP:
        cands.append(z.real)

    # sign-change bisection on Re Phi when Phi is real along the line
    flo, _ = _phi(terms, lo)
    fhi, _ = _phi(terms, hi)
    if (abs(np.imag(flo)) <= atol * abs(flo) + 1e-300
            and abs(np.imag(fhi)) <= atol * abs(fhi) + 1e-300
            and np.real(flo) * np.real(fhi) < 0):
        a, b = lo, hi
        fa = np.real(flo)
        for _ in range(200):
            m = 0.5 * (a + b)
            fm = np.real(_phi(terms, m)[0])
            if fm == 0 or b - a < 1e-16 * max(1.0, abs(m)):
                break
            if np.sign(fm) == np.sign(fa):
                a, fa = m, fm
            else:
                b = m
        if 0.5 * (a + b) < -ORIGIN_GAP:
            cands.append(0.5 * (a + b))

    best = None
    for c in cands:
        val, scale = _phi(terms, c)
        rel = abs(val) / scale if scale > 0 else 0.0
        if rel <= atol and (best is None or rel < best[1]):
            best = (float(c), float(rel))
    return best


def _phi_complex(terms, z):
    out = 0j
    for c, w, p in terms:
        out += c * np.exp(TWO_PI * w * z) * z ** p
    return out


def _tail_certified(terms, T_max):
    """Whether one term dominates Phi for all t <= -T_max.

    As t -> -inf the term with the smallest Re w (highest power among ties)
    decays slowest. If it is unique and already exceeds the sum of the
    others at -T_max, the ratio others/dominant only shrinks further left
    for exponent gaps; polynomial factors are covered by requiring the
    margin to persist at -2 T_max as well.
    """
    keyed = sorted(terms, key=lambda c: (c[1].real, -c[2]))
    dom = keyed[0]
    ties = [c for c in keyed[1:] if abs(c[1].real - dom[1].real) <= POLE_TOL
            and c[2] == dom[2]]
    if ties:
        return False
    for t in (-T_max, -2.0 * T_max):
        d = abs(dom[0] * np.exp(TWO_PI * dom[1].real * t) * abs(t) ** dom[2])
        rest = sum(abs(c[0] * np.exp(TWO_PI * c[1].real * t) * abs(t) ** c[2])
                   for c in keyed[1:])
        if not d > rest:
            return False
    return True


def class_test(window: Window, T_max: float = 50.0, steps: int = 20_000,
               atol: float = 1e-12, rtol: float = 1e-3) -> MembershipReport:
    """Semi-decide membership in K(N) / K_1(M) by scanning [-T_max, 0).

    Phi is sampled on a uniform grid; every local minimum of the scale-free
    modulus |Phi| / sum_k |term_k| and every sign change of Re Phi or Im Phi
    is refined (Newton plus bisection). A refined point with relative
    modulus below ``atol`` is a witness of non-membership. ``rtol`` marks
    grid dips worth refining. ``tail_certified`` reports whether the region
    left of the scan is controlled by a single dominant term.
    """
    if T_max <= 0:
        raise ValueError("T_max must be positive")
    if steps < 100:
        raise ValueError("steps must be >= 100")
    terms = class_test_terms(window)
    t = np.linspace(-T_max, 0.0, steps, endpoint=False)
    val, scale = _phi(terms, t)
    mod = np.abs(val)
    rel = np.divide(mod, scale, out=np.zeros_like(mod), where=scale > 0)
    h = t[1] - t[0]

    idx = set()
    interior = np.arange(1, len(t) - 1)
    is_min = (rel[interior] <= rel[interior - 1]) & (rel[interior] <= rel[interior + 1])
    idx.update(interior[is_min & (rel[interior] < rtol)].tolist())
    for part in (val.real, val.imag):
        s = np.sign(part)
        flips = np.nonzero(s[:-1] * s[1:] < 0)[0]
        idx.update(flips.tolist())
    idx.update(np.nonzero(rel < rtol)[0][:1].tolist())

    witness = None
    best_rel = math.inf
    cands = []
    for i in sorted(idx):
        lo = t[max(i - 1, 0)]
        hi = min(t[min(i + 1, len(t) - 1)] + h, 0.0 - 1e-15)
        found = _refine(terms, t[i], lo, hi, atol)
        if found is not None:
            cands.append(found[0])
            if found[1] < best_rel:
                best_rel, witness = found[1], found[0]

    return MembershipReport(
        member=witness is None,
        witness=witness,
        min_modulus=float(mod.min()),
        min_relative=float(min(rel.min(), best_rel)),
        tail_certified=_tail_certified(terms, T_max),
        candidates=cands,
    )


def fourier_transform(window: Window, tau):
    """ghat(tau) = int g(t) e^{2 pi i t tau} dt for simple windows with w_k > 0.

    Equals 2 pi i sum_k a_k e^{-2 pi w_k tau} for tau > 0 and 0 for tau < 0.
    """
    for term in window.terms:
        if term.j != 1:
            raise UnsupportedWindow("fourier_transform needs simple poles")
        if term.w.imag != 0 or term.w.real <= 0:
            raise UnsupportedWindow(f"fourier_transform needs real w > 0, got {term.w}")
    tau = np.asarray(tau, dtype=float)
    out = np.zeros(tau.shape, dtype=complex)
    pos = tau > 0
    for term in window.terms:
        out[pos] += 2j * math.pi * term.a * np.exp(-TWO_PI * term.w.real * tau[pos])
    return out[()] if out.ndim == 0 else out
