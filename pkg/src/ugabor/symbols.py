"""Symbol functions m_0, ..., m_{M-1} of the frame criterion.

Everything is carried in two normal forms:

* :class:`ExpPolynomial` -- finite sums c * e^{2 pi w t} * t^p, used for the
  symbols themselves;
* :class:`QPolynomial` / :class:`QRational` -- polynomials and rational
  functions of q = e^{2 pi i z}, used for the coefficient bookkeeping.

Simple poles use A_{k,l} = (-1)^l e_l({u_j}_{j != k}) with u_j = e^{2 pi w_j}.
Multiple poles go through the expansion of (1 - q)^k sum_n c_n/(z - n)^k in
derivatives of h(z) = (1 - q) sum_n c_n/(z - n), which produces the tables
a_{l,d}, A_{k,s} and B^{(k)}_{s,l}.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb, factorial

import numpy as np
from numpy.polynomial import polynomial as P
from scipy.optimize import minimize_scalar

from .errors import NoncancellingDenominator, PoleHit
from .windows import TWO_PI, Window

log = logging.getLogger(__name__)

TWO_PI_I = 2j * math.pi
MAX_DEGREE = 12


# ---------------------------------------------------------------------------
# normal forms
# ---------------------------------------------------------------------------

class ExpPolynomial:
    """sum of c * exp(2 pi w t) * t**p, keyed exactly by (w, p)."""

    __slots__ = ("terms",)

    def __init__(self, terms=()):
        merged = {}
        for c, w, p in terms:
            key = (complex(w), int(p))
            merged[key] = merged.get(key, 0j) + complex(c)
        self.terms = tuple((c, w, p) for (w, p), c in merged.items() if c != 0)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        out = np.zeros(t.shape, dtype=complex)
        for c, w, p in self.terms:
            out = out + c * np.exp(TWO_PI * w * t) * t ** p
        return out[()] if out.ndim == 0 else out

    def __add__(self, other):
        return ExpPolynomial(self.terms + other.terms)

    def __mul__(self, scalar):
        return ExpPolynomial((c * scalar, w, p) for c, w, p in self.terms)

    __rmul__ = __mul__

    def deriv(self):
        out = []
        for c, w, p in self.terms:
            out.append((c * TWO_PI * w, w, p))
            if p:
                out.append((c * p, w, p - 1))
        return ExpPolynomial(out)

    def as_dict(self):
        return {(w, p): c for c, w, p in self.terms}

    def to_json(self):
        return [{"c": [c.real, c.imag], "w": [w.real, w.imag], "p": p}
                for c, w, p in sorted(self.terms, key=lambda x: (x[1].real, x[1].imag, x[2]))]

    def __repr__(self):
        return f"ExpPolynomial({len(self.terms)} terms)"


class QPolynomial:
    """Polynomial sum_d c_d q^d, coefficients in ascending order."""

    __slots__ = ("coef",)

    def __init__(self, coef):
        c = np.atleast_1d(np.asarray(coef, dtype=complex))
        nz = np.nonzero(c)[0]
        self.coef = c[: nz[-1] + 1].copy() if nz.size else np.zeros(1, dtype=complex)

    @property
    def degree(self):
        return len(self.coef) - 1 if np.any(self.coef) else -1

    def __call__(self, q):
        return P.polyval(q, self.coef)

    def at_z(self, z):
        return self(np.exp(TWO_PI_I * np.asarray(z)))

    def __add__(self, other):
        return QPolynomial(P.polyadd(self.coef, _coef(other)))

    def __sub__(self, other):
        return QPolynomial(P.polysub(self.coef, _coef(other)))

    def __mul__(self, other):
        if isinstance(other, QPolynomial):
            return QPolynomial(P.polymul(self.coef, other.coef))
        return QPolynomial(self.coef * other)

    __rmul__ = __mul__

    def __pow__(self, n):
        return QPolynomial(P.polypow(self.coef, n)) if n else QPolynomial([1])

    def deriv(self):
        return QPolynomial(P.polyder(self.coef)) if len(self.coef) > 1 else QPolynomial([0])

    def exact_div(self, other, rtol=1e-12):
        """Quotient of a division that must leave no remainder."""
        quo, rem = P.polydiv(self.coef, other.coef)
        scale = max(np.max(np.abs(self.coef)), 1e-300)
        if np.max(np.abs(rem)) > rtol * scale:
            raise NoncancellingDenominator(
                f"remainder {np.max(np.abs(rem)):.3e} dividing degree "
                f"{self.degree} by degree {other.degree}")
        return QPolynomial(quo)

    def __repr__(self):
        return f"QPolynomial({self.coef.tolist()})"


def _coef(x):
    return x.coef if isinstance(x, QPolynomial) else np.atleast_1d(np.asarray(x, complex))


Q = QPolynomial([0, 1])
ONE = QPolynomial([1])
ONE_MINUS_Q = QPolynomial([1, -1])


@dataclass(frozen=True)
class QRational:
    numerator: QPolynomial
    denominator: QPolynomial

    def __post_init__(self):
        if self.denominator.degree < 0:
            raise ZeroDivisionError("denominator is identically zero")

    def __call__(self, q):
        return self.numerator(q) / self.denominator(q)

    def at_z(self, z):
        return self(np.exp(TWO_PI_I * np.asarray(z)))


# ---------------------------------------------------------------------------
# f_l(z) = d^l/dz^l 1/(1 - e^{2 pi i z})
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _chain_numerators(l):
    # f_l = N_l(q) / (1 - q)^{l+1};  d/dz = 2 pi i q d/dq
    if l == 0:
        return (ONE,)
    prev = _chain_numerators(l - 1)
    n = prev[-1]
    nxt = Q * (n.deriv() * ONE_MINUS_Q + n * l) * TWO_PI_I
    return prev + (nxt,)


def q_derivative_chain(l: int) -> QRational:
    """f_l as a rational function of q with denominator (1 - q)^{l+1}."""
    if not 0 <= l <= MAX_DEGREE:
        raise ValueError(f"need 0 <= l <= {MAX_DEGREE}")
    return QRational(_chain_numerators(l)[l], ONE_MINUS_Q ** (l + 1))


# ---------------------------------------------------------------------------
# expansion of g_{m,k} in derivatives of h_m
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TrickTable:
    """g_{m,j}(t - i w) = sum_{l,d} a[l, d] h_m^{(l)}(t - i w) e^{2 pi i t d}.

    ``q_coef[l, d]`` is the same expansion in q = e^{2 pi i z} before the
    substitution q = e^{2 pi w} e^{2 pi i t}, so a[l, d] = q_coef[l, d] u^d.
    """
    j: int
    w: complex
    a: np.ndarray
    q_coef: np.ndarray


@lru_cache(maxsize=None)
def _trick_q_polys(k):
    """Polynomial (in q) coefficient of h^{(l)} in g_{m,k}, l = 0..k-1."""
    polys = [QPolynomial([0]) for _ in range(k)]
    lead = (Q - ONE) ** (k - 1) * (1.0 / factorial(k - 1))
    polys[k - 1] = polys[k - 1] + lead
    for L in range(k - 1):
        outer = TWO_PI_I ** (k - L - 1) * comb(k - 1, L) / factorial(k - 1)
        for i in range(L + 1):
            f = q_derivative_chain(i)
            num = Q * (Q - ONE) ** (k - 1) * f.numerator
            poly = num.exact_div(f.denominator) * (outer * comb(L, i))
            polys[L - i] = polys[L - i] + poly
    return tuple(polys)


def trick_table(j: int, w: complex) -> TrickTable:
    if not 1 <= j <= MAX_DEGREE:
        raise ValueError(f"need 1 <= j <= {MAX_DEGREE}")
    polys = _trick_q_polys(j)
    qc = np.zeros((j, j), dtype=complex)
    for l, poly in enumerate(polys):
        if poly.degree >= j:
            raise NoncancellingDenominator(f"h^({l}) coefficient has degree {poly.degree}")
        if poly.degree >= 0:
            qc[l, : len(poly.coef)] = poly.coef
    u = complex(np.exp(TWO_PI * w))
    a = qc * (u ** np.arange(j))[None, :]
    return TrickTable(j=j, w=complex(w), a=a, q_coef=qc)


def _as_support(c):
    if isinstance(c, dict):
        items = sorted(c.items())
    else:
        items = list(enumerate(c))
    if len(items) > 32:
        raise ValueError("support of c is limited to 32 entries")
    n = np.array([k for k, _ in items], dtype=float)
    v = np.array([x for _, x in items], dtype=complex)
    return n, v


def _check_pole(n, z):
    if np.any(np.abs(z - n) < 1e-8):
        raise PoleHit(f"z = {z} is within 1e-8 of a support point")


def trick_lhs(k: int, c, z: complex) -> complex:
    """g_{m,k}(z) = (1 - e^{2 pi i z})^k sum_n c_n / (z - n)^k, summed directly."""
    n, v = _as_support(c)
    _check_pole(n, z)
    q = np.exp(TWO_PI_I * z)
    return complex((1 - q) ** k * np.sum(v / (z - n) ** k))


def h_derivative(l: int, c, z: complex) -> complex:
    """Exact l-th derivative of h(z) = (1 - e^{2 pi i z}) sum_n c_n / (z - n)."""
    n, v = _as_support(c)
    _check_pole(n, z)
    q = np.exp(TWO_PI_I * z)
    out = 0j
    for r in range(l + 1):
        d_outer = (1 - q) if r == 0 else -(TWO_PI_I ** r) * q
        p = l - r
        s_p = np.sum(v * (-1) ** p * factorial(p) / (z - n) ** (p + 1))
        out += comb(l, r) * d_outer * s_p
    return complex(out)


def trick_rhs(k: int, c, z: complex) -> complex:
    """Right-hand side of the derivative expansion of g_{m,k}:

        h^{(k-1)} (q-1)^{k-1}/(k-1)!
        + q (q-1)^{k-1}/(k-1)! sum_{l<k-1} (2 pi i)^{k-l-1} C(k-1,l)
              sum_{j<=l} C(l,j) h^{(l-j)} f_j,

    with the last sum read as 1 when k = 1 (so the result is h).
    """
    q = np.exp(TWO_PI_I * z)
    if abs(1 - q) <= 1e-8:
        raise PoleHit(f"1 - e^(2 pi i z) vanishes at z = {z}")
    hd = [h_derivative(l, c, z) for l in range(k)]
    base = (q - 1) ** (k - 1) / factorial(k - 1)
    out = hd[k - 1] * base
    if k > 1:
        acc = 0j
        for l in range(k - 1):
            inner = sum(comb(l, j) * hd[l - j] * q_derivative_chain(j)(q)
                        for j in range(l + 1))
            acc += TWO_PI_I ** (k - l - 1) * comb(k - 1, l) * inner
        out += q * base * acc
    return complex(out)


# ---------------------------------------------------------------------------
# symbol families
# ---------------------------------------------------------------------------

@dataclass
class SymbolFamily:
    M: int
    m: list
    window: Window
    intermediates: dict = field(default_factory=dict)

    def values(self, t):
        """Array of shape (M, len(t)) with m_s(t)."""
        t = np.atleast_1d(np.asarray(t, dtype=float))
        return np.array([ms(t) for ms in self.m])

    def max_modulus(self, n=2001):
        """max_s max_{t in [0,1]} |m_s(t)| on a uniform grid."""
        return float(np.max(np.abs(self.values(np.linspace(0.0, 1.0, n)))))

    def to_json(self):
        return {"M": self.M, "m": [ms.to_json() for ms in self.m]}


def elementary_symmetric(values) -> np.ndarray:
    """Coefficients of prod_j (1 - v_j Q): entry l is (-1)^l e_l(v)."""
    coef = np.array([1.0 + 0j])
    for v in values:
        coef = np.convolve(coef, [1.0, -v])
    return coef


def simple_symbol_family(window: Window) -> SymbolFamily:
    if not window.is_simple:
        raise ValueError("simple_symbol_family needs simple poles")
    N = window.N
    u = np.exp(TWO_PI * window.w)
    A = np.zeros((N, N), dtype=complex)
    for k in range(N):
        A[k] = elementary_symmetric([u[j] for j in range(N) if j != k])
    m = [ExpPolynomial((window.a[k] * A[k, l], window.w[k], 0) for k in range(N))
         for l in range(N)]
    return SymbolFamily(M=N, m=m, window=window, intermediates={"A": A})


def _pk_coefficients(window: Window, k: int) -> np.ndarray:
    """A_{k,s}: coefficients of prod_{l != k} (1 - u_l Q)^{j_l}."""
    coef = np.array([1.0 + 0j])
    for idx, term in enumerate(window.terms):
        if idx == k:
            continue
        factor = [(-1) ** s * comb(term.j, s) * term.u ** s for s in range(term.j + 1)]
        coef = np.convolve(coef, factor)
    return coef


def general_symbol_family(window: Window) -> SymbolFamily:
    M = window.M
    if M > MAX_DEGREE:
        raise ValueError(f"M = {M} exceeds {MAX_DEGREE}")
    tables, A, B = [], [], []
    acc = [[] for _ in range(M)]
    for k, term in enumerate(window.terms):
        tt = trick_table(term.j, term.w)
        Ak = _pk_coefficients(window, k)
        Bk = np.zeros((M, term.j), dtype=complex)
        for l in range(term.j):
            conv = np.convolve(tt.a[l], Ak)
            Bk[: len(conv), l] = conv[:M]
        tables.append(tt)
        A.append(Ak)
        B.append(Bk)
        for s in range(M):
            for l in range(term.j):
                acc[s].append((term.a * Bk[s, l] * TWO_PI_I ** l, term.w, l))
    m = [ExpPolynomial(acc[s]) for s in range(M)]
    return SymbolFamily(M=M, m=m, window=window,
                        intermediates={"A": A, "B": B, "trick": tables})


def top_symbol_closed_form(window: Window, as_printed: bool = False) -> ExpPolynomial:
    """Closed form of m_{M-1}:

        (-1)^{M-1} e^{2 pi sum_b w_b j_b}
            * sum_k a_k e^{2 pi w_k (t-1)} (2 pi i)^{j_k-1}/(j_k-1)! (1-t)^{j_k-1}.

    ``as_printed=True`` uses (t-1)^{j_k-1} instead of (1-t)^{j_k-1}; the two
    differ by (-1)^{j_k-1} per term, and only the (1-t) form agrees with the
    coefficient pipeline when some multiplicity is even.
    """
    M = window.M
    total_w = sum(term.w * term.j for term in window.terms)
    pref = (-1) ** (M - 1) * np.exp(TWO_PI * total_w)
    out = []
    for term in window.terms:
        n = term.j - 1
        base = pref * term.a * np.exp(-TWO_PI * term.w) * TWO_PI_I ** n / factorial(n)
        sign = -1 if as_printed else 1
        # (s(1 - t))^n with s = -1 for the printed (t - 1) reading
        for p in range(n + 1):
            coef = comb(n, p) * (-1) ** p * (sign ** n)
            out.append((base * coef, term.w, p))
    return ExpPolynomial(out)


def top_symbol_min(family: SymbolFamily, eps1: float, n: int = 10_000) -> float:
    """min of |m_{M-1}| over [0, 1 - eps1]: grid search, bounded Brent, then
    Gauss-Newton on the exact derivative."""
    if not 0 < eps1 < 0.5:
        raise ValueError("need 0 < eps1 < 1/2")
    top = family.m[-1]
    hi = 1.0 - eps1
    t = np.linspace(0.0, hi, n)
    vals = np.abs(top(t))
    i = int(np.argmin(vals))
    lo_b, hi_b = t[max(i - 1, 0)], t[min(i + 1, n - 1)]
    best = float(vals[i])
    x = float(t[i])
    if hi_b > lo_b:
        res = minimize_scalar(lambda x: abs(top(x)), bounds=(lo_b, hi_b),
                              method="bounded", options={"xatol": 1e-14})
        if float(res.fun) < best:
            best, x = float(res.fun), float(res.x)
    # Gauss-Newton polish: Brent stops at ~sqrt(eps) in t, which leaves a
    # visible residual when |m'| is large near a root
    d = top.deriv()
    for _ in range(50):
        f, fp = complex(top(x)), complex(d(x))
        if fp == 0:
            break
        x_new = min(max(x - (f * fp.conjugate()).real / abs(fp) ** 2, 0.0), hi)
        val = abs(top(x_new))
        if not val < best:
            break
        best, x = float(val), x_new
    scale = float(np.max(vals))
    if best < 1e-6 * max(scale, 1.0):
        log.warning("m_{M-1} nearly vanishes on [0, 1 - eps1]: min %.3e", best)
    return best
