"""Rows, blocks and segments of the fibred criterion operator L_xi.

For a fixed xi in (0, 1) every lambda produces one row: with
t + lambda = xi + b, t in (0, 1), the row carries m_s(t) in column b + s.

Segments follow the idealised layout used in the determinant argument:
the M+1 cluster rows of a period form the block (columns 0..M-1), and tail
row i (1 <= i <= N1) occupies columns i..i+M-1. Each row keeps its true
(lambda_index, b, t) provenance; the actual operator with true column
offsets is assembled in :mod:`ugabor.framecheck`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from itertools import combinations

import numpy as np

from .errors import (CoalescedPoles, ConfigError, DegenerateXi, DuplicatePole,
                     InvalidBlock, NearDegenerate, StructureViolation)
from .numerics import det_lu, det_lu_extended
from .symbols import SymbolFamily, simple_symbol_family
from .universal import UniversalSet
from .windows import TWO_PI, PoleTerm, SimpleWindow, Window, validate

XI_TOL = 1e-9


@dataclass(frozen=True)
class RowSpec:
    lambda_index: int
    lam: float
    b: int
    t: float

    @property
    def floor(self) -> int:
        return math.floor(self.lam)

    @property
    def frac(self) -> float:
        return self.lam - math.floor(self.lam)


@dataclass(frozen=True)
class Block:
    b: int
    rows: tuple[RowSpec, ...]


@dataclass
class Segment:
    period: int
    xi: float
    block_rows: tuple[RowSpec, ...]
    tail: tuple[RowSpec, ...]
    matrix: np.ndarray
    M: int
    erased_row: int | None = None
    # cluster offsets k/(M+1) of the block rows, as exact fractions
    offsets: tuple = field(default_factory=tuple)

    @property
    def rows(self) -> tuple[RowSpec, ...]:
        return self.block_rows + self.tail

    @property
    def kept_block(self) -> list[int]:
        return [k for k in range(len(self.block_rows)) if k != self.erased_row]

    @property
    def is_square(self) -> bool:
        return self.matrix.shape[0] == self.matrix.shape[1]

    def to_json(self) -> dict:
        kept = set(range(len(self.rows)))
        if self.erased_row is not None:
            kept.discard(self.erased_row)
        return {
            "period": self.period, "xi": self.xi, "M": self.M,
            "erased_row": self.erased_row,
            "rows": [{"lambda_index": r.lambda_index, "lambda": r.lam,
                      "b": r.b, "t": r.t, "kept": i in kept}
                     for i, r in enumerate(self.rows)],
            "matrix": [[[z.real, z.imag] for z in row] for row in self.matrix],
        }


def row_spec(xi: float, lam: float, lambda_index: int = 0,
             tol: float = XI_TOL) -> RowSpec:
    """Solve t + lam = xi + b with t in (0, 1)."""
    if not 0.0 < xi < 1.0:
        raise DegenerateXi(f"xi = {xi} must lie in (0, 1)")
    fl = math.floor(lam)
    frac = lam - fl
    if frac <= xi:
        b, t = fl, xi - frac
    else:
        b, t = fl + 1, xi - frac + 1.0
    if not tol < t < 1.0 - tol:
        raise DegenerateXi(f"xi = {xi} collides with frac(lambda) = {frac}")
    return RowSpec(int(lambda_index), float(lam), int(b), float(t))


def rows_for(xi: float, uset: UniversalSet, start: int, stop: int) -> list[RowSpec]:
    lams = uset.lambdas(start, stop)
    return [row_spec(xi, lam, i) for i, lam in zip(range(start, stop), lams)]


def detect_blocks(rows) -> list[Block]:
    """Maximal runs of >= 2 consecutive rows sharing b, checked against the
    doubling pattern: rows with floor(lambda) = b - 1 and frac > xi come
    first, then rows with floor(lambda) = b and frac <= xi, fractional parts
    increasing within each group.
    """
    rows = list(rows)
    if any(rows[i].lam > rows[i + 1].lam for i in range(len(rows) - 1)):
        raise ValueError("rows must be sorted by lambda")
    blocks = []
    i = 0
    while i < len(rows):
        j = i
        while j + 1 < len(rows) and rows[j + 1].b == rows[i].b:
            j += 1
        group = rows[i:j + 1]
        if len(group) >= 2:
            _check_doubling(group)
            blocks.append(Block(b=group[0].b, rows=tuple(group)))
        i = j + 1
    return blocks


def _check_doubling(group):
    b = group[0].b
    # xi is recoverable from any row: xi = t + lambda - b
    xi = group[0].t + group[0].lam - b
    right = [r for r in group if r.floor == b - 1]
    left = [r for r in group if r.floor == b]
    if len(right) + len(left) != len(group):
        raise StructureViolation(f"rows sharing b={b} have integer parts outside {{b-1, b}}")
    if group[:len(right)] != right:
        raise StructureViolation("rows right of xi must precede rows left of xi")
    if any(r.frac <= xi for r in right) or any(r.frac > xi for r in left):
        raise StructureViolation("fractional parts are on the wrong side of xi")
    for part in (right, left):
        fr = [r.frac for r in part]
        if any(fr[k] >= fr[k + 1] for k in range(len(fr) - 1)):
            raise StructureViolation("fractional parts must increase within a side")


def _check_config(uset: UniversalSet, family: SymbolFamily):
    if uset.N != family.M:
        raise ConfigError(f"set built for N={uset.N} but the symbol family has M={family.M}")
    expected = [k / (uset.N + 1) for k in range(uset.N + 1)]
    if not np.allclose(uset.base_points[: uset.N + 1], expected, atol=1e-15):
        raise ConfigError("set has no cluster k/(N+1) at the start of its period")


def segment_matrix(family: SymbolFamily, block_t, tail_t) -> np.ndarray:
    """Idealised segment matrix: block rows in columns 0..M-1, tail row i in
    columns i..i+M-1 (i = 1..len(tail_t))."""
    M = family.M
    n_tail = len(tail_t)
    vals = family.values(np.concatenate([block_t, tail_t]))
    mat = np.zeros((len(block_t) + n_tail, M + n_tail), dtype=complex)
    mat[: len(block_t), :M] = vals[:, : len(block_t)].T
    for i in range(n_tail):
        mat[len(block_t) + i, i + 1: i + 1 + M] = vals[:, len(block_t) + i]
    return mat


def build_segments(xi: float, uset: UniversalSet, family: SymbolFamily,
                   periods: int = 1, first_period: int = 0) -> list[Segment]:
    """One segment per period: the cluster block plus the N1 tail rows."""
    from fractions import Fraction

    _check_config(uset, family)
    if periods < 1:
        raise ValueError("periods must be >= 1")
    M = family.M
    out = []
    for p in range(first_period, first_period + periods):
        start = p * uset.n_base
        rows = rows_for(xi, uset, start, start + uset.n_base)
        block, tail = tuple(rows[: M + 1]), tuple(rows[M + 1:])
        mat = segment_matrix(family, [r.t for r in block], [r.t for r in tail])
        out.append(Segment(period=p, xi=xi, block_rows=block, tail=tail,
                           matrix=mat, M=M,
                           offsets=tuple(Fraction(k, M + 1) for k in range(M + 1))))
    return out


def cluster_split(xi: float, M: int) -> int:
    """j with xi - j/(M+1) > 0 > xi - (j+1)/(M+1)."""
    j = math.floor(xi * (M + 1))
    if xi - j / (M + 1) <= 0:
        j -= 1
    if not (xi - j / (M + 1) > 0 > xi - (j + 1) / (M + 1)):
        raise DegenerateXi(f"xi = {xi} sits on the cluster grid 1/{M + 1}")
    return j


def erase_row(segment: Segment, xi: float | None = None) -> Segment:
    """Drop one block row so the block becomes M x M.

    j = floor(xi (M+1)). For j != 0 the row k = j (the smallest argument,
    last row of the reordered B_m) goes; for j = 0 the first row of B_m
    goes, i.e. the row k = 1 with argument xi + M/(M+1).
    """
    xi = segment.xi if xi is None else xi
    M = segment.M
    if len(segment.block_rows) != M + 1:
        raise InvalidBlock(f"block has {len(segment.block_rows)} rows, expected {M + 1}")
    if segment.erased_row is not None:
        raise InvalidBlock("a row was already erased from this block")
    j = cluster_split(xi, M)
    k = j if j != 0 else 1
    keep = [i for i in range(segment.matrix.shape[0]) if i != k]
    return replace(segment, matrix=segment.matrix[keep], erased_row=k)


def b_matrix(segment: Segment, family: SymbolFamily):
    """Kept block rows reordered by descending argument.

    Returns (arguments, matrix, sign) with det(block) = sign * det(matrix).
    """
    kept = segment.kept_block
    ts = np.array([segment.block_rows[k].t for k in kept])
    order = np.argsort(-ts, kind="stable")
    perm_sign = _perm_sign(order)
    args = ts[order]
    mat = family.values(args).T
    return args, mat, perm_sign


def _perm_sign(order) -> int:
    order = list(order)
    sign = 1
    seen = [False] * len(order)
    for i in range(len(order)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = order[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def segment_det(segment: Segment, extended: bool = True):
    """(det, block_det, tail_product) of an erased, square segment.

    The idealised segment is block lower-triangular with m_{M-1} on the tail
    diagonal, so det = block_det * tail_product. Segments of higher-order
    poles can be very ill conditioned (kappa near 1e16), so both
    determinants use the extended-precision LU unless ``extended`` is off.
    """
    if not segment.is_square:
        raise InvalidBlock("erase a block row first (segment is not square)")
    M = segment.M
    det_fn = det_lu_extended if extended else det_lu
    det = complex(det_fn(segment.matrix))
    n_block = len(segment.kept_block)
    block = segment.matrix[:n_block, :M]
    block_det = complex(det_fn(block))
    tail_diag = [segment.matrix[n_block + i, i + M] for i in range(len(segment.tail))]
    tail_product = complex(np.prod(tail_diag)) if tail_diag else 1.0 + 0j
    return det, block_det, tail_product


def vandermonde_matrix(window: Window, xi: float, alpha: float,
                       extended: bool = False) -> np.ndarray:
    """B[i, l] = m_l(xi - i/alpha), i, l = 0..N-1.

    With ``extended`` the entries are assembled in numpy clongdouble from the
    (binary64) inputs: u_k, the elementary symmetric coefficients and the
    exponentials are all formed at extended precision.
    """
    if not extended:
        fam = simple_symbol_family(window)
        return fam.values(xi - np.arange(window.N) / alpha).T
    ld, cld = np.longdouble, np.clongdouble
    two_pi = 2 * np.arccos(ld(-1))
    N = window.N
    w = np.array([complex(x) for x in window.w], dtype=cld)
    a = np.array([complex(x) for x in window.a], dtype=cld)
    u = np.exp(two_pi * w)
    A = np.zeros((N, N), dtype=cld)
    for k in range(N):
        coef = np.ones(1, dtype=cld)
        for j in range(N):
            if j != k:
                coef = np.convolve(coef, np.array([1, -u[j]], dtype=cld))
        A[k] = coef
    x = ld(xi) - np.arange(N, dtype=ld) / ld(alpha)
    E = np.exp(two_pi * np.outer(x, w))          # E[i, k]
    return (E * a[None, :]) @ A


def vandermonde_det(window: Window, xi: float, alpha: float,
                    extended: bool = True):
    """(closed-form |det B|, LU det B) for the shifted-argument matrix.

    |det B| = prod_k |a_k e^{2 pi xi w_k}|
              * prod_{k<j} |y_k - y_j| * prod_{k<l} |u_k - u_l|
    with y_k = e^{-2 pi w_k/alpha} and u_k = e^{2 pi w_k}.

    B is ill-conditioned when two poles nearly coincide (its condition
    number grows like the inverse square of the gap), so by default B is
    assembled and factorised in extended precision; ``extended=False`` uses
    binary64 entries and the compiled LU kernel.
    """
    N = window.N
    if not window.is_simple:
        raise ValueError("vandermonde_det needs simple poles")
    if not alpha > N:
        raise ValueError(f"need alpha > N, got alpha={alpha}, N={N}")
    if not xi > (N - 1) / alpha:
        raise ValueError(f"need xi > (N-1)/alpha = {(N - 1) / alpha}")
    w = window.w
    a = window.a
    y = np.exp(-TWO_PI * w / alpha)
    u = np.exp(TWO_PI * w)
    for k, l in combinations(range(N), 2):
        if abs(y[k] - y[l]) <= 1e-12:
            raise NearDegenerate(f"y_{k} and y_{l} coincide")
    formula = float(np.prod(np.abs(a * np.exp(TWO_PI * xi * w))))
    for k, l in combinations(range(N), 2):
        formula *= abs(y[k] - y[l]) * abs(u[k] - u[l])
    if extended:
        direct = complex(det_lu_extended(vandermonde_matrix(window, xi, alpha, True)))
    else:
        direct = det_lu(vandermonde_matrix(window, xi, alpha))
    return formula, direct


def fd_window(window: Window, eps1: float) -> SimpleWindow:
    """Replace each pole of order j by j simple poles at w - i l eps1.

    a/(t - i w)^j = a / ((j-1)! i^{j-1}) d^{j-1}/dw^{j-1} 1/(t - i w), and the
    derivative is taken as a forward difference with complex step -i eps1,
    which gives amplitudes a (-1)^{j-1-l} C(j-1, l) / ((j-1)! eps1^{j-1}).
    """
    if not eps1 > 0:
        raise ValueError("eps1 must be positive")
    terms = []
    for term in window.terms:
        n = term.j - 1
        scale = term.a / (math.factorial(n) * eps1 ** n)
        for l in range(n + 1):
            amp = scale * (-1) ** (n - l) * math.comb(n, l)
            terms.append(PoleTerm(amp, term.w - 1j * l * eps1, 1))
    try:
        out = validate(terms)
    except DuplicatePole as exc:
        raise CoalescedPoles(str(exc)) from exc
    assert isinstance(out, SimpleWindow)
    return out
