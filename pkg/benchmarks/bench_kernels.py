"""Compare the compiled and pure-Python linear-algebra kernels.

Matrices are the ones the package actually factors: erased segments for the
determinant, and column sections of L_xi for the singular-value extremes.

    python benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import math
import timeit

import numpy as np

from ugabor.framecheck import column_section
from ugabor.numerics import det_lu, get_backend, svd_extremes
from ugabor.segments import build_segments, erase_row
from ugabor.symbols import general_symbol_family
from ugabor.universal import build_universal
from ugabor.windows import validate


def cases():
    w = np.log([2.0, 3.0]) / (2 * math.pi)
    win = validate([{"a": 1, "w": float(w[0])}, {"a": 1, "w": float(w[1])}])
    fam = general_symbol_family(win)
    uset = build_universal(0.5, 2)
    seg = erase_row(build_segments(0.37, uset, fam)[0]).matrix
    out = [("det_lu", f"segment {seg.shape[0]}x{seg.shape[1]}", det_lu, seg)]
    for periods in (4, 8, 16):
        sec = column_section(0.37, uset, fam, periods).matrix
        out.append(("svd_extremes", f"section {sec.shape[0]}x{sec.shape[1]}",
                    svd_extremes, sec))
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    try:
        get_backend("cython")
    except ImportError:
        raise SystemExit("compiled kernels are not built; run pip install -e . first")
    print(f"{'kernel':<14}{'matrix':<18}{'python [ms]':>12}{'cython [ms]':>13}{'speedup':>9}")
    for name, label, fn, mat in cases():
        res, times = {}, {}
        for backend in ("python", "cython"):
            res[backend] = fn(mat, backend=backend)
            n = 1 if backend == "python" else 20
            times[backend] = min(timeit.repeat(lambda: fn(mat, backend=backend),
                                               number=n, repeat=args.repeat)) / n
        a, b = np.atleast_1d(res["python"]), np.atleast_1d(res["cython"])
        assert np.allclose(a, b, rtol=1e-10, atol=1e-14), (name, a, b)
        print(f"{name:<14}{label:<18}{1e3 * times['python']:>12.3f}"
              f"{1e3 * times['cython']:>13.3f}{times['python'] / times['cython']:>8.1f}x")


if __name__ == "__main__":
    main()
