"""Command-line entry point: ``ugabor <subcommand> [options]``.

Every run writes its result (JSON, or CSV for ``frame-estimate``) to
``--out`` (``-`` for stdout) and exactly one run manifest to ``--manifest``,
else ``<out>.manifest.json``, else stderr. Exit codes: 0 success, 1 failed
verification, 2 invalid input.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .errors import GaborLabError, NoConvergence, ToleranceNotMet

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, default=_jsonable) + "\n"


def _jsonable(x):
    if isinstance(x, (np.floating, np.integer, np.bool_)):
        return x.item()
    if isinstance(x, (complex, np.complexfloating)):
        return [float(x.real), float(x.imag)]
    if isinstance(x, np.ndarray):
        return x.tolist()
    raise TypeError(f"not serialisable: {type(x).__name__}")


def _write(dest: str, text: str, outputs: list):
    if dest == "-":
        sys.stdout.write(text)
    else:
        Path(dest).write_text(text)
    outputs.append(dest)


def _window(args):
    from .windows import load_window
    return load_window(args.spec)


# --- subcommands: each returns (payload_text, ok) -------------------------

def cmd_lambda_build(args, outputs):
    from .universal import build_universal
    uset = build_universal(args.eps, args.N, delta=args.delta, eps1=args.eps1)
    return _dump(uset.to_json()), True


def cmd_window_check(args, outputs):
    from .windows import class_test
    win = _window(args)
    rep = class_test(win, T_max=args.T_max, steps=args.steps)
    doc = {"window": win.to_json(), "member": rep.member, "witness": rep.witness,
           "min_modulus": rep.min_modulus, "min_relative": rep.min_relative,
           "tail_certified": rep.tail_certified}
    return _dump(doc), rep.member


def cmd_symbols_table(args, outputs):
    from .symbols import general_symbol_family, top_symbol_closed_form
    win = _window(args)
    fam = general_symbol_family(win)
    t = np.linspace(0.0, 1.0, args.points)
    vals = fam.values(t)
    closed = top_symbol_closed_form(win)(t)
    err = float(np.max(np.abs(closed - vals[-1])) / np.max(np.abs(vals[-1])))
    doc = {"M": fam.M, "symbols": fam.to_json()["m"], "t": t,
           "values": [[[z.real, z.imag] for z in row] for row in vals],
           "max_modulus": fam.max_modulus(), "closed_form_rel_error": err}
    return _dump(doc), err < 1e-10


def cmd_det_verify(args, outputs):
    from .verify import factorization_sweep, vandermonde_sweep
    reports = []
    if args.segments:
        reports.append(_verify_dump(args.segments, args.tol))
    if args.spec:
        win = _window(args)
        reports.append(factorization_sweep(win, args.eps, args.xi_steps,
                                           tol=args.tol).to_json())
        if args.dump_segments:
            _dump_segments(win, args, outputs)
    if not reports or args.N:
        Ns = args.N or [1, 2, 3, 4]
        for N in Ns:
            reports.append(vandermonde_sweep(N, args.trials, args.seed, args.tol).to_json())
    ok = all(r["ok"] for r in reports)
    return _dump({"reports": reports, "ok": ok}), ok


def _dump_segments(win, args, outputs):
    from .framecheck import xi_grid
    from .segments import build_segments, erase_row
    from .symbols import general_symbol_family
    from .universal import build_universal
    fam = general_symbol_family(win)
    uset = build_universal(args.eps, fam.M)
    segs = [erase_row(s).to_json()
            for xi in xi_grid(uset, args.xi_steps)
            for s in build_segments(float(xi), uset, fam)]
    _write(args.dump_segments, _dump({"segments": segs}), outputs)


def _verify_dump(path, tol):
    """Recompute det, block det and tail product of dumped (erased) segments."""
    from .numerics import det_lu
    doc = json.loads(Path(path).read_text())
    err_max, worst = 0.0, {}
    for seg in doc["segments"]:
        mat = np.array([[complex(*z) for z in row] for row in seg["matrix"]])
        M = seg["M"]
        n_block = M
        det = det_lu(mat)
        tail = np.prod([mat[n_block + i, i + M] for i in range(mat.shape[0] - n_block)])
        err = abs(det - det_lu(mat[:n_block, :M]) * tail) / abs(det)
        if err >= err_max:
            err_max, worst = err, {"xi": seg["xi"], "period": seg["period"]}
    return {"name": f"segments {path}", "trials": len(doc["segments"]),
            "max_error": float(err_max), "tol": tol, "ok": err_max < tol,
            "worst": worst}


def cmd_trick_verify(args, outputs):
    from .verify import trick_sweep
    reports = [trick_sweep(k, args.trials, args.seed, args.tol).to_json() for k in args.k]
    ok = all(r["ok"] for r in reports)
    return _dump({"reports": reports, "ok": ok}), ok


def _set_for(args, M):
    from .universal import build_universal, periodic_set
    if args.set:
        doc = json.loads(Path(args.set).read_text())
        return periodic_set(doc["base_points"], doc["period"], doc.get("N", M))
    return build_universal(args.eps, args.N or M)


def cmd_frame_estimate(args, outputs):
    from .framecheck import frame_bounds_estimate
    win = _window(args)
    uset = _set_for(args, win.M)
    est = frame_bounds_estimate(win, uset, args.xi_steps, args.periods, args.eta)
    if args.summary:
        _write(args.summary, _dump(est.summary()), outputs)
    return est.to_csv(), True


def cmd_frame_oracle(args, outputs):
    from .framecheck import frame_bounds_estimate, gabor_sum_oracle, l2_norm2
    win = _window(args)
    uset = _set_for(args, win.M)
    width = args.width
    support = (-6.0 * width, 6.0 * width)

    def bump(t):
        return np.exp(-(np.asarray(t) / width) ** 2)

    total = gabor_sum_oracle(bump, win, uset, T=args.T, n_shift=args.n_shift,
                             support=support)
    norm2 = l2_norm2(bump, support)
    est = frame_bounds_estimate(win, uset, args.xi_steps, args.periods)
    ratio = total / norm2
    lo, hi = 0.5 * est.A_est, 2.0 * est.B_est
    ok = lo <= ratio <= hi
    doc = {"gabor_sum": total, "norm2": norm2, "ratio": ratio,
           "A_est": est.A_est, "B_est": est.B_est, "band": [lo, hi], "ok": ok}
    return _dump(doc), ok


def cmd_fd_verify(args, outputs):
    from .verify import fd_convergence
    rep = fd_convergence(_window(args), tuple(args.eps1))
    return _dump(rep.to_json()), rep.ok


COMMANDS = {
    "lambda-build": cmd_lambda_build,
    "window-check": cmd_window_check,
    "symbols-table": cmd_symbols_table,
    "det-verify": cmd_det_verify,
    "trick-verify": cmd_trick_verify,
    "frame-estimate": cmd_frame_estimate,
    "frame-oracle": cmd_frame_oracle,
    "fd-verify": cmd_fd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ugabor", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def add(name, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--out", default="-", help="result file, '-' for stdout")
        sp.add_argument("--manifest", help="manifest path (default <out>.manifest.json)")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("-v", "--verbose", action="store_true")
        return sp

    sp = add("lambda-build", "construct the periodic set Lambda(eps, N)")
    sp.add_argument("--eps", type=float, required=True)
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--delta", type=float)
    sp.add_argument("--eps1", type=float)

    sp = add("window-check", "validate a window and test class membership")
    sp.add_argument("--spec", required=True)
    sp.add_argument("--T-max", dest="T_max", type=float, default=50.0)
    sp.add_argument("--steps", type=int, default=20_000)

    sp = add("symbols-table", "symbol family of a window, tabulated on [0, 1]")
    sp.add_argument("--spec", required=True)
    sp.add_argument("--points", type=int, default=101)

    sp = add("det-verify", "determinant identities (Vandermonde and segments)")
    sp.add_argument("--N", type=int, action="append")
    sp.add_argument("--trials", type=int, default=200)
    sp.add_argument("--tol", type=float, default=1e-9)
    sp.add_argument("--spec")
    sp.add_argument("--eps", type=float, default=0.5)
    sp.add_argument("--xi-steps", dest="xi_steps", type=int, default=64)
    sp.add_argument("--segments", help="verify a segment dump")
    sp.add_argument("--dump-segments", dest="dump_segments")

    sp = add("trick-verify", "derivative expansion identity on random data")
    sp.add_argument("--k", type=int, nargs="+", default=[1, 2, 3, 4, 5, 6])
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--tol", type=float, default=1e-8)

    for name, help_ in (("frame-estimate", "finite-section frame bound estimates (CSV)"),
                        ("frame-oracle", "Gabor-sum oracle for a Gaussian bump")):
        sp = add(name, help_)
        sp.add_argument("--spec", required=True)
        sp.add_argument("--eps", type=float, default=0.5)
        sp.add_argument("--N", type=int, help="set parameter (default: window M)")
        sp.add_argument("--set", help="periodic set JSON with base_points, period")
        sp.add_argument("--xi-steps", dest="xi_steps", type=int, default=64)
        sp.add_argument("--periods", type=int, default=8)
        if name == "frame-estimate":
            sp.add_argument("--eta", type=float, default=1e-3)
            sp.add_argument("--summary", help="summary JSON path")
        else:
            sp.add_argument("--T", type=float, default=8.0)
            sp.add_argument("--n-shift", dest="n_shift", type=int, default=200)
            sp.add_argument("--width", type=float, default=1.0)

    sp = add("fd-verify", "convergence of the simple-pole approximation")
    sp.add_argument("--spec", required=True)
    sp.add_argument("--eps1", type=float, nargs="+", default=[1e-2, 5e-3, 2.5e-3])
    return p


def _manifest_dest(args):
    if getattr(args, "manifest", None):
        return args.manifest
    out = getattr(args, "out", "-")
    return None if out == "-" else out + ".manifest.json"


def run(argv=None) -> int:
    t0 = time.perf_counter()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"ugabor: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_INPUT
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")

    outputs: list = []
    params = {k: v for k, v in vars(args).items()
              if k not in ("command", "out", "manifest", "seed", "verbose")}
    status = "ok"
    try:
        text, ok = COMMANDS[args.command](args, outputs)
        _write(args.out, text, outputs)
        code = EXIT_OK if ok else EXIT_FAIL
        status = "ok" if ok else "verification-failed"
    except (NoConvergence, ToleranceNotMet) as exc:
        print(f"ugabor: {type(exc).__name__}: {exc}", file=sys.stderr)
        code, status = EXIT_FAIL, type(exc).__name__
    except (GaborLabError, ValueError, KeyError, TypeError, OSError) as exc:
        print(f"ugabor: {type(exc).__name__}: {exc}", file=sys.stderr)
        code, status = EXIT_INPUT, type(exc).__name__

    manifest = {
        "command": args.command, "parameters": params, "seed": args.seed,
        "version": __version__, "outputs": outputs, "status": status,
        "exit_code": code, "wall_time": time.perf_counter() - t0,
        "timestamp": datetime.now(timezone.utc).isoformat(),
    }
    dest = _manifest_dest(args)
    if dest is None:
        sys.stderr.write(_dump(manifest))
    else:
        try:
            Path(dest).write_text(_dump(manifest))
        except OSError as exc:
            print(f"ugabor: cannot write manifest: {exc}", file=sys.stderr)
            sys.stderr.write(_dump(manifest))
    return code


def main() -> None:
    sys.exit(run())
