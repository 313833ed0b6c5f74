"""Command-line interface: ``fraclayer {ml,layer,solve,verify,figures}``.

Exit codes: 0 success, 1 verification failure, 2 argument error,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from .figures import FIGURE_EPS, FIGURE_N, write_figures
from .layers import classical_conv_layer, conv_layer_correction, conv_layer_correction_general, mu_reac, reac_layer0, reac_layer1_model
from .output import csv_text, fmt
from .solver import ProblemSpec, default_mesh_params, exact_solution, make_mesh, solve_bvp
from .specfun import MLParams, mittag_leffler
from .verify import DEFAULT_EPS, load_tolerances, run_verification

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_USAGE = 2
EXIT_NUMERIC = 3

KIND_ALIASES = {
    "classical": "classical_cd",
    "conv": "convection_diffusion",
    "reac": "reaction_diffusion",
    "stretched-conv": "stretched_layer_conv",
    "stretched-reac": "stretched_layer_reac",
}


class UsageError(Exception):
    pass


def _grid(text: str) -> np.ndarray:
    """``start:stop:count`` (inclusive) or a comma-separated list."""
    try:
        if ":" in text:
            start, stop, count = text.split(":")
            n = int(count)
            if n < 1:
                raise ValueError
            return np.linspace(float(start), float(stop), n)
        return np.array([float(v) for v in text.split(",")])
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad grid {text!r}; use start:stop:count or a,b,c") from None


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 2:
        raise argparse.ArgumentTypeError("need an integer >= 2")
    return v


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    try:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write {out}: {exc.strerror}") from None


def cmd_ml(args) -> int:
    if args.z is None and args.z_grid is None:
        raise UsageError("give --z or --z-grid")
    MLParams(args.a, args.b, 0.0)
    if args.z is not None:
        print(fmt(mittag_leffler(args.a, args.b, args.z)))
        return EXIT_OK
    z = args.z_grid
    values = [mittag_leffler(args.a, args.b, float(v)) for v in z]
    _emit(csv_text(("z", "value"), (z, values)), args.out)
    return EXIT_OK


def cmd_layer(args) -> int:
    x = args.x
    if np.any((x < 0.0) | (x > 1.0)):
        raise UsageError("x values must lie in [0, 1]")
    if not 0.0 < args.eps < 1.0:
        raise UsageError("--eps must lie in (0, 1)")
    if not 0.0 < args.alpha < 1.0 and args.problem != "classical":
        raise UsageError("--alpha must lie in (0, 1)")
    if args.problem == "conv":
        if args.alpha == 0.5:
            values = conv_layer_correction(x, args.eps)
        else:
            values = conv_layer_correction_general(x, args.eps, args.alpha)
    elif args.problem == "reac0":
        values = reac_layer0(x / args.eps ** (1.0 / (2.0 - args.alpha)), args.alpha)
    elif args.problem == "reac1":
        values = reac_layer1_model(x, args.eps, args.alpha, mu_reac(args.eps, args.alpha))
    else:
        values = classical_conv_layer(x, args.eps)
    _emit(csv_text(("x", "value"), (x, values)), args.out)
    return EXIT_OK


def cmd_solve(args) -> int:
    kind = KIND_ALIASES.get(args.kind, args.kind)
    if not args.eps > 0.0:
        raise UsageError("--eps must be positive")
    if kind == "classical_cd":
        p = ProblemSpec.classical(args.eps)
    elif kind == "convection_diffusion":
        p = ProblemSpec.convection(args.alpha, args.eps)
    elif kind == "reaction_diffusion":
        p = ProblemSpec.reaction(args.alpha, args.eps)
    elif kind == "stretched_layer_conv":
        p = ProblemSpec.stretched_conv(args.alpha, args.eps)
    else:
        p = ProblemSpec.stretched_reac(args.alpha, args.eps)
    defaults = default_mesh_params(p)
    mesh_kind = args.mesh or defaults["kind"]
    side = args.side or defaults.get("side", "left")
    mesh = make_mesh(mesh_kind, args.n, r=args.r, side=side, length=p.domain_length, eps=p.eps)
    sol = solve_bvp(p, mesh)
    _emit(csv_text(("x", "u"), (sol.x, sol.values)), args.out)
    parts = [f"kind={p.kind}", f"alpha={p.alpha:g}", f"eps={p.eps:g}", f"mesh={mesh_kind}", f"N={mesh.n}",
             f"residual={sol.residual_norm:.3e}", f"growth={sol.growth:.3e}"]
    exact = exact_solution(p)
    if exact is not None:
        parts.append(f"oracle_error={float(np.max(np.abs(sol.values - exact(sol.x)))):.3e}")
    summary = " ".join(parts) + "\n"
    (sys.stdout if args.out not in (None, "-") else sys.stderr).write(summary)
    return EXIT_OK


def cmd_verify(args) -> int:
    tol = load_tolerances(args.tolerances)
    eps = args.eps if args.eps else list(DEFAULT_EPS)
    if any(not 0.0 < e < 1.0 for e in eps):
        raise UsageError("--eps values must lie in (0, 1)")
    report = run_verification(eps, tol)
    sys.stdout.write(report.table())
    if args.csv:
        _emit(report.csv(), args.csv)
    return EXIT_OK if report.overall else EXIT_VERIFY


def cmd_figures(args) -> int:
    if not 0.0 < args.eps < 1.0:
        raise UsageError("--eps must lie in (0, 1)")
    out = Path(args.out)
    try:
        paths = write_figures(out, args.eps, args.n)
    except OSError as exc:
        raise UsageError(f"cannot write to {out}: {exc.strerror}") from None
    for path in paths:
        print(path)
    print(f"note: qualitative figures at eps={args.eps:g}, n={args.n}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fraclayer", description="Boundary layers of singularly perturbed Caputo BVPs.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ml", help="two-parameter Mittag-Leffler function E_{a,b}(z)")
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--z", type=float)
    group.add_argument("--z-grid", type=_grid, help="start:stop:count or comma list, CSV output; write --z-grid=-4:0:5 for negative starts")
    p.add_argument("--out", help="CSV path for --z-grid (default stdout)")
    p.set_defaults(func=cmd_ml)

    p = sub.add_parser("layer", help="layer functions on a grid in [0, 1]")
    p.add_argument("--problem", choices=("conv", "reac0", "reac1", "classical"), required=True)
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--eps", type=float, default=1e-2)
    p.add_argument("--x", type=_grid, default=_grid("0:1:101"), help="start:stop:count or comma list")
    p.add_argument("--out", help="CSV path (default stdout)")
    p.set_defaults(func=cmd_layer)

    p = sub.add_parser("solve", help="solve a model boundary value problem")
    p.add_argument("--kind", choices=sorted(KIND_ALIASES) + sorted(KIND_ALIASES.values()), required=True)
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--eps", type=float, default=1e-2)
    p.add_argument("--mesh", choices=("uniform", "graded", "shishkin"))
    p.add_argument("--r", type=float, default=2.0, help="grading exponent")
    p.add_argument("--side", choices=("left", "right", "both"))
    p.add_argument("--n", type=_positive_int, default=1024, help="number of intervals")
    p.add_argument("--out", help="CSV path (default stdout; summary then goes to stderr)")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="run the quantitative layer checks")
    p.add_argument("--eps", type=float, nargs="+", help=f"eps values for the scaling checks (default {' '.join(f'{e:g}' for e in DEFAULT_EPS)})")
    p.add_argument("--tolerances", help="JSON object overriding entries of the tolerance table")
    p.add_argument("--csv", help="also write the report as CSV")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("figures", help="write fig1/fig2 CSV and SVG files")
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--eps", type=float, default=FIGURE_EPS)
    p.add_argument("--n", type=_positive_int, default=FIGURE_N)
    p.set_defaults(func=cmd_figures)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (UsageError, ValueError, TypeError) as exc:
        print(f"fraclayer {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ArithmeticError as exc:
        print(f"fraclayer {args.command}: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
