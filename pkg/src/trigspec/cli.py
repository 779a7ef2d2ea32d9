"""Command-line interface: ``trigspec {diffmat,rank,solve,eig,paper}``.

Exit codes: 0 success, 1 a check failed, 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import bvp, config, eig, published
from .errors import ConfigError, TrigspecError
from .expr import ExprSyntaxError
from .grid import make_interval_grid, make_random_grid, make_uniform_grid
from .operators import PLAIN, VARIANTS, diff_matrix, precond_diff
from .published import fmt, write_csv
from .rank import RankSpec, verify_rank
from .svg import line_plot

SEED_ENV = "TRIGSPEC_SEED"


class UsageError(Exception):
    pass


def _const(text, name):
    try:
        return config.constant(text, name)
    except ConfigError as exc:
        raise UsageError(str(exc)) from None


def _write_matrix(fh, M, comments):
    for line in comments:
        fh.write(f"# {line}\n")
    w = csv.writer(fh, lineterminator="\n")
    for row in M:
        w.writerow([fmt(v) for v in row])


def cmd_diffmat(args):
    if args.N < 3 or args.N % 2 == 0:
        raise UsageError(f"--N must be an odd integer >= 3, got {args.N}")
    L = _const(args.L, "--L")
    if args.placement == "uniform":
        anchor = None if args.anchor is None else _const(args.anchor, "--anchor")
        grid = make_uniform_grid(args.N, L, anchor=anchor)
    else:
        if args.interval is None:
            raise UsageError(f"--placement {args.placement} needs --interval A B")
        a, b = (_const(v, "--interval") for v in args.interval)
        grid = make_interval_grid(args.N, a, b, L, args.placement)
    comments = [
        f"N = {grid.size}, period = {fmt(grid.period)}",
        "nodes: " + ", ".join(fmt(x) for x in grid.nodes),
    ]
    targets = [(args.out, diff_matrix(grid), "D")]
    if args.hat_out is not None:
        targets.append((args.hat_out, precond_diff(grid), "Dhat = Psi^-1 D Psi"))
    for path, M, label in targets:
        lines = comments + [f"matrix: {label}"]
        if path is None or path == "-":
            _write_matrix(sys.stdout, M, lines)
        else:
            with open(path, "w", newline="") as fh:
                _write_matrix(fh, M, lines)
    return 0


def default_seed():
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{SEED_ENV} must be an integer, got {raw!r}") from None


def cmd_rank(args):
    try:
        alphas = [_const(a.strip(), "--alphas") for a in args.alphas.split(",")]
        spec = RankSpec(tuple(alphas), _const(args.L, "--L"), args.n)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    seed = default_seed() if args.seed is None else args.seed
    rng = np.random.default_rng(seed)
    N = 2 * args.n + 1
    grids = [("uniform", make_uniform_grid(N, spec.period))]
    grids += [(f"random[{t}]", make_random_grid(N, spec.period, rng)) for t in range(args.trials)]
    reports = [verify_rank(spec, g, args.variant, label) for label, g in grids]
    ok = all(r.match and r.kernel_ok for r in reports)
    out = {"seed": seed, "all_match": ok, "reports": [r.to_dict(include_basis=args.basis) for r in reports]}
    print(json.dumps(out, indent=2))
    for r in reports:
        print(r.summary(), file=sys.stderr)
    return 0 if ok else 1


def _load_config(spec, mode):
    path = Path(spec)
    if not path.exists() and spec in config.EXAMPLES:
        cfg = config.load_example(spec)
    else:
        cfg = config.load(path)
    if cfg.mode != mode:
        raise ConfigError(f"this command needs mode = {mode!r}", "mode")
    return cfg


def cmd_solve(args):
    cfg = _load_config(args.config, "bvp")
    problem = cfg.build(args.N)
    sol = bvp.solve_bvp(problem)
    grid = problem.grid
    exact = problem.exact_solution
    ref = None if exact is None else np.broadcast_to(config.ex.eval_scalar(exact, grid.nodes), (grid.size,))
    if args.nodes_csv:
        header = ["j", "x_j", "u_j"] + (["exact_j", "abs_err"] if ref is not None else [])
        rows = []
        for j in range(grid.size):
            row = [j, grid.nodes[j], sol.values[j]]
            if ref is not None:
                row += [ref[j], abs(sol.values[j] - ref[j])]
            rows.append(row)
        write_csv(args.nodes_csv, header, rows)
    pts = None
    if args.dense_csv or args.svg:
        pts = bvp.dense_sample(sol, args.samples)
    if args.dense_csv:
        write_csv(args.dense_csv, ["x", "u"], pts.tolist())
    if args.svg:
        title = cfg.name or Path(args.config).stem
        Path(args.svg).write_text(line_plot(pts[:, 0], pts[:, 1], title=f"{title} (N = {grid.size})"))
    print(f"N = {grid.size}  stacked rows = {sol.stacked_rows}  rank = {sol.rank}  residual = {sol.residual_norm:.3e}")
    if ref is not None:
        print(f"E_max = {np.max(np.abs(sol.values - ref)):.6e}")
    return 0


def _short(v):
    if isinstance(v, float):
        return f"{v:.10g}"
    return fmt(v)


def cmd_eig(args):
    cfg = _load_config(args.config, "eig")
    problem = cfg.build(args.N)
    res = eig.solve_eig(problem)
    lam = res.real_eigenvalues
    checks = {} if problem.bounds is None else {c.index: c for c in eig.check_bounds(res, problem.bounds)}
    if cfg.reference is not None and cfg.reference.indices:
        indices = list(cfg.reference.indices)
    elif checks:
        indices = sorted(checks)
    else:
        indices = list(range(1, min(10, lam.size) + 1))
    header = ["i", "lambda_i"]
    if problem.exact is not None:
        header.append("exact_i")
    if checks:
        header += ["lower", "upper", "in_bounds"]
    rows = []
    for i in indices:
        row = [i, lam[i - 1] if i <= lam.size else float("nan")]
        if problem.exact is not None:
            row.append(float(eig.exact_values(problem.exact, [i])[0]))
        if checks:
            c = checks.get(i)
            row += [c.lower, c.upper, c.inside] if c else [None, None, None]
        rows.append(row)
    if args.csv:
        write_csv(args.csv, header, rows)
    if args.json:
        doc = {
            "N": problem.grid.size,
            "discarded_count": res.discarded_count,
            "real_eigenvalues": [float(v) for v in lam],
            "rows": [dict(zip(header, r)) for r in rows],
        }
        Path(args.json).write_text(json.dumps(doc, indent=2) + "\n")
    print(f"N = {problem.grid.size}  real eigenvalues = {lam.size}  discarded (complex) = {res.discarded_count}")
    print("  ".join(f"{h:>12}" for h in header))
    for r in rows:
        print("  ".join(f"{_short(v):>12}" for v in r))
    failed = [c for c in checks.values() if not c.inside]
    for c in failed:
        print(f"out of bounds: lambda_{c.index} = {c.value:.6g} not in [{c.lower}, {c.upper}]", file=sys.stderr)
    return 1 if failed else 0


def cmd_paper(args):
    manifest = published.run(args.out)
    for item in manifest["artifacts"]:
        print(f"{item['item']:>9}: {Path(args.out) / item['file']}")
    return 0


def build_parser():
    p = argparse.ArgumentParser(prog="trigspec", description="Trigonometric-interpolation collocation toolkit.")
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("diffmat", help="write the differentiation matrix as CSV")
    d.add_argument("--N", type=int, required=True, help="odd node count")
    d.add_argument("--L", default="2*pi", help="period (number or constant expression)")
    d.add_argument("--placement", default="uniform", choices=["uniform", "endpoints", "interior", "midpoint"])
    d.add_argument("--anchor", help="move the nearest uniform node onto this point")
    d.add_argument("--interval", nargs=2, metavar=("A", "B"), help="physical interval for non-uniform placements")
    d.add_argument("--out", help="output path for D (default stdout)")
    d.add_argument("--hat-out", help="also write Dhat = Psi^-1 D Psi to this path")
    d.set_defaults(func=cmd_diffmat)

    r = sub.add_parser("rank", help="predict and measure rank P(D) for constant coefficients")
    r.add_argument("--alphas", required=True, help="comma-separated a_0,...,a_s")
    r.add_argument("--L", default="2*pi")
    r.add_argument("--n", type=int, required=True, help="degree n (N = 2n + 1)")
    r.add_argument("--trials", type=int, default=3, help="number of seeded random grids")
    r.add_argument("--seed", type=int, default=None, help=f"RNG seed (default ${SEED_ENV} or 0)")
    r.add_argument("--variant", default=PLAIN, choices=VARIANTS)
    r.add_argument("--basis", action="store_true", help="include kernel basis vectors in the JSON")
    r.set_defaults(func=cmd_rank)

    s = sub.add_parser("solve", help="solve a boundary-value problem config")
    s.add_argument("config", help="config path or bundled example name")
    s.add_argument("--N", type=int, help="override the node count")
    s.add_argument("--nodes-csv", help="write node values (j, x_j, u_j, exact_j, abs_err)")
    s.add_argument("--dense-csv", help="write dense samples (x, u)")
    s.add_argument("--svg", help="write an SVG plot of the dense samples")
    s.add_argument("--samples", type=int, default=1000)
    s.set_defaults(func=cmd_solve)

    e = sub.add_parser("eig", help="solve an eigenvalue problem config")
    e.add_argument("config", help="config path or bundled example name")
    e.add_argument("--N", type=int, help="override the node count")
    e.add_argument("--csv", help="write the spectrum table as CSV")
    e.add_argument("--json", help="write the spectrum as JSON")
    e.set_defaults(func=cmd_eig)

    pp = sub.add_parser("paper", help="regenerate all published tables and Figure 1")
    pp.add_argument("--out", default="published_out", help="output directory")
    pp.set_defaults(func=cmd_paper)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.exit(2, f"trigspec {args.command}: error: {exc}\n")
    except (ConfigError, ExprSyntaxError) as exc:
        print(f"trigspec {args.command}: config error: {exc}", file=sys.stderr)
        return 2
    except TrigspecError as exc:
        print(f"trigspec {args.command}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
