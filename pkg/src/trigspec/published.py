"""Regenerate the published tables and the Example 3 figure."""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from . import bvp, eig
from .config import load_example
from .eig import load_published_tables
from .svg import line_plot


def fmt(v) -> str:
    """17 significant digits, so outputs diff exactly."""
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, str):
        return v
    return f"{float(v):.17g}"


def write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(v) for v in row])


def table1():
    ref = load_published_tables()["table1"]
    cfg = load_example("example1")
    rows = []
    for i, N in enumerate(ref["N"]):
        sol = bvp.solve_bvp(cfg.build(N))
        rows.append([N, bvp.max_error(sol, sol.problem.exact_solution), ref["methods"]["trigonometric"][i],
                     ref["methods"]["lagrangian"][i], ref["methods"]["shooting"][i]])
    header = ["N", "E_max", "published_trigonometric", "published_lagrangian", "published_shooting"]
    return header, rows


def table2():
    ref = load_published_tables()["table2"]
    cfg = load_example("example2")
    rows = []
    for N, ref_err in zip(ref["N"], ref["E_max"]):
        sol = bvp.solve_bvp(cfg.build(N))
        rows.append([N, bvp.max_error(sol, sol.problem.exact_solution), ref_err])
    return ["N", "E_max", "published_E_max"], rows


TABLE3_N = (19, 31, 51, 101)


def table3():
    ref = load_published_tables()["table3"]
    idx = ref["indices"]
    cfg = load_example("example4")
    rows = []
    for N in TABLE3_N:
        prob = cfg.build(N)
        res = eig.solve_eig(prob)
        lam = [res.real_eigenvalues[i - 1] if i <= res.real_eigenvalues.size else None for i in idx]
        rows.append([N] + lam + [abs(res.real_eigenvalues[0] - np.pi**2)])
    exact = eig.exact_values(cfg.build().exact, idx)
    rows.append(["exact"] + list(exact) + [0.0])
    header = ["N"] + [f"lambda_{i}" for i in idx] + ["abs_err_lambda_1"]
    return header, rows


def bounds_table(example, table_id):
    ref = load_published_tables()[table_id]
    prob = load_example(example).build()
    res = eig.solve_eig(prob)
    checks = eig.check_bounds(res, prob.bounds)
    rows = [[c.index, c.value, r["approx"], c.lower, c.upper, c.inside] for c, r in zip(checks, ref["rows"])]
    return ["index", "lambda", "published_approx", "lower", "upper", "in_bounds"], rows


def figure1(samples=1000):
    sol = bvp.solve_bvp(load_example("example3").build())
    pts = bvp.dense_sample(sol, samples)
    return line_plot(pts[:, 0], pts[:, 1], title="Approximate solution, example 3 (N = 11)", xlabel="x",
                     ylabel="u_approx(x)")


ARTIFACTS = [
    ("table1.csv", "Table 1", "E_max for u''+u=0 (trigonometric rows computed; other methods as published)"),
    ("table2.csv", "Table 2", "E_max for u''+u'+u=0 with substitution"),
    ("table3.csv", "Table 3", "eigenvalues of -y''=lambda y after substitution"),
    ("table4.csv", "Table 4", "genetics problem, alpha=1, x0=0.6, against published bounds"),
    ("table5.csv", "Table 5", "genetics problem, alpha=2, x0=0.4, against published bounds"),
    ("table6.csv", "Table 6", "u''+lambda(1+sin x)u=0 against published bounds"),
    ("fig1.svg", "Figure 1", "approximate solution of the fourth-order problem"),
]


def run(out_dir) -> dict:
    """Write every artifact plus ``manifest.json`` into ``out_dir``; returns the manifest."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    producers = {
        "table1.csv": table1,
        "table2.csv": table2,
        "table3.csv": table3,
        "table4.csv": lambda: bounds_table("example5a", "table4"),
        "table5.csv": lambda: bounds_table("example5b", "table5"),
        "table6.csv": lambda: bounds_table("example6", "table6"),
    }
    for name, producer in producers.items():
        header, rows = producer()
        write_csv(out / name, header, rows)
    (out / "fig1.svg").write_text(figure1())
    manifest = {"artifacts": [{"file": f, "item": item, "content": what} for f, item, what in ARTIFACTS]}
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
    return manifest
