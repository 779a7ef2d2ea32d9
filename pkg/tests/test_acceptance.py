"""One test per acceptance criterion; each prints a PASS/FAIL line."""

import math
import time

import numpy as np
import pytest

from trigspec.bvp import condition_residuals, max_error, solution_coefficients, solve_bvp
from trigspec.config import load_example
from trigspec.eig import EigProblem, check_bounds, eigen_error, eigenvectors, recover_eigenfunction, solve_eig
from trigspec.expr import parse_operator
from trigspec.grid import TrigPolyCoeffs, cardinal_matrix, interpolate, make_random_grid, make_uniform_grid
from trigspec.linalg import eigenvalues, least_squares, lu_solve, singular_values
from trigspec.operators import PLAIN, PRECONDITIONED, diff_matrix, matrix_poly, precond_diff
from trigspec.rank import verify_rank

from oracles import charpoly, match_multisets, poly_roots, sym_eigs_jacobi, trig_poly, trig_poly_derivative
from rank_cases import families

TWO_PI = 2 * math.pi


@pytest.fixture
def verdict(acceptance_report):
    def record(criterion, ok, detail):
        acceptance_report(criterion, ok, detail)
        print(f"[{'PASS' if ok else 'FAIL'}] {criterion}: {detail}")
        assert ok, detail

    return record


def test_ac01_example1_exact(verdict):
    t0 = time.perf_counter()
    cfg = load_example("example1")
    errs = {}
    for N in (5, 7, 9):
        sol = solve_bvp(cfg.build(N))
        errs[N] = max_error(sol, sol.problem.exact_solution)
    dt = time.perf_counter() - t0
    ok = all(e <= 1e-12 for e in errs.values()) and dt < 1.0
    verdict("AC1 example 1 E_max <= 1e-12", ok,
            ", ".join(f"N={N}: {e:.2e}" for N, e in errs.items()) + f"; {dt:.3f} s")


def test_ac02_example2_convergence(verdict):
    t0 = time.perf_counter()
    published = {5: 5.6458e-4, 11: 3.7868e-6, 21: 3.7706e-9}
    cfg = load_example("example2")
    errs = {}
    for N in published:
        sol = solve_bvp(cfg.build(N))
        errs[N] = max_error(sol, sol.problem.exact_solution)
    dt = time.perf_counter() - t0
    within = all(published[N] / 10 <= e <= published[N] * 10 for N, e in errs.items())
    e = list(errs.values())
    ok = within and e[0] > e[1] > e[2] and dt < 1.0
    verdict("AC2 example 2 E_max within 10x and decreasing", ok,
            ", ".join(f"N={N}: {v:.4e}" for N, v in errs.items()) + f"; {dt:.3f} s")


def test_ac03_example3_family(verdict):
    t0 = time.perf_counter()
    sol = solve_bvp(load_example("example3").build())
    res = condition_residuals(sol)
    c = solution_coefficients(sol)
    dt = time.perf_counter() - t0
    A, B = c.cos_coeffs[1], c.cos_coeffs[2]
    others = np.concatenate([[c.constant], np.delete(c.cos_coeffs, [1, 2]), c.sin_coeffs])
    ok = max(res) <= 1e-6 and abs(A + B - 1) <= 1e-6 and np.abs(others).max() < 1e-6 and dt < 1.0
    verdict("AC3 example 3 conditions and A cos4pi x + B cos6pi x", ok,
            f"max condition residual {max(res):.1e}, A={A:.6f}, B={B:.6f}, "
            f"max other coefficient {np.abs(others).max():.1e}; {dt:.3f} s")


def _rank_suite():
    reports = []
    for n in range(2, 9):
        rng = np.random.default_rng(7000 + n)
        for label, spec, expected in families(n):
            grids = [("uniform", make_uniform_grid(2 * n + 1, spec.period))]
            grids += [(f"random[{t}]", make_random_grid(2 * n + 1, spec.period, rng)) for t in range(3)]
            for glabel, g in grids:
                r = verify_rank(spec, g, PLAIN, glabel)
                reports.append((label, expected, r, g, spec))
    return reports


@pytest.fixture(scope="module")
def rank_suite():
    t0 = time.perf_counter()
    reports = _rank_suite()
    return reports, time.perf_counter() - t0


def test_ac04_rank_formula_suite(verdict, rank_suite):
    reports, dt = rank_suite
    bad = [(label, r.summary()) for label, expected, r, _, _ in reports
           if not (r.match and r.predicted_rank == expected)]
    ok = not bad and dt < 30.0
    verdict("AC4 predicted rank = numerical rank", ok,
            f"{len(reports) - len(bad)}/{len(reports)} cases matched; {dt:.2f} s" + (f"; first miss {bad[0]}" if bad else ""))


def test_ac05_kernel_annihilation(verdict, rank_suite):
    reports, _ = rank_suite
    worst, count = 0.0, 0
    for _, _, r, g, spec in reports:
        if r.predicted_rank == 2 * r.degree + 1:
            continue
        P = matrix_poly(spec.alphas, diff_matrix(g))
        norm = np.abs(P).sum(axis=1).max()
        vectors = list(r.kernel_basis.T)
        if r.constant_in_kernel:
            vectors.append(np.ones(g.size))
        for v in vectors:
            v = v / np.abs(v).max()
            worst = max(worst, np.abs(P @ v).max() / norm)
            count += 1
    ok = worst <= 1e-7 and count > 0
    verdict("AC5 kernel vectors annihilated", ok, f"{count} vectors, worst relative residual {worst:.2e}")


def test_ac06_exact_transfer(verdict):
    details = []
    ok = True
    for n in (2, 5, 8):
        for variant in (PLAIN, PRECONDITIONED):
            g = make_random_grid(2 * n + 1, TWO_PI, np.random.default_rng(600 + n))
            prob = EigProblem(g, parse_operator("d^2 + 1"), variant=variant)
            lam = solve_eig(prob).real_eigenvalues
            mult = int(np.sum(np.abs(lam) < 1e-8))
            W = eigenvectors(prob, 0.0)
            x = np.linspace(0, TWO_PI, 101)
            basis = np.column_stack([np.cos(x), np.sin(x)])
            resid = 0.0
            for w in W.T:
                f = recover_eigenfunction(g, w, variant)(x)
                coef, *_ = np.linalg.lstsq(basis, f, rcond=None)
                resid = max(resid, np.abs(basis @ coef - f).max() / np.abs(f).max())
            ok &= mult == 2 and W.shape[1] == 2 and resid < 1e-7
            details.append(f"n={n} {variant}: mult {mult}, residual {resid:.1e}")
    rng = np.random.default_rng(66)
    worst = 0.0
    for _ in range(20):
        n = int(rng.integers(2, 9))
        g = make_random_grid(2 * n + 1, float(rng.uniform(1, 7)), rng)
        a = rng.normal(size=3)
        worst = max(worst, match_multisets(eigenvalues(matrix_poly(a, diff_matrix(g))),
                                           eigenvalues(matrix_poly(a, precond_diff(g)))))
    ok &= worst < 1e-8
    details.append(f"P(D) vs P(Dhat) spectra max gap {worst:.1e}")
    verdict("AC6 exact eigen-transfer and similarity", bool(ok), "; ".join(details))


def test_ac07_example4(verdict):
    t0 = time.perf_counter()
    cfg = load_example("example4")
    results = [solve_eig(cfg.build(N)) for N in (19, 31, 51, 101)]
    errs = [abs(res.real_eigenvalues[0] - math.pi**2) for res in results]
    res19 = results[0]
    dt = time.perf_counter() - t0
    e1, e5 = eigen_error(res19, cfg.build().exact, [1, 5])
    decreasing = all(a > b for a, b in zip(errs, errs[1:]))
    ok = abs(res19.real_eigenvalues[0] - 9.8696) <= 0.05 and abs(res19.real_eigenvalues[4] - 246.740) <= 1.5
    ok = ok and decreasing and dt < 10.0
    verdict("AC7 example 4 eigenvalues", ok,
            f"N=19 lambda_1={res19.real_eigenvalues[0]:.4f} (err {e1:.4f}), lambda_5={res19.real_eigenvalues[4]:.3f} "
            f"(err {e5:.3f}); |lambda_1 - pi^2| along N: " + ", ".join(f"{e:.2e}" for e in errs) + f"; {dt:.2f} s")


def test_ac08_bounds(verdict):
    t0 = time.perf_counter()
    parts = []
    ok = True
    for name in ("example5a", "example5b", "example6"):
        prob = load_example(name).build()
        checks = check_bounds(solve_eig(prob), prob.bounds)
        ok &= all(c.inside for c in checks)
        parts.append(f"{name}: " + ", ".join(f"l{c.index}={c.value:.4f}{'' if c.inside else ' OUT'}" for c in checks))
    dt = time.perf_counter() - t0
    ok = bool(ok) and dt < 10.0
    verdict("AC8 examples 5-6 within published bounds +- 1e-3", ok, "; ".join(parts) + f"; {dt:.2f} s")


def test_ac09_kernel_oracles(verdict):
    rng = np.random.default_rng(909)
    eig_gap = 0.0
    for _ in range(20):
        A = rng.normal(size=(5, 5))
        eig_gap = max(eig_gap, match_multisets(eigenvalues(A), poly_roots(charpoly(A.tolist()))))
    sv_gap = 0.0
    for _ in range(20):
        M = rng.normal(size=(6, 6))
        ref = sorted((math.sqrt(max(v, 0.0)) for v in sym_eigs_jacobi((M.T @ M).tolist())), reverse=True)
        sv_gap = max(sv_gap, np.abs(singular_values(M) - ref).max())
    ls_gap = 0.0
    for _ in range(20):
        N = int(rng.integers(2, 30))
        A = rng.normal(size=(N, N))
        b = rng.normal(size=N)
        x, _, _ = least_squares(A, b)
        y = lu_solve(A, b)
        ls_gap = max(ls_gap, np.abs(x - y).max() / max(1.0, np.abs(y).max()))
    ok = eig_gap < 1e-6 and sv_gap < 1e-8 and ls_gap < 1e-10
    verdict("AC9 kernel-level oracles", ok,
            f"eigenvalues vs charpoly roots {eig_gap:.1e}, singular values vs Jacobi {sv_gap:.1e}, "
            f"least squares vs LU {ls_gap:.1e}")


def test_ac10_interpolation_properties(verdict):
    t0 = time.perf_counter()
    rng = np.random.default_rng(1010)
    worst = dict(identity=0.0, unity=0.0, projection=0.0, derivative=0.0)
    cases = 200
    for _ in range(cases):
        n = int(rng.integers(1, 21))
        N = 2 * n + 1
        L = float(rng.uniform(0.5, 10))
        g = make_random_grid(N, L, rng)
        worst["identity"] = max(worst["identity"], np.abs(cardinal_matrix(g, g.nodes) - np.eye(N)).max())
        x = rng.uniform(-L, 2 * L, 100)
        worst["unity"] = max(worst["unity"], np.abs(cardinal_matrix(g, x).sum(axis=1) - 1).max())
        c = TrigPolyCoeffs(rng.uniform(-1, 1), rng.uniform(-1, 1, n), rng.uniform(-1, 1, n), L)
        f = c(x)
        worst["projection"] = max(worst["projection"],
                                  np.abs(interpolate(g, c(g.nodes))(x) - f).max() / np.abs(f).max())
        dc = trig_poly(*trig_poly_derivative(c.constant, c.cos_coeffs, c.sin_coeffs, L), L)
        want = np.array([dc(xj) for xj in g.nodes])
        worst["derivative"] = max(worst["derivative"], np.abs(diff_matrix(g) @ c(g.nodes) - want).max())
    dt = time.perf_counter() - t0
    limits = dict(identity=1e-12, unity=1e-10, projection=1e-10, derivative=1e-9)
    ok = all(worst[k] < limits[k] for k in limits) and dt < 10.0
    verdict("AC10 interpolation invariants", ok,
            f"{cases} cases each: " + ", ".join(f"{k} {v:.1e}" for k, v in worst.items()) + f"; {dt:.2f} s")
