"""Matrix eigenvalue problems from operator expressions."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from . import expr as ex
from . import linalg
from .grid import Grid, TrigInterpolant, interpolate
from .operators import PLAIN, PRECONDITIONED, VARIANTS, representation_of

BOUNDS_SLACK = 1e-3


@dataclass(frozen=True)
class BoundsTable:
    """Published lower/upper bounds for selected eigenvalues; indices are 1-based."""

    name: str
    rows: tuple

    def __post_init__(self):
        rows = tuple((int(i), float(lo), float(hi)) for i, lo, hi in self.rows)
        for i, lo, hi in rows:
            if lo > hi:
                raise ValueError(f"{self.name}: lower bound exceeds upper bound for index {i}")
        object.__setattr__(self, "rows", rows)


def load_published_tables() -> dict:
    text = resources.files("trigspec").joinpath("data/published_tables.json").read_text()
    return json.loads(text)


def load_bounds(table_id: str) -> BoundsTable:
    tables = load_published_tables()
    try:
        entry = tables[table_id]
    except KeyError:
        raise KeyError(f"unknown bounds table {table_id!r}") from None
    return BoundsTable(table_id, [(r["index"], r["lower"], r["upper"]) for r in entry["rows"]])


@dataclass(frozen=True, eq=False)
class EigProblem:
    grid: Grid
    A_expr: ex.Node
    B_expr: ex.Node | None = None
    variant: str = PRECONDITIONED
    imag_tol: float = 1e-6
    exact: ex.Node | None = None
    bounds: BoundsTable | None = None

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"variant must be one of {VARIANTS}, got {self.variant!r}")

    def matrices(self):
        A = representation_of(self.A_expr, self.grid, self.variant)
        B = None if self.B_expr is None else representation_of(self.B_expr, self.grid, self.variant)
        return A, B


@dataclass(frozen=True, eq=False)
class EigResult:
    real_eigenvalues: np.ndarray
    discarded_count: int
    spectrum_raw: np.ndarray = field(repr=False)


def real_part_filter(spectrum, imag_tol: float = 1e-6) -> EigResult:
    """Keep eigenvalues with ``|Im| <= imag_tol * max|lambda|``, sorted ascending."""
    spectrum = np.asarray(spectrum, dtype=complex)
    scale = float(np.abs(spectrum).max()) if spectrum.size else 0.0
    keep = np.abs(spectrum.imag) <= imag_tol * scale
    real = np.sort(spectrum[keep].real)
    return EigResult(real, int(spectrum.size - keep.sum()), spectrum)


def solve_eig(problem: EigProblem) -> EigResult:
    A, B = problem.matrices()
    if B is None:
        spectrum = linalg.eigenvalues(A)
    else:
        spectrum = linalg.generalized_eigenvalues(A, B)
    return real_part_filter(spectrum, problem.imag_tol)


def eigenvectors(problem: EigProblem, value: float, rtol: float = 1e-8) -> np.ndarray:
    """Orthonormal basis (columns) of the numerical null space of ``A - value B``."""
    A, B = problem.matrices()
    if B is None:
        B = np.eye(A.shape[0])
    M = A - value * B
    sigma = linalg.singular_values(M)
    return linalg.kernel_vectors(M, tol=rtol * max(sigma[0], 1.0))


def recover_eigenfunction(grid: Grid, w, variant: str = PLAIN) -> TrigInterpolant:
    """Eigenfunction from a matrix eigenvector: ``sum w_i t_i``, or ``sum psi_i w_i t_i`` for Dhat."""
    w = np.asarray(w, dtype=float)
    if w.shape != (grid.size,):
        raise ValueError(f"expected {grid.size} components, got shape {w.shape}")
    if variant == PRECONDITIONED:
        w = w * grid.psi
    elif variant != PLAIN:
        raise ValueError(f"unknown variant {variant!r}")
    return interpolate(grid, w)


@dataclass(frozen=True)
class BoundsCheck:
    index: int
    value: float
    lower: float
    upper: float
    inside: bool


def check_bounds(result: EigResult, table: BoundsTable, slack: float = BOUNDS_SLACK) -> list[BoundsCheck]:
    out = []
    lam = result.real_eigenvalues
    for i, lo, hi in table.rows:
        value = float(lam[i - 1]) if 1 <= i <= lam.size else float("nan")
        inside = bool(lo - slack <= value <= hi + slack)
        out.append(BoundsCheck(i, value, lo, hi, inside))
    return out


def exact_values(exact, indices) -> np.ndarray:
    idx = np.asarray(indices, dtype=float)
    if isinstance(exact, ex.Node):
        return np.broadcast_to(ex.eval_scalar(exact, idx), idx.shape).astype(float)
    return np.asarray([exact(int(i)) for i in indices], dtype=float)


def eigen_error(result: EigResult, exact, indices) -> np.ndarray:
    """``|lambda_i - exact(i)|`` for 1-based ``indices``."""
    lam = np.array([result.real_eigenvalues[i - 1] for i in indices])
    return np.abs(lam - exact_values(exact, indices))
