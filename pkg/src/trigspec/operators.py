"""Matrix representations of differential operators on a grid.

``D`` represents d/dx on trigonometric polynomials of degree ``n``: for
node values of such a polynomial, ``D @ u`` gives the node values of its
derivative exactly. ``X`` represents multiplication by x and
``Dhat = Psi^{-1} D Psi`` is the diagonally rescaled (similar) variant.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import expr as ex
from .errors import SingularMatrixError
from .grid import Grid

PLAIN = "plain"
PRECONDITIONED = "preconditioned"
VARIANTS = (PLAIN, PRECONDITIONED)

_SINGULAR_DIAG = 1e-14


def _check_variant(variant):
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}, got {variant!r}")


def _gap_terms(grid: Grid):
    theta = np.pi * (grid.nodes[:, None] - grid.nodes[None, :]) / grid.period
    s = np.sin(theta)
    np.fill_diagonal(s, 1.0)
    cot = np.cos(theta) / s
    np.fill_diagonal(cot, 0.0)
    diag = (np.pi / grid.period) * cot.sum(axis=1)
    return s, diag


def diff_matrix(grid: Grid) -> np.ndarray:
    """Differentiation matrix ``D``.

    Off the diagonal ``D[m, j] = (psi_m / psi_j) (pi / L) / sin(pi (x_m - x_j) / L)``;
    on it ``D[j, j] = (pi / L) sum_{k != j} cot(pi (x_j - x_k) / L)``.
    """
    s, diag = _gap_terms(grid)
    psi = grid.psi
    D = (psi[:, None] / psi[None, :]) * (np.pi / grid.period) / s
    np.fill_diagonal(D, diag)
    return D


def precond_diff(grid: Grid) -> np.ndarray:
    """``Dhat = Psi^{-1} D Psi``, built entrywise (the psi ratios cancel off the diagonal)."""
    s, diag = _gap_terms(grid)
    Dh = (np.pi / grid.period) / s
    np.fill_diagonal(Dh, diag)
    return Dh


def mult_matrix(grid: Grid) -> np.ndarray:
    """``X = Diag(x_0, ..., x_2n)``."""
    return np.diag(grid.nodes)


def derivative_matrix(grid: Grid, variant: str = PLAIN) -> np.ndarray:
    _check_variant(variant)
    return diff_matrix(grid) if variant == PLAIN else precond_diff(grid)


@dataclass(frozen=True, eq=False)
class OperatorMatrixSet:
    grid: Grid
    D: np.ndarray
    X: np.ndarray
    Dhat: np.ndarray
    psi: np.ndarray


def operator_matrices(grid: Grid) -> OperatorMatrixSet:
    return OperatorMatrixSet(grid, diff_matrix(grid), mult_matrix(grid), precond_diff(grid), grid.psi)


def matrix_poly(alphas, M) -> np.ndarray:
    """``a_0 I + a_1 M + ... + a_s M^s`` by Horner's rule."""
    alphas = [float(a) for a in alphas]
    if not alphas:
        raise ValueError("empty coefficient list")
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {M.shape}")
    eye = np.eye(M.shape[0])
    out = alphas[-1] * eye
    for a in reversed(alphas[:-1]):
        out = out @ M + a * eye
    return out


def _node_values(node, grid):
    """Values of a d-free subtree at the nodes, with inv() factors checked for zeros."""
    for inv_arg in _inv_args(node):
        vals = np.broadcast_to(ex.eval_scalar(inv_arg, grid.nodes), grid.nodes.shape)
        scale = max(1.0, float(np.abs(vals).max()))
        bad = np.flatnonzero(np.abs(vals) <= _SINGULAR_DIAG * scale)
        if bad.size:
            j = int(bad[0])
            raise SingularMatrixError(
                f"inv({ex.to_text(inv_arg)}) is singular at node {j} (x = {grid.nodes[j]!r})"
            )
    try:
        return ex.eval_scalar(node, grid.nodes)
    except ex.ExprDomainError as exc:
        for j, xj in enumerate(grid.nodes):
            try:
                ex.eval_scalar(node, xj)
            except ex.ExprDomainError:
                raise SingularMatrixError(f"{exc} at node {j} (x = {xj!r})") from exc
        raise


def _inv_args(node):
    if isinstance(node, ex.Call):
        found = _inv_args(node.arg)
        return ([node.arg] + found) if node.func == "inv" else found
    if isinstance(node, ex.Neg):
        return _inv_args(node.arg)
    if isinstance(node, ex.Pow):
        return _inv_args(node.base)
    if isinstance(node, ex.BinOp):
        return _inv_args(node.left) + _inv_args(node.right)
    return []


def representation_of(node, grid: Grid, variant: str = PLAIN) -> np.ndarray:
    """Lower an operator tree to its ``N x N`` matrix.

    ``d`` becomes ``D`` (or ``Dhat``), d-free factors become diagonal
    matrices of their node values, products compose, ``A / f`` means
    ``Diag(1/f) A``.
    """
    _check_variant(variant)
    Dm = derivative_matrix(grid, variant)
    return _lower(node, grid, Dm)


def _lower(node, grid, Dm):
    if ex.is_scalar(node):
        return np.diag(_node_values(node, grid))
    if isinstance(node, ex.Deriv):
        return Dm.copy()
    if isinstance(node, ex.Neg):
        return -_lower(node.arg, grid, Dm)
    if isinstance(node, ex.BinOp):
        if node.op == "/":
            if not ex.is_scalar(node.right):
                raise ValueError("division by an operator containing d")
            denom = _node_values(node.right, grid)
            if np.any(denom == 0):
                j = int(np.flatnonzero(denom == 0)[0])
                raise SingularMatrixError(f"division by zero at node {j} (x = {grid.nodes[j]!r})")
            return _lower(node.left, grid, Dm) / denom[:, None]
        a = _lower(node.left, grid, Dm)
        b = _lower(node.right, grid, Dm)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        return a @ b
    if isinstance(node, ex.Pow):
        return np.linalg.matrix_power(_lower(node.base, grid, Dm), int(node.exponent))
    if isinstance(node, ex.Call):
        raise ValueError(f"{node.func}() of an operator containing d is not linear")
    raise TypeError(f"cannot lower {node!r}")
