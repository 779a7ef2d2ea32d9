"""Boundary-value problems: operator block plus stacked condition rows.

The differential equation becomes ``A u = f`` on the nodes; each boundary
condition appends one row (``e_k`` for a value, row ``k`` of the
differentiation matrix for a derivative). The stacked system is solved in
the least-squares sense, which copes with the rank deficiency of ``A``.

In the preconditioned variant the unknown is ``w = Psi^{-1} u``; the
right-hand side and condition values are carried into those coordinates
and node values are recovered as ``psi_i w_i``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import expr as ex
from . import linalg
from .errors import ConfigError
from .grid import Grid, interpolate, to_coefficients, TrigPolyCoeffs
from .operators import PLAIN, PRECONDITIONED, VARIANTS, derivative_matrix, diff_matrix, representation_of

VALUE = "value"
DERIVATIVE = "derivative"


@dataclass(frozen=True)
class BoundaryCondition:
    kind: str
    location: float
    rhs: float

    def __post_init__(self):
        if self.kind not in (VALUE, DERIVATIVE):
            raise ConfigError(f"unknown condition kind {self.kind!r}", "conditions.kind")


@dataclass(frozen=True)
class PostMap:
    """Node-wise recovery ``u_i = g(x_i) * [psi_i] * v_i + h(x_i)`` after a substitution."""

    g: ex.Node
    h: ex.Node
    psi_weighted: bool = False


@dataclass(frozen=True, eq=False)
class BVProblem:
    grid: Grid
    operator: ex.Node
    rhs: ex.Node
    variant: str = PLAIN
    conditions: tuple = ()
    post_map: PostMap | None = None
    exact_solution: ex.Node | None = None
    interval: tuple | None = None

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ConfigError(f"variant must be one of {VARIANTS}", "operator.variant")
        object.__setattr__(self, "conditions", tuple(self.conditions))
        if self.post_map is not None and self.post_map.psi_weighted != (self.variant == PRECONDITIONED):
            raise ConfigError(
                "psi_weighted must be true exactly when the preconditioned variant is used",
                "post_map.psi_weighted",
            )
        for i, c in enumerate(self.conditions):
            if self.grid.locate(c.location) is None:
                raise ConfigError(f"location {c.location!r} is not a grid node", f"conditions[{i}].location")
        if self.interval is None:
            object.__setattr__(self, "interval", (self.grid.origin, self.grid.origin + self.grid.period))

    @property
    def weights(self) -> np.ndarray:
        """Factors taking solved coordinates to node values of the unknown function."""
        if self.variant == PRECONDITIONED:
            return np.asarray(self.grid.psi)
        return np.ones(self.grid.size)


@dataclass(frozen=True, eq=False)
class NodeSolution:
    values: np.ndarray
    raw: np.ndarray
    residual_norm: float
    stacked_rows: int
    rank: int
    problem: BVProblem = field(repr=False)

    @property
    def deficient(self) -> bool:
        return self.rank < self.raw.size

    @property
    def unknown(self) -> np.ndarray:
        """Node values of the function the operator acts on (before the post map)."""
        return self.raw * self.problem.weights


def assemble(problem: BVProblem):
    """Stacked matrix ``C`` ((N + c) x N) and right-hand side ``b``."""
    grid = problem.grid
    A = representation_of(problem.operator, grid, problem.variant)
    f = np.broadcast_to(ex.eval_scalar(problem.rhs, grid.nodes), (grid.size,)).astype(float)
    w = problem.weights
    Dm = derivative_matrix(grid, problem.variant)
    rows = [A]
    rhs = [f / w]
    for c in problem.conditions:
        k = grid.locate(c.location)
        if c.kind == VALUE:
            row = np.zeros(grid.size)
            row[k] = 1.0
        else:
            row = Dm[k].copy()
        rows.append(row[None, :])
        rhs.append(np.array([c.rhs / w[k]]))
    return np.vstack(rows), np.concatenate(rhs)


def solve_bvp(problem: BVProblem) -> NodeSolution:
    C, b = assemble(problem)
    raw, residual, rank = linalg.least_squares(C, b)
    v = raw * problem.weights
    if problem.post_map is not None:
        x = problem.grid.nodes
        g = ex.eval_scalar(problem.post_map.g, x)
        h = ex.eval_scalar(problem.post_map.h, x)
        values = g * v + h
    else:
        values = v
    return NodeSolution(np.asarray(values, dtype=float), raw, residual, C.shape[0], rank, problem)


def max_error(solution: NodeSolution, exact) -> float:
    """``max_j |u_j - u(x_j)|``; ``exact`` is an expression tree or a callable."""
    x = solution.problem.grid.nodes
    ref = ex.eval_scalar(exact, x) if isinstance(exact, ex.Node) else exact(x)
    return float(np.max(np.abs(solution.values - ref)))


def evaluate(solution: NodeSolution, x):
    """Approximate solution at arbitrary points.

    The unknown is interpolated from its node values; a post map is then
    applied pointwise, so off-node values follow the substituted form.
    """
    prob = solution.problem
    v = interpolate(prob.grid, solution.unknown)(np.asarray(x, dtype=float))
    if prob.post_map is None:
        return v
    return ex.eval_scalar(prob.post_map.g, x) * v + ex.eval_scalar(prob.post_map.h, x)


def dense_sample(solution: NodeSolution, count: int = 1000) -> np.ndarray:
    """``count`` equispaced samples ``(x, u(x))`` across the physical interval."""
    if count < 2:
        raise ValueError("count must be >= 2")
    a, b = solution.problem.interval
    x = np.linspace(a, b, count)
    return np.column_stack([x, evaluate(solution, x)])


def solution_coefficients(solution: NodeSolution) -> TrigPolyCoeffs:
    """Coefficient form of the interpolant of the unknown."""
    return to_coefficients(solution.problem.grid, solution.unknown)


def condition_residuals(solution: NodeSolution) -> list[float]:
    """``|u(x*) - rhs|`` or ``|u'(x*) - rhs|`` per condition, measured on the node values."""
    prob = solution.problem
    u = solution.unknown
    du = diff_matrix(prob.grid) @ u
    out = []
    for c in prob.conditions:
        k = prob.grid.locate(c.location)
        got = u[k] if c.kind == VALUE else du[k]
        out.append(float(abs(got - c.rhs)))
    return out
