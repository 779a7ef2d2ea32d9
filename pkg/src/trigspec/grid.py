"""Partitions of a period and trigonometric interpolation on them.

A :class:`Grid` holds ``N = 2n + 1`` distinct nodes inside one period
``[origin, origin + L)``. Interpolation uses the cardinal functions

    t_j(x) = prod_{k != j} sin(pi (x - x_k) / L) / psi_j,
    psi_j  = prod_{k != j} sin(pi (x_j - x_k) / L),

which satisfy ``t_j(x_k) = delta_jk`` and span the trigonometric
polynomials of degree ``n`` and period ``L``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import GridError
from . import linalg


@dataclass(frozen=True, eq=False)
class Grid:
    """Odd-sized partition of ``[origin, origin + period)``."""

    period: float
    nodes: np.ndarray
    origin: float = 0.0

    def __post_init__(self):
        nodes = np.array(self.nodes, dtype=float)
        nodes.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "period", float(self.period))
        object.__setattr__(self, "origin", float(self.origin))
        if not np.isfinite(self.period) or self.period <= 0:
            raise GridError(f"period must be positive, got {self.period}")
        if nodes.ndim != 1 or nodes.size < 3 or nodes.size % 2 == 0:
            raise GridError(f"node count must be odd and >= 3, got {nodes.size}")
        if not np.all(np.isfinite(nodes)):
            raise GridError("nodes must be finite")
        if np.any(np.diff(nodes) <= 0):
            raise GridError("nodes must be distinct and strictly increasing")
        if nodes[0] < self.origin or nodes[-1] >= self.origin + self.period:
            raise GridError(
                f"nodes must lie in [{self.origin}, {self.origin + self.period})"
            )

    @property
    def size(self) -> int:
        return self.nodes.size

    @property
    def degree(self) -> int:
        return (self.nodes.size - 1) // 2

    @cached_property
    def psi(self) -> np.ndarray:
        """The normalizers psi_m (see :func:`psi_weights`)."""
        s = _sine_gaps(self.nodes, self.nodes, self.period)
        np.fill_diagonal(s, 1.0)
        psi = np.prod(s, axis=1)
        psi.setflags(write=False)
        return psi

    def reduce(self, x):
        """Map points into ``[origin, origin + period)`` by periodicity."""
        x = np.asarray(x, dtype=float)
        inside = (x >= self.origin) & (x < self.origin + self.period)
        return np.where(inside, x, self.origin + np.mod(x - self.origin, self.period))

    def locate(self, x, atol=1e-12):
        """Index of the node equal to ``x`` modulo the period, or None."""
        gap = np.abs(self.nodes - float(self.reduce(x)))
        gap = np.minimum(gap, self.period - gap)
        j = int(np.argmin(gap))
        return j if gap[j] <= atol * max(1.0, self.period) else None

    def __repr__(self):
        return f"Grid(N={self.size}, period={self.period!r}, origin={self.origin!r})"


def _sine_gaps(x, nodes, period):
    return np.sin(np.pi * (np.asarray(x)[:, None] - nodes[None, :]) / period)


def make_grid(nodes, period, origin=0.0) -> Grid:
    return Grid(period, np.asarray(nodes, dtype=float), origin)


def make_uniform_grid(N: int, L: float, anchor: float | None = None, origin: float = 0.0) -> Grid:
    """Equispaced nodes ``origin + j L / N``.

    With ``anchor``, the node nearest to it (periodically) is moved onto the
    anchor exactly, e.g. to place a node at a boundary point.
    """
    if int(N) != N or N < 3 or N % 2 == 0:
        raise GridError(f"N must be an odd integer >= 3, got {N}")
    if L <= 0:
        raise GridError(f"period must be positive, got {L}")
    N = int(N)
    nodes = origin + np.arange(N) * (L / N)
    if anchor is not None:
        if not origin <= anchor < origin + L:
            raise GridError(f"anchor {anchor} outside [{origin}, {origin + L})")
        gap = np.abs(nodes - anchor)
        gap = np.minimum(gap, L - gap)
        nodes[int(np.argmin(gap))] = anchor
        nodes = np.sort(nodes)
        if np.any(np.diff(nodes) <= 0):
            raise GridError(f"anchor {anchor} collides with an existing node")
    return Grid(L, nodes, origin)


def make_interval_grid(N: int, a: float, b: float, period: float, placement: str = "interior") -> Grid:
    """``N`` equispaced nodes on the physical interval ``[a, b]`` inside a longer period.

    placement:
      ``endpoints``  x_j = a + j (b - a) / (N - 1),   j = 0..N-1
      ``interior``   x_j = a + j (b - a) / (N + 1),   j = 1..N
      ``midpoint``   x_j = a + (j + 1/2) (b - a) / N, j = 0..N-1
    The grid origin is ``a``.
    """
    if int(N) != N or N < 3 or N % 2 == 0:
        raise GridError(f"N must be an odd integer >= 3, got {N}")
    if not b > a:
        raise GridError(f"empty interval [{a}, {b}]")
    N = int(N)
    width = b - a
    if placement == "endpoints":
        nodes = a + np.arange(N) * (width / (N - 1))
    elif placement == "interior":
        nodes = a + np.arange(1, N + 1) * (width / (N + 1))
    elif placement == "midpoint":
        nodes = a + (np.arange(N) + 0.5) * (width / N)
    else:
        raise GridError(f"unknown placement {placement!r}")
    return Grid(period, nodes, a)


def make_random_grid(N: int, L: float, rng: np.random.Generator, jitter: float = 0.3, origin: float = 0.0) -> Grid:
    """Uniform grid with each node displaced by up to ``jitter`` cells.

    Keeps nodes distinct and ordered while breaking every symmetry of the
    uniform partition.
    """
    if not 0 <= jitter < 0.5:
        raise GridError("jitter must be in [0, 0.5)")
    base = np.arange(N) + rng.uniform(-jitter, jitter, size=N)
    base[0] = abs(base[0])
    return make_grid(origin + np.sort(base) * (L / N), L, origin)


def psi_weights(grid: Grid) -> np.ndarray:
    """``psi_m = prod_{k != m} sin(pi (x_m - x_k) / L)``; nonzero for any valid grid."""
    return grid.psi


def cardinal_matrix(grid: Grid, x) -> np.ndarray:
    """Matrix ``M[i, j] = t_j(x_i)`` for the points ``x`` (reduced into the period)."""
    x = np.atleast_1d(grid.reduce(x))
    s = _sine_gaps(x, grid.nodes, grid.period)
    N = grid.size
    out = np.empty((x.size, N))
    for j in range(N):
        others = np.delete(s, j, axis=1)
        out[:, j] = np.prod(others, axis=1) / grid.psi[j]
    return out


def cardinal_eval(grid: Grid, j: int, x):
    """Evaluate the cardinal function ``t_j`` at ``x`` (scalar or array)."""
    if not 0 <= j < grid.size:
        raise IndexError(f"cardinal index {j} out of range for N={grid.size}")
    xr = np.atleast_1d(grid.reduce(x))
    s = np.delete(_sine_gaps(xr, grid.nodes, grid.period), j, axis=1)
    out = np.prod(s, axis=1) / grid.psi[j]
    return float(out[0]) if np.ndim(x) == 0 else out


class TrigInterpolant:
    """Callable ``x -> sum_j u_j t_j(x)``."""

    def __init__(self, grid: Grid, values):
        values = np.asarray(values, dtype=float)
        if values.shape != (grid.size,):
            raise ValueError(f"expected {grid.size} node values, got shape {values.shape}")
        self.grid = grid
        self.values = values

    def __call__(self, x):
        out = cardinal_matrix(self.grid, x) @ self.values
        return float(out[0]) if np.ndim(x) == 0 else out

    def coefficients(self) -> "TrigPolyCoeffs":
        return to_coefficients(self.grid, self.values)


def interpolate(grid: Grid, values) -> TrigInterpolant:
    return TrigInterpolant(grid, values)


@dataclass(frozen=True, eq=False)
class TrigPolyCoeffs:
    """``c + sum_k (a_k sin(2 pi k x / L) + b_k cos(2 pi k x / L))``.

    ``sin_coeffs`` holds a_1..a_n and ``cos_coeffs`` holds b_1..b_n.
    """

    constant: float
    cos_coeffs: np.ndarray
    sin_coeffs: np.ndarray
    period: float
    degree: int = field(init=False)

    def __post_init__(self):
        cos_c = np.asarray(self.cos_coeffs, dtype=float)
        sin_c = np.asarray(self.sin_coeffs, dtype=float)
        if cos_c.shape != sin_c.shape or cos_c.ndim != 1:
            raise ValueError("cos and sin coefficient sequences must have equal length")
        object.__setattr__(self, "cos_coeffs", cos_c)
        object.__setattr__(self, "sin_coeffs", sin_c)
        object.__setattr__(self, "degree", cos_c.size)

    def __call__(self, x):
        return eval_coeffs(self, x)

    def derivative(self, order: int = 1) -> "TrigPolyCoeffs":
        """Exact derivative, again in coefficient form."""
        c, b, a = self.constant, self.cos_coeffs.copy(), self.sin_coeffs.copy()
        w = 2 * np.pi * np.arange(1, self.degree + 1) / self.period
        for _ in range(order):
            # d/dx (a sin + b cos) = w a cos - w b sin
            a, b = -w * b, w * a
            c = 0.0
        return TrigPolyCoeffs(c, b, a, self.period)

    def as_vector(self) -> np.ndarray:
        """Coefficients in basis order 1, cos(w x), sin(w x), cos(2 w x), ..."""
        out = np.empty(2 * self.degree + 1)
        out[0] = self.constant
        out[1::2] = self.cos_coeffs
        out[2::2] = self.sin_coeffs
        return out

    @classmethod
    def from_vector(cls, vec, period) -> "TrigPolyCoeffs":
        vec = np.asarray(vec, dtype=float)
        return cls(float(vec[0]), vec[1::2], vec[2::2], period)


def basis_matrix(x, degree: int, period: float) -> np.ndarray:
    """Columns 1, cos(2 pi x / L), sin(2 pi x / L), ..., sin(2 pi n x / L) at ``x``."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    k = np.arange(1, degree + 1)
    phase = 2 * np.pi * np.outer(x, k) / period
    out = np.empty((x.size, 2 * degree + 1))
    out[:, 0] = 1.0
    out[:, 1::2] = np.cos(phase)
    out[:, 2::2] = np.sin(phase)
    return out


def eval_coeffs(coeffs: TrigPolyCoeffs, x):
    out = basis_matrix(x, coeffs.degree, coeffs.period) @ coeffs.as_vector()
    return float(out[0]) if np.ndim(x) == 0 else out


def to_coefficients(grid: Grid, values) -> TrigPolyCoeffs:
    """Coefficient form of the interpolant of ``values``.

    Solves the collocation system in the basis {1, cos, sin, ...}; the
    system is nonsingular for every valid grid since the interpolant is
    unique.
    """
    values = np.asarray(values, dtype=float)
    if values.shape != (grid.size,):
        raise ValueError(f"expected {grid.size} node values, got shape {values.shape}")
    F = basis_matrix(grid.nodes, grid.degree, grid.period)
    vec = linalg.lu_solve(F, values)
    return TrigPolyCoeffs.from_vector(vec, grid.period)


def sample(grid: Grid, f) -> np.ndarray:
    """Node values ``f(x_j)`` of a vectorized callable."""
    return np.asarray(f(grid.nodes), dtype=float) * np.ones(grid.size)
