"""Rank of ``P(D)`` for constant-coefficient operators ``P(d/dx)``.

On trigonometric polynomials of degree ``n``, ``P(d/dx)`` maps the pair
{cos(w_k x), sin(w_k x)}, ``w_k = 2 pi k / L``, into itself through the
2x2 block [[phi, w_k zeta], [-w_k zeta, phi]] with

    phi(k)  = sum_{i even} (-1)^(i/2)     a_i w_k^i
    zeta(k) = sum_{i odd}  (-1)^((i-1)/2) a_i w_k^(i-1)

so the pair lies in the kernel exactly when phi(k) = zeta(k) = 0. The
constant mode is annihilated iff a_0 = 0. Hence

    rank P(D) = 2n + |sign a_0| - 2m,

m being the number of such integers k in 1..n, for any partition.
"""

from __future__ import annotations

from dataclasses import dataclass, field, asdict

import numpy as np

from . import linalg
from .grid import Grid
from .operators import PLAIN, derivative_matrix, matrix_poly

ZERO_RTOL = 1e-9
RANK_RTOL = 1e-8
KERNEL_RTOL = 1e-7


@dataclass(frozen=True)
class RankSpec:
    alphas: tuple
    period: float
    degree: int

    def __post_init__(self):
        alphas = tuple(float(a) for a in self.alphas)
        object.__setattr__(self, "alphas", alphas)
        if not alphas or alphas[-1] == 0.0:
            raise ValueError("leading coefficient is zero")
        if self.degree < 1:
            raise ValueError(f"degree must be >= 1, got {self.degree}")
        if self.period <= 0:
            raise ValueError(f"period must be positive, got {self.period}")


def phi_zeta(spec: RankSpec, k: int) -> tuple[float, float]:
    w = 2 * np.pi * k / spec.period
    phi = 0.0
    zeta = 0.0
    for i, a in enumerate(spec.alphas):
        if i % 2 == 0:
            phi += (-1) ** (i // 2) * a * w**i
        else:
            zeta += (-1) ** ((i - 1) // 2) * a * w ** (i - 1)
    return phi, zeta


def _scales(spec, k):
    w = 2 * np.pi * k / spec.period
    even = sum(abs(a) * w**i for i, a in enumerate(spec.alphas) if i % 2 == 0)
    odd = sum(abs(a) * w ** (i - 1) for i, a in enumerate(spec.alphas) if i % 2 == 1)
    return even, odd


def kernel_frequencies(spec: RankSpec, rtol: float = ZERO_RTOL) -> list[int]:
    """Integers k in 1..n with phi(k) = zeta(k) = 0, up to a relative tolerance."""
    found = []
    for k in range(1, spec.degree + 1):
        phi, zeta = phi_zeta(spec, k)
        even, odd = _scales(spec, k)
        if abs(phi) <= rtol * even and abs(zeta) <= rtol * odd:
            found.append(k)
    return found


def predicted_rank(spec: RankSpec) -> int:
    m = len(kernel_frequencies(spec))
    return 2 * spec.degree + (spec.alphas[0] != 0.0) - 2 * m


def kernel_basis(grid: Grid, freqs) -> np.ndarray:
    """Node samples of cos and sin at each kernel frequency, as columns (unnormalized)."""
    cols = []
    for k in freqs:
        w = 2 * np.pi * k / grid.period
        cols.append(np.cos(w * grid.nodes))
        cols.append(np.sin(w * grid.nodes))
    if not cols:
        return np.zeros((grid.size, 0))
    return np.column_stack(cols)


@dataclass
class RankReport:
    """Predicted vs. measured rank of ``P(D)`` on one grid.

    ``numerical_rank`` counts singular values above ``tol * sigma_1``
    (``tol = 1e-8``; looser than the machine-epsilon default because the
    entries of ``P(D)`` grow like ``(2 pi n / L)^s``).
    """

    alphas: list
    period: float
    degree: int
    variant: str
    kernel_freqs: list
    m: int
    predicted_rank: int
    numerical_rank: int
    sigma_tail: list
    kernel_residuals: list
    kernel_ok: bool
    constant_in_kernel: bool
    tol: float = RANK_RTOL
    grid_label: str = "uniform"
    kernel_basis: np.ndarray = field(default=None, repr=False)

    @property
    def match(self) -> bool:
        return self.predicted_rank == self.numerical_rank

    def to_dict(self, include_basis: bool = False) -> dict:
        d = asdict(self)
        d.pop("kernel_basis")
        d["match"] = self.match
        if include_basis and self.kernel_basis is not None:
            d["kernel_basis"] = self.kernel_basis.T.tolist()
        return d

    def summary(self) -> str:
        status = "match" if self.match and self.kernel_ok else "MISMATCH"
        return (
            f"[{self.grid_label}] n={self.degree} alphas={self.alphas} kernel k={self.kernel_freqs} "
            f"predicted={self.predicted_rank} numerical={self.numerical_rank} {status}"
        )


def verify_rank(spec: RankSpec, grid: Grid, variant: str = PLAIN, grid_label: str = "uniform") -> RankReport:
    """Build ``P(D)`` on ``grid`` and compare its measured rank with the prediction.

    Also checks ``||P(D) v||_inf <= 1e-7 ||P(D)||_inf`` for every predicted
    kernel vector ``v`` (unit-sup-norm samples of cos, sin). Mismatches
    are recorded in the report, never raised.
    """
    if grid.degree != spec.degree:
        raise ValueError(f"grid degree {grid.degree} != spec degree {spec.degree}")
    if not np.isclose(grid.period, spec.period, rtol=1e-14, atol=0):
        raise ValueError(f"grid period {grid.period} != spec period {spec.period}")
    P = matrix_poly(spec.alphas, derivative_matrix(grid, variant))
    sigma = linalg.singular_values(P)
    measured = int(np.count_nonzero(sigma > RANK_RTOL * sigma[0]))
    freqs = kernel_frequencies(spec)
    raw = kernel_basis(grid, freqs)
    if variant != PLAIN:
        # kernel of Psi^{-1} P(D) Psi is Psi^{-1} ker P(D)
        raw = raw / grid.psi[:, None]
    norm_p = float(np.abs(P).sum(axis=1).max())
    residuals = []
    for col in raw.T:
        v = col / np.abs(col).max()
        residuals.append(float(np.abs(P @ v).max() / norm_p))
    basis = np.linalg.qr(raw)[0] if raw.shape[1] else raw
    return RankReport(
        alphas=list(spec.alphas),
        period=spec.period,
        degree=spec.degree,
        variant=variant,
        kernel_freqs=freqs,
        m=len(freqs),
        predicted_rank=predicted_rank(spec),
        numerical_rank=measured,
        sigma_tail=[float(s) for s in sigma[-3:]],
        kernel_residuals=residuals,
        kernel_ok=all(r <= KERNEL_RTOL for r in residuals),
        constant_in_kernel=spec.alphas[0] == 0.0,
        grid_label=grid_label,
        kernel_basis=basis,
    )
