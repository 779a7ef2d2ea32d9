"""Dense real linear algebra used by the solvers.

Thin, contract-checked wrappers over LAPACK (via numpy/scipy): LU solves,
column-pivoted QR least squares, singular values and numerical rank, and
the nonsymmetric (Hessenberg + Francis double-shift QR) eigenvalue driver.
"""

from __future__ import annotations

import warnings

import numpy as np
import scipy.linalg as sla

from .errors import ConvergenceError, SingularMatrixError

EPS = 2.0**-52
SINGULAR_PIVOT = 1e-13


def _square(A):
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {A.shape}")
    return A


def lu_solve(A, b):
    """Solve ``A x = b`` by LU with partial pivoting.

    Raises SingularMatrixError when a pivot falls below ``1e-13 * ||A||_inf``.
    ``b`` may be a vector or a matrix of right-hand sides.
    """
    A = _square(A)
    b = np.asarray(b, dtype=float)
    if b.shape[0] != A.shape[0]:
        raise ValueError(f"rhs length {b.shape[0]} does not match order {A.shape[0]}")
    with warnings.catch_warnings():
        # exact zero pivots are reported below as SingularMatrixError
        warnings.simplefilter("ignore", sla.LinAlgWarning)
        lu, piv = sla.lu_factor(A, check_finite=True)
    scale = np.abs(A).sum(axis=1).max()
    pivots = np.abs(np.diag(lu))
    if scale == 0.0 or pivots.min() <= SINGULAR_PIVOT * scale:
        k = int(np.argmin(pivots))
        raise SingularMatrixError(f"matrix is numerically singular (pivot {k} = {pivots[k]:.3e})")
    return sla.lu_solve((lu, piv), b)


def qr_pivoted(A):
    """Householder QR with column pivoting: returns ``Q, R, perm`` with ``A[:, perm] = Q R``."""
    A = np.asarray(A, dtype=float)
    Q, R, perm = sla.qr(A, mode="economic", pivoting=True)
    return Q, R, perm


def least_squares(A, b, rcond=1e-12):
    """Least-squares solution of a (possibly rank-deficient) ``m x n`` system, ``m >= n``.

    Uses LAPACK's complete orthogonal factorization (column-pivoted QR
    followed by an RZ step), so rank-deficient systems return the
    minimum-norm minimizer. Returns ``(x, residual_norm, rank)``.
    """
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    m, n = A.shape
    if m < n:
        raise ValueError(f"least_squares needs rows >= cols, got {A.shape}")
    x, _, rank, _ = sla.lstsq(A, b, cond=rcond, lapack_driver="gelsy")
    residual = float(np.linalg.norm(A @ x - b))
    return x, residual, int(rank)


def singular_values(A):
    """Singular values in descending order."""
    A = np.asarray(A, dtype=float)
    if A.size == 0:
        return np.zeros(0)
    return np.linalg.svd(A, compute_uv=False)


def rank_tolerance(A, sigma=None):
    A = np.asarray(A, dtype=float)
    if sigma is None:
        sigma = singular_values(A)
    top = sigma[0] if sigma.size else 0.0
    return max(A.shape) * EPS * top


def numerical_rank(A, tol=None):
    """Number of singular values strictly above ``tol``.

    The default threshold is ``max(rows, cols) * eps * sigma_max``.
    """
    sigma = singular_values(A)
    if tol is None:
        tol = rank_tolerance(A, sigma)
    return int(np.count_nonzero(sigma > tol))


def kernel_vectors(A, tol=None):
    """Orthonormal basis (as columns) of the numerical kernel of ``A``.

    ``tol`` defaults to the same threshold as :func:`numerical_rank`.
    Raises ValueError when ``A`` has full column rank.
    """
    A = np.asarray(A, dtype=float)
    _, sigma, Vt = np.linalg.svd(A)
    if tol is None:
        tol = rank_tolerance(A, sigma)
    rank = int(np.count_nonzero(sigma > tol))
    if rank >= A.shape[1]:
        raise ValueError("matrix has full column rank; kernel is trivial")
    return Vt[rank:].T.copy()


def eigenvalues(A):
    """Eigenvalues of a real square matrix as a complex array (unsorted)."""
    A = _square(A)
    try:
        return np.linalg.eigvals(A).astype(complex)
    except np.linalg.LinAlgError as exc:  # xHSEQR failed to converge
        raise ConvergenceError(f"eigenvalue iteration did not converge: {exc}") from exc


def generalized_eigenvalues(A, B):
    """Eigenvalues of ``A v = lambda B v`` for invertible ``B``, via ``B^{-1} A``."""
    A = _square(A)
    B = _square(B)
    if A.shape != B.shape:
        raise ValueError(f"shape mismatch: {A.shape} vs {B.shape}")
    return eigenvalues(lu_solve(B, A))


def sort_spectrum(values):
    """Sort complex values by (real, imag)."""
    values = np.asarray(values, dtype=complex)
    order = np.lexsort((values.imag, values.real))
    return values[order]
