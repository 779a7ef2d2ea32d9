"""Reference computations that share no code path with the package.

Everything here is plain Python/cmath (no LAPACK), used to freeze or
cross-check expected values.
"""

import cmath
import math


def charpoly(A):
    """Characteristic polynomial coefficients [1, c_1, ..., c_n] by Faddeev-LeVerrier."""
    n = len(A)
    M = [[0.0] * n for _ in range(n)]
    coeffs = [1.0]
    for k in range(1, n + 1):
        # M_k = A M_{k-1} + c_{k-1} I
        M = [[sum(A[i][l] * M[l][j] for l in range(n)) + (coeffs[-1] if i == j else 0.0)
              for j in range(n)] for i in range(n)]
        AM = [[sum(A[i][l] * M[l][j] for l in range(n)) for j in range(n)] for i in range(n)]
        coeffs.append(-sum(AM[i][i] for i in range(n)) / k)
    return coeffs


def polyval(coeffs, z):
    acc = 0j
    for c in coeffs:
        acc = acc * z + c
    return acc


def poly_roots(coeffs, iters=2000, tol=1e-15):
    """All complex roots of a monic polynomial by Weierstrass (Durand-Kerner) iteration,
    then deflation-free Newton polishing on the original polynomial."""
    n = len(coeffs) - 1
    radius = 1 + max(abs(c) for c in coeffs[1:])
    z = [radius * cmath.exp(2j * math.pi * (k + 0.25) / n) for k in range(n)]
    for _ in range(iters):
        delta = 0.0
        for i in range(n):
            denom = 1 + 0j
            for j in range(n):
                if j != i:
                    denom *= z[i] - z[j]
            step = polyval(coeffs, z[i]) / denom
            z[i] -= step
            delta = max(delta, abs(step))
        if delta < tol * radius:
            break
    dcoeffs = [c * (n - i) for i, c in enumerate(coeffs[:-1])]
    for i in range(n):
        for _ in range(5):
            d = polyval(dcoeffs, z[i])
            if d == 0:
                break
            z[i] -= polyval(coeffs, z[i]) / d
    return z


def match_multisets(a, b):
    """Largest distance in a greedy nearest-neighbour pairing of two equal-size complex lists."""
    b = list(b)
    worst = 0.0
    for x in a:
        j = min(range(len(b)), key=lambda k: abs(b[k] - x))
        worst = max(worst, abs(b[j] - x))
        b.pop(j)
    return worst


def sym_eigs_jacobi(S, sweeps=100):
    """Eigenvalues of a symmetric matrix by cyclic Jacobi rotations."""
    n = len(S)
    A = [row[:] for row in S]
    for _ in range(sweeps):
        off = sum(A[i][j] ** 2 for i in range(n) for j in range(n) if i != j)
        if off < 1e-30:
            break
        for p in range(n):
            for q in range(p + 1, n):
                if abs(A[p][q]) < 1e-300:
                    continue
                theta = (A[q][q] - A[p][p]) / (2 * A[p][q])
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1))
                c = 1 / math.sqrt(t * t + 1)
                s = t * c
                for k in range(n):
                    akp, akq = A[k][p], A[k][q]
                    A[k][p] = c * akp - s * akq
                    A[k][q] = s * akp + c * akq
                for k in range(n):
                    apk, aqk = A[p][k], A[q][k]
                    A[p][k] = c * apk - s * aqk
                    A[q][k] = s * apk + c * aqk
    return sorted(A[i][i] for i in range(n))


def trig_poly(c, cos_c, sin_c, L):
    """Closure evaluating c + sum b_k cos(2 pi k x/L) + a_k sin(2 pi k x/L) with math only."""
    def f(x):
        return c + sum(b * math.cos(2 * math.pi * (k + 1) * x / L) + a * math.sin(2 * math.pi * (k + 1) * x / L)
                       for k, (b, a) in enumerate(zip(cos_c, sin_c)))
    return f


def trig_poly_derivative(c, cos_c, sin_c, L, order=1):
    """Coefficients of the order-th derivative, term by term."""
    cos_c, sin_c = list(cos_c), list(sin_c)
    for _ in range(order):
        w = [2 * math.pi * (k + 1) / L for k in range(len(cos_c))]
        cos_c, sin_c = [wk * a for wk, a in zip(w, sin_c)], [-wk * b for wk, b in zip(w, cos_c)]
        c = 0.0
    return c, cos_c, sin_c
