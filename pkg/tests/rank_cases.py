"""Constant-coefficient operator families for rank checks."""

import math

import numpy as np

from trigspec.rank import RankSpec

SEED = 4242
EXAMPLE3_ALPHAS = (36.0, 0.0, 13 / (2 * math.pi) ** 2, 0.0, 1 / (2 * math.pi) ** 4)


def _integer_root_free(alphas, L, n):
    # reject specs whose phi and zeta are both tiny at some k (accidental kernel)
    for k in range(1, n + 1):
        w = 2 * math.pi * k / L
        terms = [a * w**i for i, a in enumerate(alphas)]
        scale = sum(abs(t) for t in terms)
        even = sum(t * (-1) ** (i // 2) for i, t in enumerate(terms) if i % 2 == 0)
        odd = sum(t * (-1) ** (i // 2) for i, t in enumerate(terms) if i % 2 == 1)
        if abs(even) < 1e-6 * scale and abs(odd) < 1e-6 * scale:
            return False
    return True


def random_specs(n, L, count=50, seed=SEED):
    rng = np.random.default_rng(seed + n)
    out = []
    while len(out) < count:
        s = int(rng.integers(1, 5))
        alphas = rng.uniform(-2, 2, s + 1)
        alphas[0] = rng.choice([-1, 1]) * rng.uniform(0.5, 2)
        if abs(alphas[-1]) < 0.1:
            continue
        alphas = tuple(float(a) for a in alphas)
        if _integer_root_free(alphas, L, n):
            out.append(RankSpec(alphas, L, n))
    return out


def families(n, L=2 * math.pi):
    """(label, spec, expected rank) triples covering every family."""
    cases = []
    for p in range(1, 5):
        cases.append((f"d^{p}", RankSpec((0.0,) * p + (1.0,), L, n), 2 * n))
    c = (L / (2 * math.pi)) ** 2
    for m in range(1, n + 1):
        cases.append((f"shifted m={m}", RankSpec((float(m * m), 0.0, c), L, n), 2 * n - 1))
    # k^4 - 13 k^2 + 36 = (k^2 - 4)(k^2 - 9) vanishes at k = 2, 3
    m = sum(1 for k in (2, 3) if k <= n)
    cases.append(("fourth-order", RankSpec(EXAMPLE3_ALPHAS, 1.0, n), 2 * n + 1 - 2 * m))
    for i, spec in enumerate(random_specs(n, L)):
        cases.append((f"random[{i}]", spec, 2 * n + 1))
    return cases
