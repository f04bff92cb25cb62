"""Independent reference computations used to freeze expected values.

Nothing here calls into the package's solvers; only plain numpy / math.
"""

import math

import numpy as np


def glasso_objective_2x2(S, lam, a, b, c):
    """tr(S T) - log det T + 2 lam |c| for T = [[a, c], [c, b]] (vectorized)."""
    det = a * b - c * c
    with np.errstate(invalid="ignore", divide="ignore"):
        val = S[0][0] * a + S[1][1] * b + 2 * S[0][1] * c - np.log(det) + 2 * lam * np.abs(c)
    return np.where((a > 0) & (det > 0), val, np.inf)


def grid_minimize_2x2(S, lam, rounds=14, n=41):
    """Zooming grid search over 2x2 SPD matrices parameterized by (t11, t22, t12)."""
    S = np.asarray(S, dtype=float)
    lmin = min(np.linalg.eigvalsh(S))
    hi = 2.0 / lmin
    box = [(1e-6, hi), (1e-6, hi), (-hi, hi)]
    best = (math.inf, None)
    for _ in range(rounds):
        axes = [np.linspace(lo, up, n) for lo, up in box]
        if box[2][0] < 0 < box[2][1]:
            axes[2] = np.union1d(axes[2], [0.0])
        A, B, C = np.meshgrid(*axes, indexing="ij")
        vals = glasso_objective_2x2(S, lam, A, B, C)
        i = np.unravel_index(np.argmin(vals), vals.shape)
        point = (A[i], B[i], C[i])
        if vals[i] < best[0]:
            best = (float(vals[i]), point)
        widths = [(up - lo) / 4 for lo, up in box]
        box = [
            (max(p - w, 1e-9) if k < 2 else p - w, p + w)
            for k, (p, w) in enumerate(zip(best[1], widths))
        ]
    return best


def scalar_log_gauss_2d(x1, x2, a, b, c):
    """log N(x | 0, inv([[a, c], [c, b]])) written out by hand."""
    det = a * b - c * c
    quad = a * x1 * x1 + 2 * c * x1 * x2 + b * x2 * x2
    return 0.5 * math.log(det) - math.log(2 * math.pi) - 0.5 * quad


def scalar_penalized_objective_2d(X, phi, thetas, lam1, lam2):
    """Mixture NLL + lam1 * l1(off) + lam2 * MER for D = 2, any K, scalar loops only."""
    nll = 0.0
    for x1, x2 in X:
        terms = []
        for w, (a, c, b) in zip(phi, thetas):
            terms.append(math.log(w) + scalar_log_gauss_2d(x1, x2, a, b, c))
        top = max(terms)
        nll -= top + math.log(sum(math.exp(t - top) for t in terms))
    l1 = sum(2 * abs(c) for (_, c, _) in thetas)
    mer = 0.0
    for i, (_, ci, _) in enumerate(thetas):
        for j, (_, cj, _) in enumerate(thetas):
            if i != j:
                mer += 2 * abs(ci) * abs(cj)
    return nll + lam1 * l1 + lam2 * mer


def brute_force_f1(detected, truth):
    """Textbook precision/recall F1 from explicit counts."""
    tp = sum(1 for e in detected if e in truth)
    if not detected and not truth:
        return 1.0
    if tp == 0:
        return 0.0
    precision = tp / len(detected)
    recall = tp / len(truth)
    return 2 * precision * recall / (precision + recall)
