"""Dense symmetric matrix kernels.

Symmetric matrices are plain ``(D, D)`` float arrays. Positive definiteness is
certified exclusively by a successful Cholesky factorization.
"""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import lapack

from .errors import InvalidInput, NotPositiveDefinite


def as_symmetric(m, name="matrix"):
    """Return ``m`` as a float64 array, checking it is square and exactly symmetric."""
    a = np.asarray(m, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise InvalidInput(f"{name} must be a non-empty square matrix, got shape {a.shape}")
    if not np.array_equal(a, a.T):
        raise InvalidInput(f"{name} is not symmetric")
    return a


def symmetrize(m):
    return 0.5 * (m + m.T)


@dataclass(frozen=True)
class CholeskyFactor:
    """Lower-triangular ``L`` with ``L @ L.T == m`` and a strictly positive diagonal."""

    lower: np.ndarray

    @property
    def dim(self):
        return self.lower.shape[0]


def cholesky(m, check=True):
    """Factor a symmetric positive definite matrix.

    Raises
    ------
    NotPositiveDefinite
        If a pivot is not strictly positive. ``pivot_index`` is 0-based.
    """
    a = as_symmetric(m) if check else np.asarray(m, dtype=float)
    if not np.all(np.isfinite(a)):
        raise NotPositiveDefinite(0)
    c, info = lapack.dpotrf(a, lower=1, clean=1, overwrite_a=0)
    if info > 0:
        raise NotPositiveDefinite(info - 1)
    if info < 0:  # pragma: no cover - argument error inside LAPACK
        raise InvalidInput(f"dpotrf argument {-info} invalid")
    if not np.all(np.diag(c) > 0):
        raise NotPositiveDefinite(int(np.argmin(np.diag(c))))
    return CholeskyFactor(c)


def log_det(f):
    """log|m| from its Cholesky factor."""
    return 2.0 * float(np.sum(np.log(np.diag(f.lower))))


def spd_inverse(f):
    inv, info = lapack.dpotri(f.lower, lower=1)
    if info != 0:  # pragma: no cover - cannot happen for a valid factor
        raise NotPositiveDefinite(max(info - 1, 0))
    low = np.tril(inv)
    return low + np.tril(low, -1).T


def sym_eigen(m, tol=1e-12, max_sweeps=100):
    """Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.

    Returns eigenvalues in ascending order and the matching orthonormal
    eigenvectors as columns. Intended for small matrices (D up to a few
    hundred).
    """
    a = as_symmetric(m).copy()
    n = a.shape[0]
    v = np.eye(n)
    fro = np.linalg.norm(a)
    if n > 1 and fro > 0:
        threshold = tol * fro
        for _ in range(max_sweeps):
            off = np.linalg.norm(a - np.diag(np.diag(a)))
            if off < threshold:
                break
            for p in range(n - 1):
                for q in range(p + 1, n):
                    apq = a[p, q]
                    if abs(apq) < 1e-300:
                        continue
                    tau = (a[q, q] - a[p, p]) / (2.0 * apq)
                    if abs(tau) > 1e150:
                        t = 0.5 / tau
                    elif tau != 0:
                        t = np.sign(tau) / (abs(tau) + np.sqrt(1.0 + tau * tau))
                    else:
                        t = 1.0
                    c = 1.0 / np.sqrt(1.0 + t * t)
                    s = t * c
                    ap = a[:, p].copy()
                    aq = a[:, q].copy()
                    a[:, p] = c * ap - s * aq
                    a[:, q] = s * ap + c * aq
                    ap = a[p, :].copy()
                    aq = a[q, :].copy()
                    a[p, :] = c * ap - s * aq
                    a[q, :] = s * ap + c * aq
                    a[p, q] = a[q, p] = 0.0
                    vp = v[:, p].copy()
                    v[:, p] = c * vp - s * v[:, q]
                    v[:, q] = s * vp + c * v[:, q]
    w = np.diag(a).copy()
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]
