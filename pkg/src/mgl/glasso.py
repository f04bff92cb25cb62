"""Element-wise weighted graphical lasso by proximal gradient.

Solves::

    minimize  tr(S @ theta) - log det(theta) + sum(penalty * |theta|)
    subject to theta positive definite

with a symmetric, non-negative penalty matrix whose diagonal is zero.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import ConvergenceWarning, InvalidInput, NotPositiveDefinite
from .linalg import as_symmetric, cholesky, log_det, spd_inverse, symmetrize

DEFAULT_TOL = 1e-6
DEFAULT_MAX_ITER = 500
MAX_HALVINGS = 60


@dataclass
class SolverReport:
    iterations: int
    final_objective: float
    converged: bool
    kkt_residual: float
    objective_history: list = field(default_factory=list, repr=False)


class NonConvergence(ConvergenceWarning):
    """Issued when the solver stops early; the best iterate is still returned."""


def soft_threshold(x, t):
    """sign(x) * max(|x| - t, 0), element-wise."""
    return np.sign(x) * np.maximum(np.abs(x) - t, 0.0)


def uniform_penalty(dim, value):
    """Penalty matrix with ``value`` off the diagonal and zeros on it."""
    lam = np.full((dim, dim), float(value))
    np.fill_diagonal(lam, 0.0)
    return lam


def check_penalty(lam, dim):
    lam = np.asarray(lam, dtype=float)
    if np.ndim(lam) == 0:
        return uniform_penalty(dim, lam if lam >= 0 else _bad_penalty())
    if lam.shape != (dim, dim):
        raise InvalidInput(f"penalty shape {lam.shape} does not match ({dim}, {dim})")
    if not np.array_equal(lam, lam.T):
        raise InvalidInput("penalty matrix is not symmetric")
    if np.any(lam < 0) or not np.all(np.isfinite(lam)):
        _bad_penalty()
    if np.any(np.diag(lam) != 0):
        raise InvalidInput("penalty diagonal must be zero")
    return lam


def _bad_penalty():
    raise InvalidInput("penalty weights must be finite and non-negative")


def objective(S, theta, lam, factor=None):
    if factor is None:
        factor = cholesky(theta)
    return float(np.sum(S * theta) - log_det(factor) + np.sum(lam * np.abs(theta)))


def kkt_residual(S, theta, lam, W=None):
    """Largest violation of the weighted glasso stationarity conditions.

    Zero exactly at a minimizer. ``W`` may be passed when ``inv(theta)`` is
    already known.
    """
    S = np.asarray(S, dtype=float)
    theta = np.asarray(theta, dtype=float)
    lam = check_penalty(lam, S.shape[0])
    if W is None:
        W = spd_inverse(cholesky(theta))
    g = S - W
    active = theta != 0
    res = np.where(
        active,
        np.abs(g + lam * np.sign(theta)),
        np.maximum(np.abs(g) - lam, 0.0),
    )
    return float(res.max())


def default_init(S, lam):
    n = S.shape[0]
    off = lam[~np.eye(n, dtype=bool)]
    shift = off.mean() if off.size else 0.0
    d = np.diag(S) + shift
    if np.any(d <= 0):
        raise InvalidInput("S has a zero diagonal entry and no penalty to regularize it")
    return np.diag(1.0 / d)


def solve_weighted_glasso(S, lam, init=None, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER, warn=True):
    """Minimize the weighted graphical lasso objective.

    Parameters
    ----------
    S : array, shape (D, D)
        Symmetric empirical covariance (non-negative diagonal).
    lam : array, shape (D, D) or float
        Penalty weights; a scalar is spread uniformly over the off-diagonal.
    init : array, shape (D, D), optional
        Positive definite starting point (warm start).
    tol : float
        Stop when the largest entry change is below ``tol`` and the KKT
        residual is below ``10 * tol``.
    max_iter : int
        Maximum number of accepted proximal steps.
    warn : bool
        Emit :class:`NonConvergence` when stopping without convergence.

    Returns
    -------
    theta : array, shape (D, D)
        Best iterate found; always positive definite.
    report : SolverReport
    """
    S = as_symmetric(S, "S")
    if np.any(np.diag(S) < 0):
        raise InvalidInput("S has a negative diagonal entry")
    if not tol > 0:
        raise InvalidInput("tol must be positive")
    n = S.shape[0]
    lam = check_penalty(lam, n)

    theta = default_init(S, lam) if init is None else as_symmetric(init, "init").copy()
    try:
        factor = cholesky(theta, check=False)
    except NotPositiveDefinite as exc:
        raise InvalidInput("initial iterate is not positive definite") from exc
    W = spd_inverse(factor)
    smooth = float(np.sum(S * theta)) - log_det(factor)
    obj = smooth + float(np.sum(lam * np.abs(theta)))
    history = [obj]

    s_norm = np.linalg.norm(S)
    step = 1.0 / s_norm if s_norm > 0 else 1.0
    grad = S - W
    converged = False
    kkt = kkt_residual(S, theta, lam, W)
    it = 0
    if kkt < 10 * tol:
        converged = True

    while not converged and it < max_iter:
        for _ in range(MAX_HALVINGS + 1):
            cand = symmetrize(soft_threshold(theta - step * grad, step * lam))
            try:
                cand_factor = cholesky(cand, check=False)
            except NotPositiveDefinite:
                step *= 0.5
                continue
            cand_smooth = float(np.sum(S * cand)) - log_det(cand_factor)
            diff = cand - theta
            bound = smooth + float(np.sum(grad * diff)) + float(np.sum(diff * diff)) / (2.0 * step)
            if cand_smooth <= bound:
                break
            step *= 0.5
        else:
            break  # line search exhausted; keep the current iterate

        cand_obj = cand_smooth + float(np.sum(lam * np.abs(cand)))
        if cand_obj > obj:
            # only floating-point noise can get here; refuse to go uphill
            break
        it += 1
        cand_W = spd_inverse(cand_factor)
        cand_grad = S - cand_W
        delta = float(np.max(np.abs(diff)))

        # Barzilai-Borwein guess for the next trial step
        dgrad = cand_grad - grad
        sy = float(np.sum(diff * dgrad))
        if sy > 0:
            step = float(np.sum(diff * diff)) / sy
        theta, factor, W, grad = cand, cand_factor, cand_W, cand_grad
        smooth, obj = cand_smooth, cand_obj
        history.append(obj)

        kkt = kkt_residual(S, theta, lam, W)
        if delta < tol and kkt < 10 * tol:
            converged = True

    report = SolverReport(
        iterations=it,
        final_objective=obj,
        converged=converged,
        kkt_residual=kkt,
        objective_history=history,
    )
    if not converged and warn:
        warnings.warn(
            f"weighted glasso stopped after {it} iterations with KKT residual {kkt:.3g}",
            NonConvergence,
            stacklevel=2,
        )
    return theta, report
