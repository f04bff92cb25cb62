"""Comparison methods: k-means + GLasso, GLasso + spectral clustering, JGL-like."""

from dataclasses import dataclass

import numpy as np

from . import glasso, mixture
from .errors import DegenerateComponent, InvalidInput
from .linalg import sym_eigen, symmetrize


@dataclass
class KMeansResult:
    centers: np.ndarray
    labels: np.ndarray
    inertia: float
    iterations: int
    inertia_history: list


def _sq_dists(X, centers):
    d = (X**2).sum(1)[:, None] - 2.0 * X @ centers.T + (centers**2).sum(1)[None, :]
    return np.maximum(d, 0.0)


def _kmeans_pp(X, K, rng):
    n = X.shape[0]
    centers = [X[rng.integers(n)]]
    closest = ((X - centers[0]) ** 2).sum(1)
    for _ in range(1, K):
        total = closest.sum()
        if total <= 0:
            idx = rng.integers(n)
        else:
            idx = int(rng.choice(n, p=closest / total))
        centers.append(X[idx])
        closest = np.minimum(closest, ((X - X[idx]) ** 2).sum(1))
    return np.array(centers, dtype=float)


def _repair_empty(labels, dist, K):
    """Give each empty cluster the point farthest from its center, taken
    from a cluster that can spare it."""
    n = labels.size
    for k in range(K):
        if np.any(labels == k):
            continue
        sizes = np.bincount(labels, minlength=K)
        own = dist[np.arange(n), labels]
        own = np.where(sizes[labels] > 1, own, -np.inf)
        labels[int(np.argmax(own))] = k
    return labels


def _means(X, labels, K):
    return np.array([X[labels == k].mean(0) for k in range(K)])


def kmeans(X, K, seed=0, max_iter=300):
    """Lloyd's algorithm with k-means++ seeding.

    An emptied cluster is re-seeded with the point farthest from its
    assigned center.
    """
    X = np.asarray(X, dtype=float)
    n = X.shape[0]
    if K < 1 or n < K:
        raise InvalidInput(f"need 1 <= K <= N, got K={K}, N={n}")
    rng = np.random.default_rng(seed)
    centers = _kmeans_pp(X, K, rng)
    dist = _sq_dists(X, centers)
    labels = _repair_empty(dist.argmin(1), dist, K)
    centers = _means(X, labels, K)
    history = []
    it = 0
    for it in range(1, max_iter + 1):
        dist = _sq_dists(X, centers)
        history.append(float(dist[np.arange(n), labels].sum()))
        new = _repair_empty(dist.argmin(1), dist, K)
        if np.array_equal(new, labels):
            break
        labels = new
        centers = _means(X, labels, K)
    inertia = float(_sq_dists(X, centers)[np.arange(n), labels].sum())
    return KMeansResult(centers, labels, inertia, it, history)


def _glasso_on(X, lambda1, tol, max_iter):
    n, d = X.shape
    S = symmetrize(X.T @ X / n)
    theta, _ = glasso.solve_weighted_glasso(
        S, mixture.glasso_penalty(lambda1, n, d), tol=tol, max_iter=max_iter, warn=False
    )
    return theta


def plain_glasso(X, lambda1, tol=glasso.DEFAULT_TOL, max_iter=glasso.DEFAULT_MAX_ITER):
    """Single graphical lasso on all samples, penalty scaled as in the mixture objective."""
    return _glasso_on(np.asarray(X, dtype=float), lambda1, tol, max_iter)


def kmeans_glasso(X, K, lambda1, seed=0, tol=glasso.DEFAULT_TOL, max_iter=glasso.DEFAULT_MAX_ITER):
    X = np.asarray(X, dtype=float)
    km = kmeans(X, K, seed=seed)
    thetas = []
    for k in range(K):
        members = X[km.labels == k]
        if members.shape[0] < 2:
            raise DegenerateComponent(k, float(members.shape[0]))
        thetas.append(_glasso_on(members, lambda1, tol, max_iter))
    return thetas, km


def normalized_laplacian(A):
    """I - D^-1/2 A D^-1/2; isolated nodes get an identity row/column."""
    A = np.asarray(A, dtype=float)
    deg = A.sum(1)
    inv_sqrt = np.zeros_like(deg)
    nz = deg > 0
    inv_sqrt[nz] = 1.0 / np.sqrt(deg[nz])
    L = np.eye(A.shape[0]) - inv_sqrt[:, None] * A * inv_sqrt[None, :]
    return symmetrize(L)


def spectral_partition(A, K, seed=0):
    """Node labels from k-means on row-normalized Laplacian eigenvectors."""
    if A.shape[0] < K:
        raise InvalidInput(f"cannot split {A.shape[0]} nodes into {K} parts")
    _, vecs = sym_eigen(normalized_laplacian(A))
    U = vecs[:, :K]
    norms = np.linalg.norm(U, axis=1, keepdims=True)
    U = U / np.where(norms > 0, norms, 1.0)
    return kmeans(U, K, seed=seed).labels


def restrict(theta, nodes):
    """Keep off-diagonal entries between ``nodes`` only; the diagonal is kept whole."""
    mask = np.zeros(theta.shape, dtype=bool)
    mask[np.ix_(nodes, nodes)] = True
    np.fill_diagonal(mask, True)
    return np.where(mask, theta, 0.0)


def glasso_spectral(X, K, lambda1, seed=0, tol=glasso.DEFAULT_TOL, max_iter=glasso.DEFAULT_MAX_ITER):
    X = np.asarray(X, dtype=float)
    if X.shape[1] < K:
        raise InvalidInput(f"D={X.shape[1]} is smaller than K={K}")
    theta = _glasso_on(X, lambda1, tol, max_iter)
    if K == 1:
        return [theta], np.zeros(X.shape[1], dtype=int)
    parts = spectral_partition(mixture.offdiag_abs(theta), K, seed=seed)
    return [restrict(theta, np.flatnonzero(parts == k)) for k in range(K)], parts


def jgl_like(X, K, lambda1, seed=0, cfg=None):
    """MGL without the mutual exclusivity term."""
    if cfg is None:
        cfg = mixture.FitConfig(K=K, lambda1=lambda1, lambda2=0.0, seed=seed)
    else:
        cfg = mixture.FitConfig(**{**vars(cfg), "K": K, "lambda1": lambda1, "lambda2": 0.0, "seed": seed})
    return mixture.fit(X, cfg)
