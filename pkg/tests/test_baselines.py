import numpy as np
import pytest

from mgl import baselines, mixture, synth
from mgl.errors import DegenerateComponent, InvalidInput
from mgl.bench import DEFAULT_BASELINE_LAMBDA1
from mgl.evaluation import align_and_score


def two_clouds(seed=0, n=100):
    rng = np.random.default_rng(seed)
    X = np.vstack([rng.normal(size=(n, 3)) + 20.0, rng.normal(size=(n, 3)) - 20.0])
    return X, np.repeat([0, 1], n)


def test_kmeans_separated_clouds():
    X, y = two_clouds()
    res = baselines.kmeans(X, 2, seed=1)
    assert len(set(zip(res.labels.tolist(), y.tolist()))) == 2


def test_kmeans_single_cluster_is_mean():
    X = np.random.default_rng(2).normal(size=(30, 4))
    res = baselines.kmeans(X, 1)
    np.testing.assert_allclose(res.centers[0], X.mean(axis=0), atol=1e-12)
    assert np.all(res.labels == 0)


def test_kmeans_square_corners():
    X = np.array([[0.0, 0.0], [0.0, 1.0], [1.0, 0.0], [1.0, 1.0]])
    res = baselines.kmeans(X, 4, seed=0)
    assert res.inertia == 0.0
    assert sorted(res.labels.tolist()) == [0, 1, 2, 3]


def test_kmeans_monotone_and_deterministic():
    X = np.random.default_rng(3).normal(size=(200, 2))
    a = baselines.kmeans(X, 5, seed=7)
    b = baselines.kmeans(X, 5, seed=7)
    assert np.all(np.diff(a.inertia_history) <= 1e-12)
    assert a.inertia >= 0
    np.testing.assert_array_equal(a.labels, b.labels)
    np.testing.assert_array_equal(a.centers, b.centers)


def test_kmeans_needs_enough_points():
    with pytest.raises(InvalidInput):
        baselines.kmeans(np.zeros((2, 2)), 3)


def test_kmeans_handles_duplicate_points():
    X = np.zeros((10, 2))
    X[-1] = 1.0
    res = baselines.kmeans(X, 3, seed=0)
    assert res.inertia == 0.0
    assert set(res.labels.tolist()) == {0, 1, 2}


def test_kmeans_glasso_single_cluster_is_plain_glasso():
    X = np.random.default_rng(4).normal(size=(100, 4))
    thetas, _ = baselines.kmeans_glasso(X, 1, 2.0)
    np.testing.assert_array_equal(thetas[0], baselines.plain_glasso(X, 2.0))


def test_kmeans_glasso_same_law_clusters_agree():
    diffs = []
    for seed in range(5):
        X = np.random.default_rng(10 + seed).normal(size=(2000, 4))
        thetas, _ = baselines.kmeans_glasso(X, 2, 1.0, seed=seed)
        diffs.append(np.mean(np.abs(thetas[0] - thetas[1])))
    assert max(diffs) < 0.2


def test_kmeans_glasso_separated_mixture_matches_oracle_labels():
    spec = synth.SynthSpec(p=8, K=2, n_per_component=(1000, 1000), seed=5)
    truth = synth.sample(spec)
    shifted = truth.X + np.where(truth.labels[:, None] == 0, 30.0, -30.0)
    km = baselines.kmeans(shifted, 2, seed=0)
    assert len(set(zip(km.labels.tolist(), truth.labels.tolist()))) == 2
    # the zero-mean model needs each group centered, so fit the groups on the unshifted rows
    thetas = [baselines.plain_glasso(truth.X[km.labels == k], DEFAULT_BASELINE_LAMBDA1) for k in range(2)]
    oracle = [baselines.plain_glasso(truth.X[truth.labels == k], DEFAULT_BASELINE_LAMBDA1) for k in range(2)]
    got = align_and_score(thetas, truth.thetas_true)
    want = align_and_score(oracle, truth.thetas_true)
    assert got.mean_f1 == want.mean_f1 and got.mean_f1 > 0.7


def test_kmeans_glasso_tiny_cluster():
    X = np.vstack([np.zeros((20, 2)), [[100.0, 100.0]]])
    with pytest.raises(DegenerateComponent):
        baselines.kmeans_glasso(X, 2, 0.1)


def test_normalized_laplacian_isolated_node():
    A = np.array([[0.0, 1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 0.0]])
    L = baselines.normalized_laplacian(A)
    np.testing.assert_allclose(L, [[1, -1, 0], [-1, 1, 0], [0, 0, 1]], atol=1e-15)


def test_spectral_partition_recovers_blocks():
    A = np.zeros((6, 6))
    A[:3, :3] = 0.5
    A[3:, 3:] = 0.8
    np.fill_diagonal(A, 0)
    parts = baselines.spectral_partition(A, 2)
    assert len(set(parts[:3])) == 1 and len(set(parts[3:])) == 1 and parts[0] != parts[3]


def test_glasso_spectral_block_diagonal():
    rng = np.random.default_rng(6)
    theta = np.eye(6) * 2.0
    theta[0, 1] = theta[1, 0] = theta[1, 2] = theta[2, 1] = 0.7
    theta[3, 4] = theta[4, 3] = theta[4, 5] = theta[5, 4] = -0.7
    X = rng.multivariate_normal(np.zeros(6), np.linalg.inv(theta), size=4000)
    est, parts = baselines.glasso_spectral(X, 2, 30.0, seed=0)
    assert set(parts[:3]) != set(parts[3:])
    assert mixture.mer_value(est) == 0.0
    assert align_and_score(est, [theta * np.kron(np.eye(2), np.ones((3, 3))), theta]).f1[0] >= 0.5


def test_glasso_spectral_single_part_is_full_estimate():
    X = np.random.default_rng(7).normal(size=(100, 4))
    est, _ = baselines.glasso_spectral(X, 1, 1.0)
    np.testing.assert_array_equal(est[0], baselines.plain_glasso(X, 1.0))


def test_complete_graph_cut_zeroes_cross_edges():
    theta = np.full((4, 4), 0.2) + np.eye(4)
    parts = baselines.spectral_partition(mixture.offdiag_abs(theta), 2, seed=3)
    subs = [baselines.restrict(theta, np.flatnonzero(parts == k)) for k in range(2)]
    for a in range(4):
        for b in range(4):
            if a != b and parts[a] != parts[b]:
                assert subs[0][a, b] == subs[1][a, b] == 0.0
    np.testing.assert_array_equal(np.diag(subs[0]), np.diag(theta))
    assert mixture.mer_value(subs) == 0.0


def test_glasso_spectral_too_many_parts():
    with pytest.raises(InvalidInput):
        baselines.glasso_spectral(np.random.default_rng(0).normal(size=(10, 2)), 3, 0.1)


def test_jgl_like_is_fit_without_mer():
    truth = synth.sample(synth.scenario(1, 200, seed=1))
    a, ra, _ = baselines.jgl_like(truth.X, 2, 3.0, seed=4)
    b, rb, _ = mixture.fit(truth.X, mixture.FitConfig(K=2, lambda1=3.0, lambda2=0.0, seed=4))
    np.testing.assert_array_equal(a.thetas, b.thetas)
    np.testing.assert_array_equal(a.phi, b.phi)
    np.testing.assert_array_equal(ra, rb)


def test_baselines_deterministic():
    truth = synth.sample(synth.scenario(2, 0.4, seed=2))
    for fn in (baselines.kmeans_glasso, baselines.glasso_spectral):
        a, _ = fn(truth.X, 2, 3.0, seed=1)
        b, _ = fn(truth.X, 2, 3.0, seed=1)
        np.testing.assert_array_equal(np.array(a), np.array(b))
