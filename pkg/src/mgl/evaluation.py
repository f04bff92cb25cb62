"""Edge-detection scoring with component alignment."""

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInput

DEFAULT_EPS = 1e-4
MAX_ALIGN_K = 8


def support(theta, eps=DEFAULT_EPS):
    """Edges ``(a, b)`` with ``a < b`` and ``|theta[a, b]| > eps``."""
    if eps < 0:
        raise InvalidInput("eps must be non-negative")
    theta = np.asarray(theta)
    a, b = np.nonzero(np.triu(np.abs(theta) > eps, k=1))
    return frozenset(zip(a.tolist(), b.tolist()))


def f1(detected, truth):
    """F1 of a detected edge set against the true one.

    Both empty scores 1; no correct detections scores 0.
    """
    detected, truth = set(detected), set(truth)
    if not detected and not truth:
        return 1.0
    hits = len(detected & truth)
    if hits == 0:
        return 0.0
    return 2.0 * hits / (len(detected) + len(truth))


def overlap_count(edge_sets):
    """Number of (component pair, edge) coincidences among estimated supports."""
    total = 0
    for a, b in itertools.combinations(edge_sets, 2):
        total += len(set(a) & set(b))
    return total


@dataclass
class EvalReport:
    f1: list
    mean_f1: float
    permutation: list
    overlap: int

    def to_dict(self):
        return {
            "f1": [float(v) for v in self.f1],
            "mean_f1": float(self.mean_f1),
            "permutation": [int(v) for v in self.permutation],
            "overlap": int(self.overlap),
        }

    @classmethod
    def from_dict(cls, d):
        return cls([float(v) for v in d["f1"]], float(d["mean_f1"]),
                   [int(v) for v in d["permutation"]], int(d["overlap"]))


def align_and_score(estimated, truth, eps=DEFAULT_EPS):
    """Score estimated components against the truth under the best matching.

    ``permutation[t]`` is the index of the estimated component matched to true
    component ``t``. All K! matchings are tried in lexicographic order and the
    first one with the highest mean F1 wins.
    """
    estimated = [np.asarray(t) for t in estimated]
    truth = [np.asarray(t) for t in truth]
    K = len(truth)
    if len(estimated) != K or K < 1:
        raise InvalidInput(f"component count mismatch: {len(estimated)} estimated vs {K} true")
    if K > MAX_ALIGN_K:
        raise InvalidInput(f"alignment supports at most {MAX_ALIGN_K} components, got {K}")
    dims = {t.shape for t in estimated + truth}
    if len(dims) != 1:
        raise InvalidInput(f"matrix shapes differ: {sorted(dims)}")

    est_sets = [support(t, eps) for t in estimated]
    true_sets = [support(t, eps) for t in truth]
    table = np.array([[f1(e, g) for e in est_sets] for g in true_sets])

    best, best_perm = -1.0, None
    for perm in itertools.permutations(range(K)):
        score = table[np.arange(K), perm].mean()
        if score > best:
            best, best_perm = score, perm
    scores = [float(table[t, best_perm[t]]) for t in range(K)]
    return EvalReport(scores, float(np.mean(scores)), list(best_perm), overlap_count(est_sets))
