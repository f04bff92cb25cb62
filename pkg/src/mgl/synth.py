"""Synthetic mixtures with block-structured, mutually exclusive precision matrices."""

import itertools
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import solve_triangular

from .errors import InvalidInput
from .linalg import cholesky

DEFAULT_BLOCKS = 4
DEFAULT_DENSITY = 1.0
DEFAULT_VALUE_RANGE = (1.5, 3.0)

# (dimension, components, fixed N or None, fixed sigma or None, sweep range)
SCENARIOS = {
    1: dict(p=8, K=2, N=None, sigma=0.0, sweep=(100, 520)),
    2: dict(p=8, K=2, N=500, sigma=None, sweep=(0.1, 0.8)),
    3: dict(p=20, K=2, N=None, sigma=0.0, sweep=(200, 1000)),
    4: dict(p=20, K=2, N=1000, sigma=None, sweep=(0.1, 0.8)),
}


def tournament_rounds(n_blocks):
    """Round-robin schedule (circle method): each round is a set of disjoint block pairs."""
    teams = list(range(n_blocks))
    if n_blocks % 2:
        teams.append(None)
    m = len(teams)
    rounds = []
    for _ in range(m - 1):
        pairs = []
        for i in range(m // 2):
            a, b = teams[i], teams[m - 1 - i]
            if a is not None and b is not None:
                pairs.append((min(a, b), max(a, b)))
        rounds.append(sorted(pairs))
        teams = [teams[0], teams[-1]] + teams[1:-1]
    return rounds


def round_robin_blocks(n_blocks, K):
    """Give component k the k-th round of a round-robin schedule over the blocks.

    Pairs within a component are disjoint, so every node touches exactly one
    other block. With more components than rounds the extra components stay
    empty (identity precision).
    """
    rounds = tournament_rounds(n_blocks) if n_blocks > 1 else []
    return {k: (rounds[k] if k < len(rounds) else []) for k in range(K)}


@dataclass
class SynthSpec:
    p: int
    K: int
    n_per_component: tuple
    noise_sigma: float = 0.0
    blocks: int = DEFAULT_BLOCKS
    density: float = DEFAULT_DENSITY
    value_range: tuple = DEFAULT_VALUE_RANGE
    block_assignment: dict = None
    seed: int = 0

    def __post_init__(self):
        self.n_per_component = tuple(int(n) for n in self.n_per_component)
        self.value_range = tuple(float(v) for v in self.value_range)
        if self.p < 1 or self.K < 1:
            raise InvalidInput("p and K must be positive")
        if self.blocks < 1 or self.p % self.blocks:
            raise InvalidInput(f"p={self.p} is not divisible into {self.blocks} blocks")
        if len(self.n_per_component) != self.K or min(self.n_per_component) < 1:
            raise InvalidInput("need one positive sample count per component")
        if not 0 < self.density <= 1:
            raise InvalidInput("density must lie in (0, 1]")
        lo, hi = self.value_range
        if not 0 < lo <= hi:
            raise InvalidInput("value_range must satisfy 0 < lo <= hi")
        if self.noise_sigma < 0:
            raise InvalidInput("noise_sigma must be non-negative")
        if self.block_assignment is None:
            self.block_assignment = round_robin_blocks(self.blocks, self.K)
        seen = set()
        for k, pairs in self.block_assignment.items():
            if not 0 <= k < self.K:
                raise InvalidInput(f"block assignment names unknown component {k}")
            for I, J in pairs:
                key = (min(I, J), max(I, J))
                if I == J or not (0 <= I < self.blocks and 0 <= J < self.blocks):
                    raise InvalidInput(f"invalid off-diagonal block pair {(I, J)}")
                if key in seen:
                    raise InvalidInput(f"block pair {key} assigned to more than one component")
                seen.add(key)

    @property
    def N(self):
        return sum(self.n_per_component)

    def block_indices(self, b):
        size = self.p // self.blocks
        return np.arange(b * size, (b + 1) * size)


@dataclass
class GroundTruth:
    thetas_true: np.ndarray
    labels: np.ndarray
    X: np.ndarray
    spec: SynthSpec = field(default=None, repr=False)


def make_precision(spec, k):
    rng = np.random.default_rng([spec.seed, 0, k])
    lo, hi = spec.value_range
    theta = np.zeros((spec.p, spec.p))
    for I, J in spec.block_assignment.get(k, ()):
        rows, cols = spec.block_indices(I), spec.block_indices(J)
        shape = (rows.size, cols.size)
        keep = rng.random(shape) < spec.density
        values = rng.uniform(lo, hi, size=shape) * rng.choice([-1.0, 1.0], size=shape)
        theta[np.ix_(rows, cols)] = np.where(keep, values, 0.0)
    theta = theta + theta.T
    # strict diagonal dominance keeps it positive definite without touching the support
    np.fill_diagonal(theta, 1.0 + np.abs(theta).sum(axis=1))
    return theta


def sample(spec):
    thetas = np.stack([make_precision(spec, k) for k in range(spec.K)])
    chunks, labels = [], []
    for k in range(spec.K):
        rng = np.random.default_rng([spec.seed, 1, k])
        z = rng.standard_normal((spec.p, spec.n_per_component[k]))
        L = cholesky(thetas[k]).lower
        # L^T y = z  =>  cov(y) = inv(L L^T)
        chunks.append(solve_triangular(L, z, lower=True, trans="T").T)
        labels.append(np.full(spec.n_per_component[k], k))
    X = np.concatenate(chunks)
    y = np.concatenate(labels)
    rng = np.random.default_rng([spec.seed, 2])
    if spec.noise_sigma > 0:
        X = X + spec.noise_sigma * rng.standard_normal(X.shape)
    order = rng.permutation(X.shape[0])
    return GroundTruth(thetas, y[order], X[order], spec)


def split_evenly(N, K):
    base, extra = divmod(int(N), K)
    return tuple(base + (1 if k < extra else 0) for k in range(K))


def scenario(scenario_id, sweep_value, seed=0, **overrides):
    """SynthSpec for one of the four benchmark scenarios at a sweep point.

    Scenarios 1 and 3 sweep the total sample size N; 2 and 4 sweep the noise
    standard deviation. Values outside the published range only warn.
    """
    if scenario_id not in SCENARIOS:
        raise InvalidInput(f"unknown scenario {scenario_id!r}; expected one of 1-4")
    sc = SCENARIOS[scenario_id]
    lo, hi = sc["sweep"]
    if not lo <= sweep_value <= hi:
        warnings.warn(
            f"sweep value {sweep_value} outside scenario {scenario_id} range [{lo}, {hi}]",
            stacklevel=2,
        )
    if sc["N"] is None:
        if sweep_value != int(sweep_value) or sweep_value < sc["K"]:
            raise InvalidInput(f"scenario {scenario_id} sweeps N; got {sweep_value}")
        N, sigma = int(sweep_value), sc["sigma"]
    else:
        if sweep_value < 0:
            raise InvalidInput("noise sigma must be non-negative")
        N, sigma = sc["N"], float(sweep_value)
    kw = dict(
        p=sc["p"],
        K=sc["K"],
        n_per_component=split_evenly(N, sc["K"]),
        noise_sigma=sigma,
        seed=seed,
    )
    kw.update(overrides)
    return SynthSpec(**kw)
