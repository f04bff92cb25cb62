"""Scenario sweeps: synthesize, fit every method on the same data, score.

Each (sweep value, repeat) cell draws one data set with seed ``base + repeat``
and every method is run on it, so method comparisons are paired.
"""

import csv
import io as _io
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import baselines, mixture, synth
from .errors import MGLError
from .evaluation import DEFAULT_EPS, align_and_score

BENCH_METHODS = ("mgl", "jgl", "kmeans-glasso", "glasso-spectral")
RESULT_FIELDS = ("scenario", "sweep", "method", "repeat", "seed", "mean_f1", "status", "wall_ms")

DEFAULT_LAMBDA1 = mixture.DEFAULT_LAMBDA1
DEFAULT_LAMBDA2 = mixture.DEFAULT_LAMBDA2
# best value for the two-stage baselines on the same held-out seeds
DEFAULT_BASELINE_LAMBDA1 = 6.0


@dataclass(frozen=True)
class MethodParams:
    lambda1: float = DEFAULT_LAMBDA1
    lambda2: float = DEFAULT_LAMBDA2
    baseline_lambda1: float = DEFAULT_BASELINE_LAMBDA1
    tol: float = 1e-6
    max_iter: int = 500
    em_tol: float = 1e-5
    max_em_iter: int = 200


def run_method(method, X, K, seed, params=MethodParams()):
    """Fit one method; returns the list of K estimated precision matrices."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        if method in ("mgl", "jgl"):
            cfg = mixture.FitConfig(
                K=K,
                lambda1=params.lambda1,
                lambda2=params.lambda2 if method == "mgl" else 0.0,
                seed=seed,
                tol=params.tol,
                max_iter=params.max_iter,
                em_tol=params.em_tol,
                max_em_iter=params.max_em_iter,
            )
            if method == "jgl":
                model, _, _ = baselines.jgl_like(X, K, params.lambda1, seed=seed, cfg=cfg)
            else:
                model, _, _ = mixture.fit(X, cfg)
            return list(model.thetas)
        if method == "kmeans-glasso":
            thetas, _ = baselines.kmeans_glasso(
                X, K, params.baseline_lambda1, seed=seed, tol=params.tol, max_iter=params.max_iter
            )
            return thetas
        if method == "glasso-spectral":
            thetas, _ = baselines.glasso_spectral(
                X, K, params.baseline_lambda1, seed=seed, tol=params.tol, max_iter=params.max_iter
            )
            return thetas
    raise ValueError(f"unknown benchmark method {method!r}")


def parse_sweep(text):
    """``lo:hi:step`` (inclusive) or a comma-separated list."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"sweep range must be lo:hi:step, got {text!r}")
        lo, hi, step = (float(p) for p in parts)
        if step <= 0 or hi < lo:
            raise ValueError(f"empty sweep range {text!r}")
        n = int(np.floor((hi - lo) / step + 1e-9)) + 1
        values = [lo + i * step for i in range(n)]
    else:
        values = [float(p) for p in text.split(",") if p.strip()]
    if not values:
        raise ValueError("empty sweep")
    # round away binary noise such as 0.30000000000000004
    return [float(f"{v:.10g}") for v in values]


def _cell(args):
    scenario_id, sweep, repeat, seed, methods, params, eps = args
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        spec = synth.scenario(scenario_id, sweep, seed=seed)
    truth = synth.sample(spec)
    rows = []
    for method in methods:
        start = time.perf_counter()
        try:
            thetas = run_method(method, truth.X, spec.K, seed, params)
            score = align_and_score(thetas, truth.thetas_true, eps).mean_f1
            status = "ok"
        except (MGLError, np.linalg.LinAlgError, FloatingPointError) as exc:
            score, status = float("nan"), f"failed:{type(exc).__name__}"
        wall = (time.perf_counter() - start) * 1000.0
        rows.append(dict(scenario=scenario_id, sweep=sweep, method=method, repeat=repeat,
                         seed=seed, mean_f1=score, status=status, wall_ms=wall))
    return rows


def run_bench(scenario_id, sweeps, methods=BENCH_METHODS, repeats=10, seed=0,
              params=MethodParams(), eps=DEFAULT_EPS, jobs=1):
    """All (sweep, repeat) cells; rows sorted by scenario, sweep, method, repeat."""
    if repeats < 1:
        raise ValueError("repeats must be >= 1")
    for m in methods:
        if m not in BENCH_METHODS:
            raise ValueError(f"unknown method {m!r}; expected one of {', '.join(BENCH_METHODS)}")
    tasks = [(scenario_id, s, r, seed + r, tuple(methods), params, eps)
             for s in sweeps for r in range(repeats)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(_cell, tasks))
    else:
        chunks = [_cell(t) for t in tasks]
    rows = [row for chunk in chunks for row in chunk]
    order = {m: i for i, m in enumerate(methods)}
    rows.sort(key=lambda r: (r["scenario"], r["sweep"], order[r["method"]], r["repeat"]))
    return rows


def format_results(rows, timing=False):
    """Results CSV text. ``wall_ms`` stays empty unless ``timing`` is set,
    so that reruns are byte-identical."""
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(RESULT_FIELDS)
    for r in rows:
        w.writerow([
            r["scenario"],
            repr(float(r["sweep"])),
            r["method"],
            r["repeat"],
            r["seed"],
            "" if np.isnan(r["mean_f1"]) else repr(float(r["mean_f1"])),
            r["status"],
            f"{r['wall_ms']:.0f}" if timing else "",
        ])
    return buf.getvalue()


def parse_results(text):
    reader = csv.DictReader(_io.StringIO(text))
    if reader.fieldnames is None or tuple(reader.fieldnames) != RESULT_FIELDS:
        raise ValueError("not a results CSV (header mismatch)")
    rows = []
    for r in reader:
        rows.append(dict(
            scenario=int(r["scenario"]),
            sweep=float(r["sweep"]),
            method=r["method"],
            repeat=int(r["repeat"]),
            seed=int(r["seed"]),
            mean_f1=float(r["mean_f1"]) if r["mean_f1"] else float("nan"),
            status=r["status"],
            wall_ms=float(r["wall_ms"]) if r["wall_ms"] else float("nan"),
        ))
    return rows


def summarize(rows):
    """Average F1 per method over successful runs: (sweeps, {method: [mean per sweep]})."""
    sweeps = sorted({r["sweep"] for r in rows})
    methods = list(dict.fromkeys(r["method"] for r in rows))
    series = {}
    for m in methods:
        ys = []
        for s in sweeps:
            vals = [r["mean_f1"] for r in rows
                    if r["method"] == m and r["sweep"] == s and r["status"] == "ok"]
            ys.append(float(np.mean(vals)) if vals else 0.0)
        series[m] = ys
    return sweeps, series
