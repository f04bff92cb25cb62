"""Command-line interface.

Exit codes: 0 success, 1 I/O failure, 2 usage or validation error,
3 numerical failure (collapsed component, non-positive-definite input).
Errors are reported on stderr as one ``mgl: error: kind=... message=...`` line.
"""

import argparse
import csv
import json
import sys
import warnings
from pathlib import Path

import numpy as np

from . import baselines, bench, mixture, synth
from . import io as mio
from .errors import DegenerateComponent, InvalidInput, MGLError, NotPositiveDefinite, ParseError
from .evaluation import DEFAULT_EPS, align_and_score
from .render import CurveSpec, HeatmapSpec, render_curves, render_heatmap

EXIT_OK, EXIT_IO, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3


class CLIError(Exception):
    def __init__(self, code, kind, message):
        self.code = code
        self.kind = kind
        super().__init__(message)


def _fail(code, kind, message):
    raise CLIError(code, kind, message)


def _float_list(text):
    return [float(v) for v in text.split(",") if v.strip()]


def _int_list(text):
    return [int(v) for v in text.split(",") if v.strip()]


# synth ----------------------------------------------------------------------

def cmd_synth(args):
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        if args.scenario is not None:
            if args.scenario not in synth.SCENARIOS:
                _fail(EXIT_USAGE, "InvalidInput", f"unknown scenario {args.scenario}")
            if args.sweep is None:
                _fail(EXIT_USAGE, "InvalidInput", "--scenario requires --sweep")
            spec = synth.scenario(args.scenario, args.sweep, seed=args.seed)
        else:
            if args.p is None or args.k is None or args.n is None:
                _fail(EXIT_USAGE, "InvalidInput", "give --scenario/--sweep or all of --p, --k, --n")
            n = _int_list(args.n)
            if len(n) == 1 and args.k > 1:
                n = list(synth.split_evenly(n[0], args.k))
            kw = dict(p=args.p, K=args.k, n_per_component=n, noise_sigma=args.sigma, seed=args.seed)
            if args.blocks is not None:
                kw["blocks"] = args.blocks
            if args.density is not None:
                kw["density"] = args.density
            if args.value_range is not None:
                kw["value_range"] = tuple(_float_list(args.value_range))
            spec = synth.SynthSpec(**kw)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    truth = synth.sample(spec)
    out = Path(args.out)
    mio.write_ground_truth(out, truth)
    summary = {
        "p": spec.p, "K": spec.K, "N": spec.N, "n_per_component": list(spec.n_per_component),
        "noise_sigma": spec.noise_sigma, "blocks": spec.blocks, "density": spec.density,
        "value_range": list(spec.value_range), "seed": spec.seed,
        "block_assignment": {str(k): [list(p) for p in v] for k, v in spec.block_assignment.items()},
    }
    (out / "spec.json").write_text(json.dumps(summary, indent=1) + "\n", encoding="utf-8")
    print(f"p={spec.p} K={spec.K} N={spec.N} sigma={spec.noise_sigma} seed={spec.seed} -> {out}")
    return EXIT_OK


# fit ------------------------------------------------------------------------

def fit_from_config(cfg, X):
    """Run the configured method; returns (model, trace rows, metadata)."""
    n, d = X.shape
    params = dict(tol=cfg.tol, max_iter=cfg.max_iter)
    meta = {"method": cfg.method, "lambda1": cfg.lambda1, "lambda2": cfg.lambda2,
            "seed": cfg.seed, "N": n}
    if cfg.method in ("mgl", "jgl"):
        fc = mixture.FitConfig(K=cfg.K, lambda1=cfg.lambda1,
                               lambda2=cfg.lambda2 if cfg.method == "mgl" else 0.0,
                               seed=cfg.seed, em_tol=cfg.em_tol, max_em_iter=cfg.max_em_iter, **params)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            model, _, trace = mixture.fit(X, fc)
        meta.update(em_iterations=trace.em_iterations, converged=trace.converged)
        return model, trace.rows(), meta
    if cfg.method == "glasso":
        theta = baselines.plain_glasso(X, cfg.lambda1, **params)
        model = mixture.MixtureModel([1.0], theta[None])
    elif cfg.method == "kmeans-glasso":
        thetas, km = baselines.kmeans_glasso(X, cfg.K, cfg.lambda1, seed=cfg.seed, **params)
        counts = np.bincount(km.labels, minlength=cfg.K).astype(float)
        model = mixture.MixtureModel(counts / counts.sum(), np.stack(thetas))
    else:
        thetas, _ = baselines.glasso_spectral(X, cfg.K, cfg.lambda1, seed=cfg.seed, **params)
        model = mixture.MixtureModel(np.full(cfg.K, 1.0 / cfg.K), np.stack(thetas))
    _, nll = mixture.e_step(X, model)
    mer = mixture.mer_value(model.thetas)
    obj = nll + cfg.lambda1 * mixture.l1_offdiag(model.thetas) + cfg.lambda2 * mer
    return model, [(obj, nll, mer, 0.0)], meta


def write_trace(path, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["iteration", "objective", "nll", "mer", "max_change"])
        for i, (obj, nll, mer, ch) in enumerate(rows, start=1):
            w.writerow([i, repr(float(obj)), repr(float(nll)), repr(float(mer)), repr(float(ch))])


def cmd_fit(args):
    cfg = mio.read_run_config(args.config)
    if args.input:
        cfg.input = args.input
    if args.output:
        cfg.output = args.output
    if not cfg.input:
        _fail(EXIT_USAGE, "MissingKey", "no input data path (config 'input' or --input)")
    out = Path(cfg.output or ".")
    X = mio.read_csv_matrix(cfg.input)
    model, rows, meta = fit_from_config(cfg, X)
    out.mkdir(parents=True, exist_ok=True)
    mio.write_model(out / "model.json", model, meta)
    write_trace(out / "trace.csv", rows)
    print(f"method={cfg.method} K={model.K} D={model.D} objective={rows[-1][0]:.6f} -> {out}")
    return EXIT_OK


# eval -----------------------------------------------------------------------

def cmd_eval(args):
    model = mio.read_model(args.model)
    truth = mio.read_ground_truth(args.truth)
    if model.K != len(truth.thetas_true):
        _fail(EXIT_USAGE, "InvalidInput",
              f"model has K={model.K} components, truth has {len(truth.thetas_true)}")
    if model.D != truth.thetas_true.shape[1]:
        _fail(EXIT_USAGE, "InvalidInput",
              f"model has D={model.D}, truth has D={truth.thetas_true.shape[1]}")
    report = align_and_score(model.thetas, truth.thetas_true, args.eps)
    out = Path(args.out) if args.out else Path(args.model).with_name("report.json")
    mio.write_report(out, report, extra={"eps": args.eps})
    print(f"mean_f1={report.mean_f1:.4f} f1={[round(v, 4) for v in report.f1]} "
          f"permutation={report.permutation} overlap={report.overlap} -> {out}")
    return EXIT_OK


# bench ----------------------------------------------------------------------

def cmd_bench(args):
    if args.scenario not in synth.SCENARIOS:
        _fail(EXIT_USAGE, "InvalidInput", f"unknown scenario {args.scenario}")
    if args.repeats < 1:
        _fail(EXIT_USAGE, "InvalidInput", "--repeats must be >= 1")
    try:
        sweeps = bench.parse_sweep(args.sweep)
    except ValueError as exc:
        _fail(EXIT_USAGE, "InvalidInput", str(exc))
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    bad = [m for m in methods if m not in bench.BENCH_METHODS]
    if bad or not methods:
        _fail(EXIT_USAGE, "InvalidInput", f"unknown methods {bad}")
    params = bench.MethodParams(
        lambda1=args.lambda1, lambda2=args.lambda2, baseline_lambda1=args.baseline_lambda1,
        tol=args.tol, em_tol=args.em_tol, max_em_iter=args.max_em_iter,
    )
    rows = bench.run_bench(args.scenario, sweeps, methods, args.repeats, args.seed,
                           params, args.eps, args.jobs)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "results.csv").write_text(bench.format_results(rows, timing=args.timing), encoding="utf-8")
    xs, series = bench.summarize(rows)
    if len(xs) >= 2:
        label = "N" if synth.SCENARIOS[args.scenario]["N"] is None else "noise sigma"
        svg = render_curves(CurveSpec(xs, series, x_label=label, y_label="F1",
                                      title=f"Scenario {args.scenario}"))
        (out / "curves.svg").write_text(svg, encoding="utf-8")
    failed = sum(r["status"] != "ok" for r in rows)
    for m, ys in series.items():
        print(f"{m:16s} " + " ".join(f"{y:.3f}" for y in ys))
    print(f"{len(rows)} runs, {failed} failed -> {out}")
    return EXIT_NUMERIC if failed == len(rows) else EXIT_OK


# render ---------------------------------------------------------------------

def cmd_render(args):
    path = Path(args.input)
    kind = args.kind or ("curves" if path.suffix.lower() == ".csv" else "heatmap")
    out = Path(args.out) if args.out else path.parent
    out.mkdir(parents=True, exist_ok=True)
    if kind == "heatmap":
        try:
            model = mio.read_model(path)
        except (ParseError, UnicodeDecodeError) as exc:
            _fail(EXIT_USAGE, "ParseError", f"{path} is not a model file: {exc}")
        for k, theta in enumerate(model.thetas):
            svg = render_heatmap(HeatmapSpec(theta, cell_size=args.cell_size, clamp=args.clamp,
                                             title=f"component {k}"))
            (out / f"heatmap_{k}.svg").write_text(svg, encoding="utf-8")
        print(f"{model.K} heatmaps -> {out}")
        return EXIT_OK
    try:
        rows = bench.parse_results(path.read_text(encoding="utf-8"))
    except (ValueError, KeyError) as exc:
        _fail(EXIT_USAGE, "ParseError", f"{path} is not a results CSV: {exc}")
    if not rows:
        _fail(EXIT_USAGE, "InvalidInput", f"{path} has no result rows")
    xs, series = bench.summarize(rows)
    if len(xs) < 2:
        _fail(EXIT_USAGE, "InvalidInput", "curves need at least two sweep values")
    svg = render_curves(CurveSpec(xs, series, y_label="F1", title=path.stem))
    (out / "curves.svg").write_text(svg, encoding="utf-8")
    print(f"curves -> {out / 'curves.svg'}")
    return EXIT_OK


# wiring ---------------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog="mgl", description="Gaussian mixture graphical lasso toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("synth", help="generate a synthetic ground truth")
    s.add_argument("--scenario", type=int)
    s.add_argument("--sweep", type=float, help="N (scenarios 1, 3) or sigma (2, 4)")
    s.add_argument("--p", type=int)
    s.add_argument("--k", type=int)
    s.add_argument("--n", help="samples per component, comma separated (or one total)")
    s.add_argument("--sigma", type=float, default=0.0)
    s.add_argument("--blocks", type=int)
    s.add_argument("--density", type=float)
    s.add_argument("--value-range", help="lo,hi")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("-o", "--out", required=True)
    s.set_defaults(func=cmd_synth)

    f = sub.add_parser("fit", help="fit a model from a run config")
    f.add_argument("config")
    f.add_argument("--input", help="override the config's input CSV")
    f.add_argument("-o", "--output", help="override the config's output directory")
    f.set_defaults(func=cmd_fit)

    e = sub.add_parser("eval", help="score a model against a ground-truth directory")
    e.add_argument("model")
    e.add_argument("truth")
    e.add_argument("--eps", type=float, default=DEFAULT_EPS)
    e.add_argument("-o", "--out")
    e.set_defaults(func=cmd_eval)

    b = sub.add_parser("bench", help="run a scenario sweep")
    b.add_argument("--scenario", type=int, required=True)
    b.add_argument("--sweep", required=True, help="lo:hi:step or comma list")
    b.add_argument("--methods", default=",".join(bench.BENCH_METHODS))
    b.add_argument("--repeats", type=int, default=10)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--lambda1", type=float, default=bench.DEFAULT_LAMBDA1)
    b.add_argument("--lambda2", type=float, default=bench.DEFAULT_LAMBDA2)
    b.add_argument("--baseline-lambda1", type=float, default=bench.DEFAULT_BASELINE_LAMBDA1)
    b.add_argument("--tol", type=float, default=1e-6)
    b.add_argument("--em-tol", type=float, default=1e-5)
    b.add_argument("--max-em-iter", type=int, default=200)
    b.add_argument("--eps", type=float, default=DEFAULT_EPS)
    b.add_argument("--jobs", type=int, default=1)
    b.add_argument("--timing", action="store_true", help="fill the wall_ms column")
    b.add_argument("-o", "--out", default="bench_out")
    b.set_defaults(func=cmd_bench)

    r = sub.add_parser("render", help="render heatmaps (model file) or curves (results CSV)")
    r.add_argument("input")
    r.add_argument("--kind", choices=("heatmap", "curves"))
    r.add_argument("--cell-size", type=int, default=20)
    r.add_argument("--clamp", type=float)
    r.add_argument("-o", "--out")
    r.set_defaults(func=cmd_render)
    return p


def _report(code, kind, message):
    message = " ".join(str(message).split())
    print(f"mgl: error: kind={kind} message={message}", file=sys.stderr)
    return code


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CLIError as exc:
        return _report(exc.code, exc.kind, exc)
    except DegenerateComponent as exc:
        return _report(EXIT_NUMERIC, "DegenerateComponent", f"component={exc.component} {exc}")
    except NotPositiveDefinite as exc:
        return _report(EXIT_NUMERIC, "NotPositiveDefinite", exc)
    except (MGLError, InvalidInput) as exc:
        return _report(EXIT_USAGE, type(exc).__name__, exc)
    except OSError as exc:
        return _report(EXIT_IO, type(exc).__name__, exc)


if __name__ == "__main__":
    sys.exit(main())
