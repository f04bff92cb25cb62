import math

import pytest

from mgl import bench


def test_parse_sweep_range_inclusive():
    assert bench.parse_sweep("0.1:0.8:0.1") == [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8]
    assert bench.parse_sweep("100:520:60") == [100, 160, 220, 280, 340, 400, 460, 520]


def test_parse_sweep_list_and_errors():
    assert bench.parse_sweep("500, 250") == [500.0, 250.0]
    for bad in ("1:2", "2:1:0.5", "1:2:0", ""):
        with pytest.raises(ValueError):
            bench.parse_sweep(bad)


def test_results_round_trip():
    rows = [
        dict(scenario=2, sweep=0.3, method="mgl", repeat=0, seed=0, mean_f1=2 / 3, status="ok", wall_ms=12.3),
        dict(scenario=2, sweep=0.3, method="jgl", repeat=0, seed=0, mean_f1=float("nan"),
             status="failed:DegenerateComponent", wall_ms=1.0),
    ]
    text = bench.format_results(rows)
    back = bench.parse_results(text)
    assert back[0]["mean_f1"] == 2 / 3
    assert math.isnan(back[1]["mean_f1"]) and math.isnan(back[0]["wall_ms"])
    assert bench.format_results(back) == text
    assert bench.parse_results(bench.format_results(rows, timing=True))[0]["wall_ms"] == 12.0


def test_summarize_skips_failures():
    rows = [
        dict(scenario=1, sweep=100.0, method="mgl", repeat=r, seed=r, mean_f1=f, status=s, wall_ms=0.0)
        for r, (f, s) in enumerate([(0.5, "ok"), (float("nan"), "failed:X"), (1.0, "ok")])
    ]
    xs, series = bench.summarize(rows)
    assert xs == [100.0] and series == {"mgl": [0.75]}


def test_run_bench_paired_and_deterministic():
    params = bench.MethodParams(max_em_iter=20)
    a = bench.run_bench(1, [200.0], ["mgl", "kmeans-glasso"], repeats=2, seed=3, params=params)
    b = bench.run_bench(1, [200.0], ["mgl", "kmeans-glasso"], repeats=2, seed=3, params=params)
    assert bench.format_results(a) == bench.format_results(b)
    assert [(r["method"], r["repeat"], r["seed"]) for r in a] == [
        ("mgl", 0, 3), ("mgl", 1, 4), ("kmeans-glasso", 0, 3), ("kmeans-glasso", 1, 4)]


def test_run_bench_rejects_unknown_method():
    with pytest.raises(ValueError):
        bench.run_bench(1, [200.0], ["pca"])
