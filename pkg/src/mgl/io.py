"""Reading and writing matrices, models, reports, ground truths and run configs.

Formats
-------
CSV
    Comma separated, LF line endings, '.' decimal point. Floats are written
    with ``repr`` so they read back bit-identically. An optional header row
    is recognized when its first field is not a number.
Model file
    JSON object ``{"format": "mgl-model/1", "K", "D", "phi", "thetas",
    "metadata"}``; ``thetas`` is a list of K row-major D x D nested lists.
Report file
    JSON object ``{"format": "mgl-report/1", ...}`` holding an EvalReport.
Run config
    ``key = value`` lines, ``#`` comments, optional ``[method]`` sections
    whose keys apply only when ``method`` matches the section name.

Concurrent writes to the same path are not supported.
"""

import csv
import json
import math
import os
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import (
    ConfigError,
    FormatVersionMismatch,
    InvalidInput,
    MissingKey,
    ParseError,
    RaggedRows,
    UnknownKey,
)
from .evaluation import EvalReport
from .mixture import DEFAULT_LAMBDA1, DEFAULT_LAMBDA2, MixtureModel
from .synth import GroundTruth

MODEL_FORMAT = "mgl-model/1"
REPORT_FORMAT = "mgl-report/1"
METHODS = ("mgl", "jgl", "kmeans-glasso", "glasso-spectral", "glasso")


def _is_number(token):
    try:
        float(token)
    except ValueError:
        return False
    return True


def parse_csv_matrix(text):
    rows = []
    width = None
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    for lineno, line in enumerate(lines, start=1):
        line = line.rstrip("\r")
        if not line.strip():
            continue
        fields = next(csv.reader([line]))
        if lineno == 1 and rows == [] and fields and not _is_number(fields[0].strip()):
            width = len(fields)
            continue
        if width is None:
            width = len(fields)
        elif len(fields) != width:
            raise RaggedRows(lineno, width, len(fields))
        row = []
        for col, tok in enumerate(fields, start=1):
            tok = tok.strip()
            try:
                value = float(tok)
            except ValueError:
                raise ParseError(f"not a number: {tok!r}", lineno, col, tok) from None
            if not math.isfinite(value):
                raise ParseError(f"non-finite value: {tok!r}", lineno, col, tok)
            row.append(value)
        rows.append(row)
    if not rows:
        raise ParseError("no numeric rows found")
    return np.array(rows, dtype=float)


def read_csv_matrix(path):
    with open(path, newline="", encoding="utf-8") as fh:
        return parse_csv_matrix(fh.read())


def format_csv_matrix(m, header=None):
    m = np.atleast_2d(np.asarray(m))
    out = []
    if header:
        out.append(",".join(header))
    for row in m:
        out.append(",".join(repr(float(v)) if m.dtype.kind == "f" else str(int(v)) for v in row))
    return "\n".join(out) + "\n"


def write_csv_matrix(path, m, header=None):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(format_csv_matrix(m, header))


def _load_json(path, expected_format):
    text = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(doc, dict):
        raise ParseError("top-level value must be an object", 1, 1)
    if doc.get("format") != expected_format:
        raise FormatVersionMismatch(doc.get("format"), expected_format)
    return doc


def model_to_dict(model, metadata=None):
    return {
        "format": MODEL_FORMAT,
        "K": model.K,
        "D": model.D,
        "phi": [float(v) for v in model.phi],
        "thetas": [[[float(v) for v in row] for row in t] for t in model.thetas],
        "metadata": metadata or {},
    }


def write_model(path, model, metadata=None):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(model_to_dict(model, metadata), fh, indent=1)
        fh.write("\n")


def read_model(path, with_metadata=False):
    doc = _load_json(path, MODEL_FORMAT)
    try:
        K, D = doc["K"], doc["D"]
        phi = np.array(doc["phi"], dtype=float)
        thetas = np.array(doc["thetas"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed model file: {exc}") from None
    if not (isinstance(K, int) and isinstance(D, int)) or K < 1 or D < 1:
        raise ParseError(f"K and D must be positive integers, got K={K!r}, D={D!r}")
    if phi.shape != (K,) or thetas.shape != (K, D, D):
        raise ParseError(f"array shapes {phi.shape}, {thetas.shape} disagree with K={K}, D={D}")
    try:
        model = MixtureModel(phi, thetas)
    except InvalidInput as exc:
        raise ParseError(f"invalid model: {exc}") from None
    if with_metadata:
        return model, doc.get("metadata", {})
    return model


def write_report(path, report, extra=None):
    doc = {"format": REPORT_FORMAT, **report.to_dict()}
    if extra:
        doc["extra"] = extra
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


def read_report(path):
    doc = _load_json(path, REPORT_FORMAT)
    try:
        return EvalReport.from_dict(doc)
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed report file: {exc}") from None


def write_ground_truth(directory, truth):
    """X.csv, labels.csv and theta_true_<k>.csv inside ``directory``."""
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    write_csv_matrix(d / "X.csv", truth.X)
    write_csv_matrix(d / "labels.csv", np.asarray(truth.labels, dtype=int)[:, None])
    for k, theta in enumerate(truth.thetas_true):
        write_csv_matrix(d / f"theta_true_{k}.csv", theta)


def read_ground_truth(directory):
    d = Path(directory)
    thetas = []
    k = 0
    while (d / f"theta_true_{k}.csv").exists():
        thetas.append(read_csv_matrix(d / f"theta_true_{k}.csv"))
        k += 1
    if not thetas:
        raise ParseError(f"no theta_true_0.csv in {d}")
    X = read_csv_matrix(d / "X.csv")
    labels = read_csv_matrix(d / "labels.csv")
    if labels.shape[1] != 1 or np.any(labels != np.round(labels)):
        raise ParseError("labels.csv must hold one integer per row")
    return GroundTruth(np.stack(thetas), labels[:, 0].astype(int), X)


@dataclass
class RunConfig:
    method: str
    K: int
    lambda1: float = DEFAULT_LAMBDA1
    lambda2: float = DEFAULT_LAMBDA2
    seed: int = 0
    tol: float = 1e-6
    max_iter: int = 500
    em_tol: float = 1e-5
    max_em_iter: int = 200
    input: str = None
    output: str = None
    source: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.method not in METHODS:
            raise ConfigError(f"unknown method {self.method!r}; expected one of {', '.join(METHODS)}")
        if self.method == "glasso":
            self.K = 1
        if self.K < 1:
            raise ConfigError("K must be >= 1")
        if self.lambda1 < 0 or self.lambda2 < 0:
            raise ConfigError("lambda1 and lambda2 must be non-negative")
        if self.tol <= 0 or self.em_tol <= 0 or self.max_iter < 1 or self.max_em_iter < 1:
            raise ConfigError("tolerances must be positive and iteration limits >= 1")


_CONFIG_TYPES = {
    "method": str,
    "K": int,
    "lambda1": float,
    "lambda2": float,
    "seed": int,
    "tol": float,
    "max_iter": int,
    "em_tol": float,
    "max_em_iter": int,
    "input": str,
    "output": str,
}


def parse_run_config(text, base_dir=None):
    top, sections = {}, {}
    current = top
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            name = line[1:-1].strip()
            if name not in METHODS:
                raise ConfigError(f"unknown section [{name}] (line {lineno})")
            current = sections.setdefault(name, {})
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value' on line {lineno}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in _CONFIG_TYPES:
            raise UnknownKey(key, lineno)
        try:
            current[key] = (lineno, _CONFIG_TYPES[key](value))
        except ValueError:
            raise ConfigError(f"bad value for {key!r} on line {lineno}: {value!r}") from None

    if "method" not in top:
        raise MissingKey("method")
    method = top["method"][1]
    values = {k: v for k, (_, v) in top.items()}
    values.update({k: v for k, (_, v) in sections.get(method, {}).items()})
    if "method" in sections.get(method, {}):
        raise ConfigError("'method' may not be set inside a section")
    if "K" not in values and method != "glasso":
        raise MissingKey("K")
    values.setdefault("K", 1)
    if base_dir is not None:
        for key in ("input", "output"):
            if values.get(key) and not os.path.isabs(values[key]):
                values[key] = str(Path(base_dir) / values[key])
    return RunConfig(**values, source=dict(values))


def read_run_config(path):
    return parse_run_config(Path(path).read_text(encoding="utf-8"), base_dir=Path(path).parent)


def format_run_config(cfg):
    lines = []
    for key in _CONFIG_TYPES:
        value = getattr(cfg, key)
        if value is not None:
            lines.append(f"{key} = {value!r}" if isinstance(value, float) else f"{key} = {value}")
    return "\n".join(lines) + "\n"
