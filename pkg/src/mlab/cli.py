"""Batch front end: config-driven runs writing deterministic JSON reports and CSVs.

Usage::

    mlab constant --ap p=2 --weight power:delta=1.5:n=1
    mlab verify --check poincare --weight power:delta=1:n=2 --p 1 --r 1 --f bump:0.1
    mlab sweep --sharpness n=2 p=2 delta=3 q=8 eps=0.05,0.025,0.0125,0.00625

Settings come from ``--config FILE`` (key=value lines with optional ``[section]``
headers, or JSON) and are overridden by ``key=value`` / ``--key value`` tokens.
Unknown keys are rejected.  Exit codes: 0 ok, 1 failed check, 2 config or
precondition error, 3 inconclusive fit.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import experiments as ex
from .errors import InvalidArgumentError, LabError
from .lattice import (
    Bump,
    Cone,
    Gaussian,
    GridFunction,
    Polynomial,
    Sampled,
    ball,
    ball_family,
    load_binary,
    load_csv,
    make_grid,
    sample,
)
from .norms import lorentz, lorentz_weak, weighted_lp
from .operators import fractional_maximal, gradient_magnitude, maximal, riesz
from .weights import (
    PowerWeight,
    SampledWeight,
    a1_constant,
    ainf_constant,
    ap_constant,
    ell_w,
)

EXIT_OK, EXIT_FAILED, EXIT_CONFIG, EXIT_INCONCLUSIVE = 0, 1, 2, 3


class ConfigError(LabError):
    """Malformed or unknown configuration."""


# key -> (parser name, default, help)
SCHEMA: dict[str, tuple[str, object, str]] = {
    "grid.dim": ("int", None, "dimension; defaults to the weight dimension, else 1"),
    "grid.L": ("float", 1.0, "half extent of the cube [-L, L]^n"),
    "grid.N": ("int", None, "cells per axis; default 1024 / 128 / 32 for n = 1 / 2 / 3"),
    "weight": ("str", "unit", "unit | power:delta=D:n=N[:scale=C] | file:PATH"),
    "f": ("str", "bump:0.1", "bump:EPS | cone:SLOPE | gaussian:WIDTH | poly:C0,C1,.. | file:PATH"),
    "ball.center": ("floats", None, "ball center; default the origin"),
    "ball.radius": ("float", 1.0, "ball radius"),
    "family.ratio": ("float", 2.0**0.25, "radius ladder ratio"),
    "family.stride": ("int", None, "center stride; default N // 64 (at least 1)"),
    "family.metric": ("str", "euclidean", "euclidean | sup"),
    "n": ("int", 2, "dimension of analytic sweeps"),
    "p": ("float", None, "integrability exponent"),
    "r": ("float", None, "Muckenhoupt index"),
    "q": ("float", None, "target exponent"),
    "alpha": ("float", None, "fractional order"),
    "delta": ("float", None, "smoothness or power-weight exponent"),
    "m": ("int", 1, "derivative order"),
    "gamma": ("float", None, "exponent offset of the sharpness sweep"),
    "mode": ("str", "strong", "strong | weak | lorentz"),
    "fineness": ("float", None, "second Lorentz index"),
    "eps": ("floats", (0.05, 0.025, 0.0125, 0.00625), "plateau widths"),
    "deltas": ("floats", (1.0, 0.3, 0.1, 0.03, 0.01, 0.003), "beta-sweep exponents"),
    "weight_exponent": ("float", None, "replacement A_r exponent (negative controls)"),
    "trials": ("int", 1000, "randomized trials"),
    "max_constant": ("float", math.inf, "verify: pass when implied_constant <= this"),
    "slope_tol": ("float", 0.1, "sweep: relative slope tolerance (absolute floor 0.02)"),
    "cap": ("float", 1e6, "cap on Muckenhoupt estimates"),
    "seed": ("int", 0, "random seed"),
    "out": ("str", "mlab_out", "output directory"),
    "threads": ("int", None, "worker cap; default MLAB_THREADS or 1"),
    "inflate_ainf": ("float", 2.0, "safety inflation of A_inf estimates"),
}

ALIASES = {"inflate-ainf": "inflate_ainf", "weight-exponent": "weight_exponent",
           "max-constant": "max_constant", "slope-tol": "slope_tol", "L": "grid.L",
           "N": "grid.N", "dim": "grid.dim", "radius": "ball.radius", "center": "ball.center"}

KINDS = {
    "constant": ("ap", "a1", "ainf", "ell"),
    "operator": ("maximal", "fractional-maximal", "riesz", "gradient"),
    "norm": ("lp", "weak", "lorentz"),
    "verify": ("hedberg", "riesz-strong", "riesz-weak", "poincare", "fractional",
               "subrepresentation", "highorder", "vanishing", "maximal"),
    "sweep": ("sharpness", "beta"),
}

REPORT_KEYS = {"experiment_id", "theorem_anchor", "params", "lhs", "rhs_core",
               "implied_constant", "fitted_slope", "predicted_slope", "fit_residual", "pass",
               "notes", "extras", "samples", "inconclusive"}
REQUIRED_REPORT_KEYS = {"experiment_id", "theorem_anchor", "params", "lhs", "rhs_core",
                        "implied_constant", "pass", "notes"}


def _parse_value(kind: str, raw, key: str):
    try:
        if raw is None:
            return None
        if kind == "int":
            if isinstance(raw, bool) or (isinstance(raw, float) and not raw.is_integer()):
                raise ValueError(raw)
            return int(raw)
        if kind == "float":
            return float(raw)
        if kind == "str":
            if isinstance(raw, dict):
                return raw
            return str(raw)
        if kind == "floats":
            if isinstance(raw, (list, tuple)):
                return tuple(float(v) for v in raw)
            if isinstance(raw, (int, float)):
                return (float(raw),)
            return tuple(float(v) for v in str(raw).split(",") if v.strip())
    except (TypeError, ValueError):
        raise ConfigError(f"key {key!r}: cannot read {raw!r} as {kind}") from None
    raise ConfigError(f"key {key!r}: unknown type {kind}")


def _canonical(key: str) -> str:
    key = ALIASES.get(key, key)
    if key not in SCHEMA:
        raise ConfigError(f"unknown key {key!r}")
    return key


def _flatten(obj: dict, prefix: str = "") -> dict:
    out = {}
    for k, v in obj.items():
        name = f"{prefix}{k}"
        if isinstance(v, dict) and name not in ("weight", "f"):
            out.update(_flatten(v, name + "."))
        else:
            out[name] = v
    return out


def read_config_text(text: str) -> dict:
    """Parse JSON or key=value text into a flat, validated mapping."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"line {exc.lineno}: {exc.msg}") from None
        items = _flatten(raw)
        return {(_canonical(k)): _parse_value(SCHEMA[_canonical(k)][0], v, k)
                for k, v in items.items()}
    out = {}
    section = ""
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip() + "."
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value, got {line!r}")
        k, v = (s.strip() for s in line.split("=", 1))
        try:
            key = _canonical(section + k)
            out[key] = _parse_value(SCHEMA[key][0], v, key)
        except ConfigError as exc:
            raise ConfigError(f"line {lineno}: {exc}") from None
    return out


@dataclass(frozen=True)
class RunConfig:
    command: str
    kind: str
    settings: dict

    def get(self, key: str):
        if key in self.settings:
            return self.settings[key]
        return SCHEMA[key][1]

    def require(self, key: str):
        v = self.get(key)
        if v is None:
            raise ConfigError(f"{self.command} {self.kind} needs {key}")
        return v


def _parse_tokens(tokens: list[str], command: str) -> tuple[str | None, dict]:
    kind = None
    out = {}
    i = 0
    while i < len(tokens):
        tok = tokens[i]
        if tok.startswith("--"):
            name = tok[2:]
            if "=" in name:
                k, v = name.split("=", 1)
                out[_canonical(k)] = v
                i += 1
                continue
            if name in KINDS[command]:
                if kind is not None:
                    raise ConfigError(f"two experiment kinds given: {kind}, {name}")
                kind = name
                i += 1
                continue
            if name in ("check", "kind"):
                if i + 1 >= len(tokens):
                    raise ConfigError(f"--{name} needs a value")
                kind = tokens[i + 1]
                i += 2
                continue
            if i + 1 >= len(tokens):
                raise ConfigError(f"--{name} needs a value")
            out[_canonical(name)] = tokens[i + 1]
            i += 2
        elif "=" in tok:
            k, v = tok.split("=", 1)
            out[_canonical(k)] = v
            i += 1
        else:
            raise ConfigError(f"cannot parse argument {tok!r}")
    return kind, {k: _parse_value(SCHEMA[k][0], v, k) for k, v in out.items()}


def parse_args(argv: list[str]) -> RunConfig:
    parser = argparse.ArgumentParser(prog="mlab", description=__doc__.split("\n\n")[0])
    parser.add_argument("command", choices=sorted(KINDS))
    parser.add_argument("--config", help="key=value or JSON settings file")
    args, rest = parser.parse_known_args(argv)
    settings = {}
    if args.config:
        try:
            text = Path(args.config).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from None
        settings.update(read_config_text(text))
    kind, overrides = _parse_tokens(rest, args.command)
    settings.update(overrides)
    if kind is None:
        kind = KINDS[args.command][0]
    if kind not in KINDS[args.command]:
        raise ConfigError(f"unknown {args.command} kind {kind!r}; "
                          f"choose from {', '.join(KINDS[args.command])}")
    return RunConfig(args.command, kind, settings)


# ---------------------------------------------------------------------------
# building objects from settings


def _fields(spec: str) -> tuple[str, list[str]]:
    head, _, tail = spec.partition(":")
    return head.strip().lower(), [t for t in tail.split(":") if t] if tail else []


def _load_function(path: str) -> GridFunction:
    return load_binary(path) if path.endswith(".bin") else load_csv(path)


def weight_from_spec(spec) -> PowerWeight | SampledWeight | None:
    if isinstance(spec, dict):
        kind = spec.get("kind", "power" if "power" in spec or "delta" in spec else "unit")
        if kind == "power":
            extra = set(spec) - {"kind", "power", "delta", "n", "scale"}
            if extra:
                raise ConfigError(f"unknown weight keys {sorted(extra)}")
            return PowerWeight(float(spec["delta"]), int(spec["n"]), float(spec.get("scale", 1.0)))
        if kind == "unit":
            return None
        raise ConfigError(f"unknown weight kind {kind!r}")
    head, parts = _fields(spec)
    if head == "unit":
        return None
    if head == "file":
        return SampledWeight(_load_function(spec.split(":", 1)[1]))
    if head == "power":
        kv = {}
        for part in parts:
            if "=" not in part:
                raise ConfigError(f"weight field {part!r} is not key=value")
            k, v = part.split("=", 1)
            kv[k] = v
        extra = set(kv) - {"delta", "n", "scale"}
        if extra or not {"delta", "n"} <= set(kv):
            raise ConfigError(f"power weight needs delta and n, got {sorted(kv)}")
        return PowerWeight(float(kv["delta"]), int(kv["n"]), float(kv.get("scale", 1.0)))
    raise ConfigError(f"unknown weight {spec!r}")


def function_from_spec(spec: str, grid=None):
    head, parts = _fields(spec)
    try:
        if head == "bump":
            return Bump(float(parts[0]))
        if head == "cone":
            return Cone(float(parts[0]))
        if head == "gaussian":
            return Gaussian(float(parts[0]))
        if head == "poly":
            return Polynomial.from_1d([float(c) for c in parts[0].split(",")])
        if head == "file":
            f = _load_function(spec.split(":", 1)[1])
            if grid is not None and f.grid != grid:
                raise ConfigError("function file lives on a different grid than the config")
            return Sampled(f)
    except (IndexError, ValueError):
        raise ConfigError(f"cannot read function {spec!r}") from None
    raise ConfigError(f"unknown function {spec!r}")


def build_grid(cfg: RunConfig, w):
    dim = cfg.get("grid.dim")
    if dim is None:
        dim = w.dim if w is not None else 1
    if w is not None and w.dim != dim:
        raise ConfigError(f"weight dimension {w.dim} differs from grid.dim {dim}")
    n_cells = cfg.get("grid.N") or {1: 1024, 2: 128}.get(dim, 32)
    if isinstance(w, SampledWeight):
        return w.function.grid
    return make_grid(dim, cfg.get("grid.L"), n_cells)


def build_family(cfg: RunConfig, grid):
    stride = cfg.get("family.stride") or max(1, grid.cells_per_axis // 64)
    return ball_family(grid, ratio=cfg.get("family.ratio"), center_stride=stride,
                       metric=cfg.get("family.metric"))


def build_ball(cfg: RunConfig, grid):
    center = cfg.get("ball.center") or (0.0,) * grid.dim
    if len(center) != grid.dim:
        raise ConfigError(f"ball.center has {len(center)} coordinates, grid has {grid.dim}")
    return ball(center, cfg.get("ball.radius"))


# ---------------------------------------------------------------------------
# commands


def _plain_report(eid: str, anchor: str, params: dict, value: float, passed: bool = True,
                  notes=()) -> dict:
    return {"experiment_id": eid, "theorem_anchor": anchor, "params": params, "lhs": value,
            "rhs_core": 1.0, "implied_constant": value, "pass": passed, "notes": list(notes)}


def run_constant(cfg: RunConfig) -> tuple[dict, list]:
    w = weight_from_spec(cfg.get("weight"))
    grid = build_grid(cfg, w)
    family = build_family(cfg, grid)
    wt = w if w is not None else SampledWeight(GridFunction(grid, np.ones(grid.n_cells)))
    params = {"grid": [grid.dim, grid.half_extent, grid.cells_per_axis],
              "family": family.provenance(), "weight": str(cfg.get("weight"))}
    if cfg.kind == "ap":
        p = cfg.require("p")
        params["p"] = p
        value = ap_constant(wt, p, family)
    elif cfg.kind == "a1":
        value = a1_constant(wt, family)
    elif cfg.kind == "ainf":
        value = ainf_constant(wt, ex.coarse_family(grid))
    else:
        est = ell_w(wt, family, cap=cfg.get("cap"))
        params["approximate"] = est.approximate
        value = est.value
    anchor = {"ap": "Muckenhoupt A_p constant over the ball family",
              "a1": "A_1 constant, max of Mw / w", "ainf": "Fujii-Wilson A_inf constant",
              "ell": "infimal Muckenhoupt index"}[cfg.kind]
    return _plain_report(f"constant.{cfg.kind}", anchor, params, float(value)), []


def run_operator(cfg: RunConfig) -> tuple[dict, list]:
    w = weight_from_spec(cfg.get("weight"))
    grid = build_grid(cfg, w)
    spec = function_from_spec(cfg.get("f"), grid)
    f = sample(spec, grid)
    if cfg.kind == "maximal":
        out = maximal(f, build_family(cfg, grid))
    elif cfg.kind == "fractional-maximal":
        out = fractional_maximal(f, cfg.require("alpha"), build_family(cfg, grid))
    elif cfg.kind == "riesz":
        out = riesz(f, cfg.require("alpha"))
    else:
        out = gradient_magnitude(spec, grid)
    rows = [list(map(float, c)) + [float(v)] for c, v in zip(grid.centers, out.values)]
    header = [f"x{i}" for i in range(grid.dim)] + ["value"]
    params = {"grid": [grid.dim, grid.half_extent, grid.cells_per_axis], "f": cfg.get("f"),
              "alpha": cfg.get("alpha")}
    report = _plain_report(f"operator.{cfg.kind}", f"{cfg.kind} operator values", params,
                           float(np.max(out.values)), notes=["lhs is the maximum value"])
    return report, [("values.csv", header, rows)]


def run_norm(cfg: RunConfig) -> tuple[dict, list]:
    w = weight_from_spec(cfg.get("weight"))
    grid = build_grid(cfg, w)
    f = sample(function_from_spec(cfg.get("f"), grid), grid)
    region = build_ball(cfg, grid)
    q = cfg.require("q")
    if cfg.kind == "lp":
        value = weighted_lp(f, q, region, w)
    elif cfg.kind == "weak":
        value = lorentz_weak(f, q, region, w)
    else:
        value = lorentz(f, q, cfg.require("fineness"), region, w)
    params = {"q": q, "fineness": cfg.get("fineness"), "f": cfg.get("f"),
              "weight": str(cfg.get("weight"))}
    return _plain_report(f"norm.{cfg.kind}", "normalized weighted norm over the ball", params,
                         float(value)), []


def _verification_dict(rep: ex.VerificationReport, bound: float) -> dict:
    out = rep.to_dict()
    out["pass"] = bool(math.isfinite(rep.implied_constant) and rep.implied_constant <= bound)
    return out


def run_verify(cfg: RunConfig) -> tuple[dict, list]:
    kind = cfg.kind
    bound = cfg.get("max_constant")
    if kind == "vanishing":
        res = ex.vanishing_lemma_suite(cfg.get("trials"), cfg.get("seed"))
        ok = res["tight_violations"] == 0
        rep = _plain_report("vanishing_suite", "norm of a constant against a function vanishing "
                            "on a large set", res, float(res["tight_violations"]), ok)
        return rep, []
    w = weight_from_spec(cfg.get("weight"))
    grid = build_grid(cfg, w)
    spec = function_from_spec(cfg.get("f"), grid)
    region = build_ball(cfg, grid)
    family = build_family(cfg, grid)
    if kind == "hedberg":
        rep = ex.hedberg_check(spec, w, cfg.require("r"), cfg.require("alpha"), cfg.require("p"),
                               region, grid, family)
    elif kind == "riesz-strong":
        rep = ex.riesz_strong_check(spec, w, cfg.require("r"), cfg.require("alpha"),
                                    cfg.require("p"), region, grid, family,
                                    weight_exponent=cfg.get("weight_exponent"),
                                    cap=cfg.get("cap"))
    elif kind == "riesz-weak":
        rep = ex.riesz_weak_check(spec, w, cfg.require("r"), cfg.require("alpha"),
                                  cfg.require("p"), region, grid, family)
    elif kind == "poincare":
        rep = ex.poincare_check(spec, w, cfg.require("r"), cfg.require("p"), region, grid,
                                cfg.get("mode"), family, q=cfg.get("q"),
                                weight_exponent=cfg.get("weight_exponent"))
    elif kind == "fractional":
        rep = ex.fractional_poincare_check(spec, w, cfg.require("p"), cfg.require("delta"),
                                           region, grid, family)
    elif kind == "subrepresentation":
        rep = ex.subrepresentation_check(spec, region, grid, cfg.get("m"))
    elif kind == "highorder":
        mode = cfg.get("mode")
        rep = ex.highorder_check(spec, w, cfg.get("r") or 1.0, cfg.require("p"), cfg.get("m"), region,
                                 grid, mode, family)
    else:
        rng = np.random.default_rng(cfg.get("seed"))
        suite = [sample(spec, grid)] + [
            GridFunction(grid, rng.random(grid.n_cells)) for _ in range(3)]
        rep = ex.maximal_norm_probe(w, cfg.require("r"), cfg.require("p"), family, suite)
    return _verification_dict(rep, bound), []


def _sweep_dict(rep: ex.SweepReport, passed: bool) -> dict:
    d = rep.to_dict()
    last = rep.samples[-1]
    return {"experiment_id": rep.experiment_id,
            "theorem_anchor": ("growth of the plateau implied constant"
                               if rep.experiment_id == "sharpness"
                               else "power of the A_r constant along the power-weight ladder"),
            "params": d["params"], "lhs": last[1], "rhs_core": 1.0, "implied_constant": last[1],
            "fitted_slope": rep.fitted_slope, "predicted_slope": rep.predicted_slope,
            "fit_residual": rep.fit_residual, "pass": passed, "notes": d["notes"],
            "samples": d["samples"]}


def run_sweep(cfg: RunConfig, workers: int) -> tuple[dict, list]:
    n, p = cfg.get("n"), cfg.require("p")
    if cfg.kind == "sharpness":
        rep = ex.sharpness_sweep(n, p, cfg.require("delta"), cfg.get("gamma"), cfg.get("q"),
                                 cfg.get("eps"), workers=workers)
        tol = max(0.02, cfg.get("slope_tol") * abs(rep.predicted_slope))
        passed = abs(rep.fitted_slope - rep.predicted_slope) <= tol
        header = ["inverse_eps", "implied_constant"]
    else:
        width = cfg.get("eps")[0] if "eps" in cfg.settings else 0.1
        rep = ex.beta_sweep(n, p, cfg.require("r"), cfg.get("q"), width, cfg.get("deltas"),
                            cfg.get("weight_exponent"), workers=workers)
        if cfg.get("weight_exponent") is None:
            passed = rep.fitted_slope >= 1.0 / p - 0.05
        else:
            passed = rep.params["growth"] >= 3.0
        header = ["ar_constant", "implied_constant"]
    rows = [list(s) for s in rep.samples]
    out = _sweep_dict(rep, passed)
    out["inconclusive"] = rep.inconclusive
    return out, [("sweep.csv", header, rows)]


# ---------------------------------------------------------------------------
# output


def _json_safe(obj):
    if isinstance(obj, float):
        if math.isnan(obj):
            return "nan"
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
        return obj
    if isinstance(obj, (np.floating,)):
        return _json_safe(float(obj))
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, dict):
        return {str(k): _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    return obj


def dump_report(report: dict) -> str:
    return json.dumps(_json_safe(report), sort_keys=True, indent=2, allow_nan=False) + "\n"


def parse_report(text: str) -> dict:
    """Strict re-parse of an emitted report."""
    data = json.loads(text)
    if not isinstance(data, dict):
        raise ConfigError("report must be a JSON object")
    keys = set(data)
    missing = REQUIRED_REPORT_KEYS - keys
    extra = keys - REPORT_KEYS
    if missing or extra:
        raise ConfigError(f"report keys: missing {sorted(missing)}, unknown {sorted(extra)}")
    if not isinstance(data["pass"], bool) or not isinstance(data["notes"], list):
        raise ConfigError("report fields 'pass' and 'notes' have the wrong type")
    if not isinstance(data["params"], dict):
        raise ConfigError("report field 'params' must be an object")
    return data


def write_csv(path: Path, header: list[str], rows: list[list[float]]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([repr(float(v)) for v in row])


def _workers(cfg: RunConfig) -> int:
    t = cfg.get("threads")
    if t is None:
        env = os.environ.get("MLAB_THREADS")
        try:
            t = int(env) if env else 1
        except ValueError:
            raise ConfigError(f"MLAB_THREADS must be an integer, got {env!r}") from None
    if t < 1:
        raise ConfigError(f"threads must be positive, got {t}")
    return t


def run(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        cfg = parse_args(argv)
        workers = _workers(cfg)
        np.random.seed(cfg.get("seed"))
        runner = {"constant": run_constant, "operator": run_operator, "norm": run_norm,
                  "verify": run_verify}.get(cfg.command)
        report, tables = runner(cfg) if runner else run_sweep(cfg, workers)
    except (ConfigError, InvalidArgumentError, LabError, OSError) as exc:
        print(f"mlab: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    out = Path(cfg.get("out"))
    out.mkdir(parents=True, exist_ok=True)
    (out / "report.json").write_text(dump_report(report))
    for name, header, rows in tables:
        write_csv(out / name, header, rows)
    meta = {"argv": argv, "created": time.strftime("%Y-%m-%dT%H:%M:%S%z"), "workers": workers}
    (out / "metadata.json").write_text(json.dumps(meta, indent=2) + "\n")
    summary = {k: report.get(k) for k in ("experiment_id", "implied_constant", "fitted_slope",
                                          "pass") if k in report}
    print(json.dumps(_json_safe(summary), sort_keys=True))
    if report.get("inconclusive"):
        return EXIT_INCONCLUSIVE
    return EXIT_OK if report["pass"] else EXIT_FAILED


def main() -> None:
    sys.exit(run())
