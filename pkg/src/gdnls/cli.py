"""Command-line experiment runner.

Usage: gdnls <experiment> --config <path> [--out <dir>] [--workers N] [--seed N]

Config files are flat ``key = value`` text; unknown keys are errors.
Each run writes a CSV (RFC-4180 style, 17 significant digits) and a JSON
run manifest.  Exit codes: 0 success, 2 validation failure, 3 numerical
failure.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import hashlib
import json
import math
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .evolve import EvolutionConfig, StabilityError, evolve
from .gauge import FORWARD, INVERSE, gauge_transform
from .grid import ComplexField, GridSpec, ResolutionError
from .probes import (
    default_ensemble,
    leibniz_probe,
    maximal_probe,
    smoothing_probe,
    strichartz_probe,
)
from .quadrature import QuadratureError
from .scattering import decay_exponent, decay_tracker, pullback_cauchy, xt_accumulate
from .solitons import (
    SolitonParams,
    full_wave,
    hsc_norm,
    l2_mass_closed,
    pc_mass_closed,
    soliton_grid,
    virial_ratio,
)
from .spectral import l2_norm

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3

EXPERIMENTS = (
    "soliton-atlas",
    "evolve",
    "scatter-probe",
    "gauge-check",
    "ineq-probe",
    "theorem1-scan",
)


class ConfigError(ValueError):
    """Invalid experiment configuration; message names the offending field."""


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    parameters: dict

    def normalized(self) -> dict:
        return {"experiment": self.experiment, **dict(sorted(self.parameters.items()))}

    def config_hash(self) -> str:
        blob = json.dumps(self.normalized(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]


@dataclass
class ResultRecord:
    experiment: str
    config_hash: str
    version: str
    timestamp: str
    columns: list
    rows: list
    checks: dict = field(default_factory=dict)

    def csv_text(self) -> str:
        def fmt(v):
            if isinstance(v, float):
                return format(v, ".17g")
            return str(v)

        lines = [",".join(self.columns)]
        lines += [",".join(fmt(v) for v in row) for row in self.rows]
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# config parsing and validation

def parse_config_text(text: str) -> dict:
    out = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, val = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ConfigError(f"line {lineno}: empty key")
        if key in out:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        out[key] = val
    return out


def _to_float(key, val):
    try:
        return float(val)
    except (TypeError, ValueError):
        raise ConfigError(f"field {key!r}: expected a number, got {val!r}") from None


def _to_int(key, val):
    f = _to_float(key, val)
    if not math.isfinite(f) or f != int(f):
        raise ConfigError(f"field {key!r}: expected an integer, got {val!r}")
    return int(f)


def _to_float_list(key, val):
    try:
        return [float(v) for v in str(val).split(",") if v.strip()]
    except ValueError:
        raise ConfigError(f"field {key!r}: expected comma-separated numbers, got {val!r}") from None


# per-experiment schema: key -> (converter, default); None default = required
_COMMON = {"seed": (_to_int, 0), "output_path": (str, "")}

_SCHEMAS = {
    "soliton-atlas": {
        "sigma": (_to_float, None),
        "omega": (_to_float, 1.0),
        "c_grid": (_to_float_list, None),
        **_COMMON,
    },
    "theorem1-scan": {
        "sigma": (_to_float, None),
        "omega": (_to_float, 1.0),
        "norm": (str, None),
        "num_points": (_to_int, 11),
        "alpha0": (_to_float, 1.0),
        **_COMMON,
    },
    "evolve": {
        "equation": (str, "gdnls"),
        "sigma": (_to_float, 2.0),
        "datum": (str, "gaussian"),
        "omega": (_to_float, 1.0),
        "c": (_to_float, 0.0),
        "delta": (_to_float, 0.1),
        "width": (_to_float, 1.0),
        "n_points": (_to_int, 2048),
        "box_length": (_to_float, 80.0),
        "dt": (_to_float, 1e-3),
        "t_end": (_to_float, 1.0),
        "snapshot_stride": (_to_int, 10),
        **_COMMON,
    },
    "scatter-probe": {
        "sigma": (_to_float, 2.0),
        "delta": (_to_float, 0.05),
        "width": (_to_float, 1.0),
        "n_points": (_to_int, 4096),
        "box_length": (_to_float, 160.0),
        "dt": (_to_float, 2e-3),
        "t_end": (_to_float, 8.0),
        "s": (_to_float, 0.5),
        "s_prime": (_to_float, 0.4),
        **_COMMON,
    },
    "gauge-check": {
        "delta": (_to_float, 0.3),
        "width": (_to_float, 1.0),
        "velocity": (_to_float, 0.5),
        "n_points": (_to_int, 2048),
        "box_length": (_to_float, 80.0),
        "dt": (_to_float, 1e-3),
        "t_end": (_to_float, 0.5),
        **_COMMON,
    },
    "ineq-probe": {
        "probe": (str, None),
        "q": (_to_float, 4.0),
        "r": (_to_float, math.inf),
        "p": (_to_float, 4.0),
        "s": (_to_float, 0.25),
        "t_end": (_to_float, 4.0),
        **_COMMON,
    },
}


def validate_config(experiment: str, raw: dict) -> ExperimentConfig:
    """Check keys and module preconditions eagerly; field-specific messages."""
    if experiment not in EXPERIMENTS:
        raise ConfigError(
            f"unknown experiment {experiment!r}; valid names: {', '.join(EXPERIMENTS)}"
        )
    schema = _SCHEMAS[experiment]
    unknown = set(raw) - set(schema)
    if unknown:
        raise ConfigError(f"unknown config keys for {experiment}: {sorted(unknown)}")
    params = {}
    for key, (conv, default) in schema.items():
        if key in raw:
            params[key] = conv(key, raw[key]) if conv is not str else str(raw[key])
        elif default is None:
            raise ConfigError(f"field {key!r}: required for experiment {experiment}")
        else:
            params[key] = default
    _validate_semantics(experiment, params)
    return ExperimentConfig(experiment, params)


def _require(cond: bool, field_name: str, message: str) -> None:
    if not cond:
        raise ConfigError(f"field {field_name!r}: {message}")


def _validate_semantics(experiment: str, p: dict) -> None:
    for key in ("sigma", "omega", "dt", "t_end", "delta", "width",
                "box_length", "alpha0", "s", "s_prime", "velocity"):
        if key in p:
            _require(math.isfinite(p[key]), key, "must be finite")
    if "sigma" in p:
        _require(p["sigma"] > 0, "sigma", "must be positive")
    if "omega" in p:
        _require(p["omega"] > 0, "omega", "must be positive")
    if "dt" in p:
        _require(p["dt"] > 0, "dt", "must be positive")
    if "t_end" in p:
        _require(p["t_end"] > 0, "t_end", "must be positive")
    if "delta" in p:
        _require(p["delta"] > 0, "delta", "must be positive")
    if "width" in p:
        _require(p["width"] > 0, "width", "must be positive")
    if "n_points" in p:
        _require(
            p["n_points"] >= 16 and (p["n_points"] & (p["n_points"] - 1)) == 0,
            "n_points", "must be a power of two >= 16",
        )
    if "box_length" in p:
        _require(p["box_length"] > 0, "box_length", "must be positive")
    if "snapshot_stride" in p:
        _require(p["snapshot_stride"] >= 1, "snapshot_stride", "must be >= 1")

    if experiment == "soliton-atlas":
        _require(len(p["c_grid"]) >= 1, "c_grid", "must contain at least one speed")
        bound = 2.0 * math.sqrt(p["omega"])
        for c in p["c_grid"]:
            _require(
                c * c < 4.0 * p["omega"], "c_grid",
                f"speed {c} violates the admissible set c in (-{bound:g}, {bound:g})",
            )
    elif experiment == "theorem1-scan":
        _require(p["norm"] in ("L2", "H1", "Lpc", "Hsc"), "norm",
                 "must be one of L2, H1, Lpc, Hsc")
        _require(p["num_points"] >= 4, "num_points", "must be >= 4 for a slope fit")
        _require(0 < p["alpha0"] <= 2.0 * math.sqrt(p["omega"]), "alpha0",
                 "must lie in (0, 2 sqrt(omega)]")
    elif experiment == "evolve":
        _require(p["equation"] in ("gdnls", "dnls"), "equation",
                 "must be 'gdnls' or 'dnls'")
        _require(p["sigma"] >= 0.5, "sigma", "must be >= 1/2")
        _require(p["datum"] in ("gaussian", "soliton"), "datum",
                 "must be 'gaussian' or 'soliton'")
        if p["datum"] == "soliton":
            bound = 2.0 * math.sqrt(p["omega"])
            _require(
                p["c"] ** 2 < 4.0 * p["omega"], "c",
                f"speed violates the admissible set c in (-{bound:g}, {bound:g})",
            )
    elif experiment == "scatter-probe":
        _require(p["sigma"] >= 0.5, "sigma", "must be >= 1/2")
        _require(0.5 <= p["s"] <= 1.0, "s", "must lie in [1/2, 1]")
        _require(0 <= p["s_prime"] < p["s"], "s_prime", "must satisfy 0 <= s' < s")
    elif experiment == "ineq-probe":
        _require(p["probe"] in ("strichartz", "smoothing", "maximal", "leibniz"),
                 "probe", "must be one of strichartz, smoothing, maximal, leibniz")


# ---------------------------------------------------------------------------
# experiment implementations

def _gaussian_datum(grid: GridSpec, delta: float, width: float,
                    velocity: float = 0.0) -> ComplexField:
    x = grid.x
    vals = delta * np.exp(-width * x**2) * np.exp(1j * velocity * x)
    return ComplexField(grid, vals)


def _run_soliton_atlas(p: dict):
    columns = ["c", "alpha", "l2_mass_closed", "l2_mass_grid",
               "pc_mass_closed", "virial_ratio", "hsc_norm"]
    rows = []
    for c in p["c_grid"]:
        sp = SolitonParams(p["omega"], c, p["sigma"])
        grid = soliton_grid(sp)
        phi = full_wave(sp, grid)
        rows.append([
            float(c), sp.alpha, l2_mass_closed(sp), l2_norm(phi) ** 2,
            pc_mass_closed(sp), virial_ratio(sp, grid), hsc_norm(sp, grid),
        ])
    checks = {"virial_max_rel_err": max(abs(r[5] / p["omega"] - 1.0) for r in rows)}
    return columns, rows, checks


def _run_theorem1_scan(p: dict):
    alphas = p["alpha0"] * 2.0 ** (-np.arange(p["num_points"], dtype=float))
    columns = ["j", "alpha", "c", "norm_value"]
    rows = []
    for j, a in enumerate(alphas):
        c = -math.sqrt(4.0 * p["omega"] - a * a)
        sp = SolitonParams(p["omega"], c, p["sigma"])
        if p["norm"] == "L2":
            v = math.sqrt(l2_mass_closed(sp))
        elif p["norm"] == "H1":
            v = math.sqrt((1.0 + p["omega"]) * l2_mass_closed(sp))
        elif p["norm"] == "Lpc":
            v = pc_mass_closed(sp)
        else:
            v = hsc_norm(sp)
        rows.append([j, float(a), c, v])
    vals = [r[3] for r in rows]
    slope = float(np.polyfit(np.log(alphas), np.log(vals), 1)[0])
    checks = {"slope": slope, "min_norm": min(vals),
              "monotone_decreasing": all(b < a for a, b in zip(vals, vals[1:]))}
    return columns, rows, checks


def _run_evolve(p: dict):
    grid = GridSpec(p["n_points"], p["box_length"])
    if p["datum"] == "soliton":
        sp = SolitonParams(p["omega"], p["c"], p["sigma"])
        u0 = full_wave(sp, grid)
    else:
        u0 = _gaussian_datum(grid, p["delta"], p["width"])
    cfg = EvolutionConfig(p["equation"], grid, dt=p["dt"], t_end=p["t_end"],
                          sigma=p["sigma"], snapshot_stride=p["snapshot_stride"])
    traj, rep = evolve(u0, cfg)
    columns = ["t", "mass", "energy", "linf"]
    rows = [[float(t), float(m), float(e), float(a)]
            for t, m, e, a in zip(rep.times, rep.mass, rep.energy, rep.linf)]
    checks = {"mass_drift": rep.mass_drift, "energy_drift": rep.energy_drift,
              "linf_flag": rep.linf_flag}
    return columns, rows, checks


def _run_scatter_probe(p: dict):
    grid = GridSpec(p["n_points"], p["box_length"])
    u0 = _gaussian_datum(grid, p["delta"], p["width"])
    cfg = EvolutionConfig("gdnls", grid, dt=p["dt"], t_end=p["t_end"],
                          sigma=p["sigma"], snapshot_stride=max(1, int(0.02 / p["dt"])))
    traj, rep = evolve(u0, cfg)
    xt_curve = xt_accumulate(traj, p["s"])
    checkpoints = [t for t in (1.0, 2.0, 4.0, 8.0) if t <= p["t_end"] + 1e-12]
    cauchy = pullback_cauchy(traj, p["s_prime"], checkpoints)
    decay = decay_tracker(traj)
    exponent = decay_exponent(decay, t_min=p["t_end"] / 4.0)
    columns = ["T", "xt_norm"]
    rows = [[float(t), float(v)] for t, v in xt_curve]
    checks = {
        "mass_drift": rep.mass_drift,
        "xt_final": xt_curve[-1][1],
        "decay_exponent": exponent,
        "cauchy_diffs": [d for _, _, d in cauchy],
        "cauchy_decreasing": all(b < a for (_, _, a), (_, _, b) in zip(cauchy, cauchy[1:])),
    }
    return columns, rows, checks


def _run_gauge_check(p: dict):
    grid = GridSpec(p["n_points"], p["box_length"])
    u0 = _gaussian_datum(grid, p["delta"], p["width"], p["velocity"])
    stride = 10 ** 9
    cfg1 = EvolutionConfig("gdnls", grid, dt=p["dt"], t_end=p["t_end"],
                           sigma=1.0, snapshot_stride=stride)
    traj1, rep1 = evolve(u0, cfg1)
    v0 = gauge_transform(u0, FORWARD)
    cfg2 = EvolutionConfig("dnls", grid, dt=p["dt"], t_end=p["t_end"],
                           snapshot_stride=stride)
    traj2, rep2 = evolve(v0, cfg2)
    u_back = gauge_transform(traj2.snapshots[-1], INVERSE)
    diff = l2_norm(ComplexField(grid, traj1.snapshots[-1].values - u_back.values))
    columns = ["t_end", "l2_difference", "gdnls_mass_drift", "dnls_mass_drift"]
    rows = [[p["t_end"], float(diff), rep1.mass_drift, rep2.mass_drift]]
    checks = {"l2_difference": float(diff)}
    return columns, rows, checks


def _run_ineq_probe(p: dict):
    ens = default_ensemble(seed=p["seed"])
    if p["probe"] == "strichartz":
        rep = strichartz_probe(ens, p["q"], p["r"], p["t_end"])
    elif p["probe"] == "smoothing":
        rep = smoothing_probe(ens, p["t_end"])
    elif p["probe"] == "maximal":
        rep = maximal_probe(ens, p["p"], p["s"], p["t_end"])
    else:
        rng = np.random.default_rng(p["seed"])
        grid = ens.members[0].grid
        pairs = []
        for _ in range(50):
            a, b = 0.5 + rng.random(2) * 2.0
            xa, xb = rng.uniform(-4, 4, size=2)
            pairs.append((
                ComplexField(grid, np.exp(-a * (grid.x - xa) ** 2).astype(complex)),
                ComplexField(grid, np.exp(-b * (grid.x - xb) ** 2).astype(complex)),
            ))
        rep = leibniz_probe(pairs, p["s"], 2.0, 4.0, 4.0, 4.0, 4.0)
    columns = ["inequality_id", "worst_ratio", "worst_member"]
    rows = [[rep.inequality_id, rep.worst_ratio, rep.worst_member]]
    checks = {"worst_ratio": rep.worst_ratio, **{k: v for k, v in rep.params.items()}}
    return columns, rows, checks


_RUNNERS = {
    "soliton-atlas": _run_soliton_atlas,
    "theorem1-scan": _run_theorem1_scan,
    "evolve": _run_evolve,
    "scatter-probe": _run_scatter_probe,
    "gauge-check": _run_gauge_check,
    "ineq-probe": _run_ineq_probe,
}


def run(config: ExperimentConfig, out_dir: str | Path | None = None) -> ResultRecord:
    """Dispatch a validated config, write CSV + manifest, return the record."""
    t0 = time.time()
    columns, rows, checks = _RUNNERS[config.experiment](config.parameters)
    record = ResultRecord(
        experiment=config.experiment,
        config_hash=config.config_hash(),
        version=__version__,
        timestamp=time.strftime("%Y-%m-%dT%H:%M:%S"),
        columns=columns,
        rows=rows,
        checks=checks,
    )
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        stem = config.parameters.get("output_path") or (
            f"{config.experiment}-{record.config_hash}"
        )
        (out / f"{stem}.csv").write_text(record.csv_text())
        manifest = {
            "experiment": record.experiment,
            "config": config.normalized(),
            "config_hash": record.config_hash,
            "version": record.version,
            "timestamp": record.timestamp,
            "wall_time_s": time.time() - t0,
            "checks": _jsonable(record.checks),
        }
        (out / f"{stem}.json").write_text(json.dumps(manifest, indent=2) + "\n")
    return record


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def sweep(configs, workers: int = 1, out_dir=None) -> list:
    """Run configs concurrently; output order matches input order.

    Per-run isolation: a failure is returned as the exception object in
    that slot, siblings are unaffected.
    """
    results = [None] * len(configs)
    if not configs:
        return results
    with concurrent.futures.ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        futures = {pool.submit(run, cfg, out_dir): i for i, cfg in enumerate(configs)}
        for fut, i in futures.items():
            try:
                results[i] = fut.result()
            except Exception as exc:  # isolate sibling runs
                results[i] = exc
    return results


# ---------------------------------------------------------------------------
# entry point

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gdnls", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in EXPERIMENTS:
        sp = sub.add_parser(name, help=f"run the {name} experiment")
        sp.add_argument("--config", required=True)
        sp.add_argument("--out", default="results")
        sp.add_argument("--workers", type=int, default=1)
        sp.add_argument("--seed", type=int, default=None)
    sw = sub.add_parser("sweep", help="run several configs concurrently")
    sw.add_argument("--config", action="append", required=True,
                    help="repeatable; each file names its experiment")
    sw.add_argument("--out", default="results")
    sw.add_argument("--workers", type=int, default=1)
    sw.add_argument("--seed", type=int, default=None)
    return parser


def _load_config(path: str, experiment: str | None, seed_override) -> ExperimentConfig:
    try:
        raw = parse_config_text(Path(path).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if experiment is None:
        experiment = raw.pop("experiment", None)
        if experiment is None:
            raise ConfigError(
                f"config {path}: sweep configs must carry an 'experiment' key"
            )
    else:
        raw.pop("experiment", None)
    if seed_override is not None:
        raw["seed"] = str(seed_override)
    return validate_config(experiment, raw)


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "sweep":
            configs = [_load_config(p, None, args.seed) for p in args.config]
            results = sweep(configs, workers=args.workers, out_dir=args.out)
            failures = [r for r in results if isinstance(r, Exception)]
            if any(isinstance(r, ConfigError) for r in failures):
                print(f"error: {failures[0]}", file=sys.stderr)
                return EXIT_VALIDATION
            if failures:
                print(f"error: {failures[0]}", file=sys.stderr)
                return EXIT_NUMERICAL
            for r in results:
                print(f"{r.experiment} {r.config_hash}: ok")
            return EXIT_OK
        config = _load_config(args.config, args.command, args.seed)
        record = run(config, out_dir=args.out)
        print(f"{record.experiment} {record.config_hash}: ok")
        for key, val in record.checks.items():
            print(f"  {key} = {val}")
        return EXIT_OK
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (StabilityError, QuadratureError, ResolutionError, RuntimeError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
