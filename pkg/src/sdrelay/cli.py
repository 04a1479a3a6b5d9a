"""Command-line front end: config parsing, orchestration, CSV emission.

All computation runs in linear power units; decibel conversion happens only
here.  Every run writes a manifest recording the fully resolved
configuration, and feeding that manifest back in reproduces the same CSV
bytes.
"""

import argparse
import math
import sys
import time
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np
import yaml

from . import __version__
from .discrete import (AlphabetSpec, CausalFactorization, DmFactorization,
                       direct_no_relay_bounds, direct_perfect_csi_bounds,
                       direct_single_user_source_csi_bounds,
                       direct_state_free_bounds, evaluate_theorem1,
                       evaluate_theorem2, no_relay_factorization,
                       perfect_full_csi_state, perfect_relay_csi_state,
                       perfect_source_csi_state, _random_kernel,
                       build_joint, mi_values_from_joint,
                       random_causal_factorization, random_dm_factorization,
                       single_user_source_csi_factorization,
                       state_free_factorization)
from .errors import ConfigError, RelayToolkitError
from .frontier import (SWEEP_AXES, GridSpec, max_r12_endpoint, sweep,
                       sdrc_scalar, tradeoff_curve)
from .gaussian import PowerConfig, SchemeParams
from .plotting import render_tradeoff_png, write_plot_script
from .region import bounds_from_mi, evaluate_gaussian_region, solve_nhat

_POWER_FIELDS = ("p1", "p2", "n2", "n3", "q")
_MODES = ("gaussian-region", "tradeoff", "dm-theorem1", "dm-theorem2",
          "reductions", "sdrc")
_SCHEME_FIELDS = ("rho", "gamma", "alpha1", "alpha2", "rho_u1s", "theta",
                  "beta", "f", "nhat", "rho_u2s")
_GAUSSIAN_COLUMNS = ("rho", "gamma", "alpha1", "alpha2", "rho_u1s", "theta",
                     "beta", "f", "nhat", "r13_max", "r12_max", "sum_max",
                     "r23_max", "feasible", "rho_u2s")
_MI_COLUMNS = ("i_t1_out", "i_t1_s", "i_t2_relay", "i_t2_s", "i_t1_t2_s",
               "i_k2_y3", "i_k2_s2", "i_q2_y3", "i_q2_s2", "i_yhat_src",
               "i_yhat_y3", "i_yhat_cond_y3")


def db_to_linear(x: float) -> float:
    """Linear power for a decibel value: 10^(x/10)."""
    if not math.isfinite(x):
        raise ValueError(f"decibel value must be finite, got {x!r}")
    return 10.0 ** (x / 10.0)


@dataclass(frozen=True)
class ExperimentConfig:
    """Fully resolved run description (powers already in linear units)."""

    mode: str
    power: PowerConfig
    power_raw: dict
    thetas: tuple
    grid: GridSpec
    out: str
    workers: int = 1
    seed: int = 0
    refine: bool = False
    n_targets: int = 25
    r12_targets: tuple = ()
    trials: int = 20
    scheme: dict = None
    dm: dict = None


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    value = float(value)
    if math.isnan(value):
        return "nan"
    return format(value, ".9g")


def _write_csv(path: Path, header, rows) -> None:
    lines = [",".join(header)]
    lines += [",".join(_fmt(v) for v in row) for row in rows]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def _need(section: dict, key: str, path: str):
    if key not in section:
        raise ConfigError(f"{path}.{key}: missing required field")
    return section[key]


def _as_number(value, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{path}: expected a number, got {value!r}")
    return float(value)


def _as_int(value, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{path}: expected an integer, got {value!r}")
    return value


def _parse_power(section, path: str = "power"):
    if not isinstance(section, dict):
        raise ConfigError(f"{path}: expected a mapping of power fields")
    unknown = set(section) - set(_POWER_FIELDS)
    if unknown:
        raise ConfigError(f"{path}.{sorted(unknown)[0]}: unknown power field")
    linear = {}
    raw = {}
    for name in _POWER_FIELDS:
        entry = _need(section, name, path)
        if not (isinstance(entry, dict) and len(entry) == 1
                and next(iter(entry)) in ("db", "linear")):
            raise ConfigError(
                f"{path}.{name}: expected exactly one of 'db' or 'linear'")
        unit, value = next(iter(entry.items()))
        value = _as_number(value, f"{path}.{name}.{unit}")
        linear[name] = db_to_linear(value) if unit == "db" else value
        raw[name] = {unit: value}
    try:
        return PowerConfig(**linear), raw
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from None


def _parse_axis(value, path: str) -> tuple:
    if isinstance(value, dict):
        extra = set(value) - {"start", "stop", "steps"}
        if extra:
            raise ConfigError(f"{path}.{sorted(extra)[0]}: unknown axis field")
        start = _as_number(_need(value, "start", path), f"{path}.start")
        stop = _as_number(_need(value, "stop", path), f"{path}.stop")
        steps = _as_int(_need(value, "steps", path), f"{path}.steps")
        if steps < 1:
            raise ConfigError(f"{path}.steps: must be >= 1, got {steps}")
        if steps == 1:
            return (start,)
        return tuple(float(x) for x in np.linspace(start, stop, steps))
    if isinstance(value, (list, tuple)):
        return tuple(_as_number(v, f"{path}[{i}]") for i, v in enumerate(value))
    raise ConfigError(f"{path}: expected a list or a start/stop/steps mapping")


def _parse_grid(section) -> GridSpec:
    grid = GridSpec()
    if section is None:
        return grid
    if not isinstance(section, dict):
        raise ConfigError("grid: expected a mapping of axis overrides")
    axis_names = SWEEP_AXES + ("theta",)
    overrides = {}
    for key, value in section.items():
        if key not in axis_names:
            raise ConfigError(f"grid.{key}: unknown grid axis")
        overrides[key] = _parse_axis(value, f"grid.{key}")
    try:
        return replace(grid, **overrides)
    except ValueError as exc:
        raise ConfigError(f"grid: {exc}") from None


def _parse_thetas(value) -> tuple:
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        value = [value]
    if not isinstance(value, (list, tuple)) or not value:
        raise ConfigError("theta: expected a non-empty list of fractions")
    thetas = tuple(_as_number(v, f"theta[{i}]") for i, v in enumerate(value))
    for i, t in enumerate(thetas):
        if not 0.0 <= t <= 1.0:
            raise ConfigError(f"theta[{i}]: must lie in [0, 1], got {t!r}")
    if any(b <= a for a, b in zip(thetas, thetas[1:])):
        raise ConfigError("theta: values must be strictly increasing")
    return thetas


def _parse_targets(value) -> tuple:
    if value is None:
        return ()
    if not isinstance(value, (list, tuple)) or not value:
        raise ConfigError("r12_targets: expected a non-empty list")
    targets = tuple(_as_number(v, f"r12_targets[{i}]")
                    for i, v in enumerate(value))
    if targets[0] < 0.0 or any(b <= a for a, b in zip(targets, targets[1:])):
        raise ConfigError(
            "r12_targets: values must be nonnegative and strictly increasing")
    return targets


_TOP_KEYS = ("mode", "power", "theta", "grid", "out", "workers", "seed",
             "refine", "n_targets", "r12_targets", "trials", "scheme", "dm")


def resolve_config(doc: dict, overrides: dict) -> ExperimentConfig:
    """Merge a raw config mapping with flag overrides and validate it."""
    if not isinstance(doc, dict):
        raise ConfigError("config: expected a top-level mapping")
    if "config" in doc and isinstance(doc["config"], dict):
        doc = doc["config"]  # accept a previously written manifest
    unknown = set(doc) - set(_TOP_KEYS)
    if unknown:
        raise ConfigError(f"{sorted(unknown)[0]}: unknown config field")
    doc = dict(doc)
    power_section = dict(doc.get("power") or {})
    for name in _POWER_FIELDS:
        if overrides.get(f"{name}_db") is not None:
            power_section[name] = {"db": overrides[f"{name}_db"]}
        elif overrides.get(f"{name}_linear") is not None:
            power_section[name] = {"linear": overrides[f"{name}_linear"]}
    for key in ("mode", "out", "workers", "seed", "theta"):
        if overrides.get(key) is not None:
            doc[key] = overrides[key]
    if overrides.get("refine"):
        doc["refine"] = True

    mode = doc.get("mode")
    if mode not in _MODES:
        raise ConfigError(f"mode: expected one of {', '.join(_MODES)}, "
                          f"got {mode!r}")
    power, power_raw = _parse_power(power_section)
    thetas = _parse_thetas(doc.get("theta", [0.0, 0.3, 0.6]))
    grid = _parse_grid(doc.get("grid"))
    workers = _as_int(doc.get("workers", 1), "workers")
    if workers < 1:
        raise ConfigError(f"workers: must be >= 1, got {workers}")
    seed = _as_int(doc.get("seed", 0), "seed")
    trials = _as_int(doc.get("trials", 20), "trials")
    if trials < 1:
        raise ConfigError(f"trials: must be >= 1, got {trials}")
    n_targets = _as_int(doc.get("n_targets", 25), "n_targets")
    if n_targets < 2:
        raise ConfigError(f"n_targets: must be >= 2, got {n_targets}")
    refine = doc.get("refine", False)
    if not isinstance(refine, bool):
        raise ConfigError(f"refine: expected a boolean, got {refine!r}")
    scheme = doc.get("scheme")
    if mode == "gaussian-region" and not isinstance(scheme, dict):
        raise ConfigError("scheme: required for gaussian-region mode")
    dm = doc.get("dm")
    if mode in ("dm-theorem1", "dm-theorem2") and not isinstance(dm, dict):
        raise ConfigError(f"dm: required for {mode} mode")
    return ExperimentConfig(
        mode=mode, power=power, power_raw=power_raw, thetas=thetas,
        grid=grid, out=str(doc.get("out", "results")), workers=workers,
        seed=seed, refine=refine, n_targets=n_targets,
        r12_targets=_parse_targets(doc.get("r12_targets")), trials=trials,
        scheme=scheme, dm=dm)


def _resolved_doc(config: ExperimentConfig) -> dict:
    doc = {
        "mode": config.mode,
        "power": config.power_raw,
        "theta": [float(t) for t in config.thetas],
        "grid": {name: [float(v) for v in getattr(config.grid, name)]
                 for name in SWEEP_AXES + ("theta",)},
        "out": config.out,
        "workers": config.workers,
        "seed": config.seed,
        "refine": config.refine,
        "n_targets": config.n_targets,
        "trials": config.trials,
    }
    if config.r12_targets:
        doc["r12_targets"] = [float(t) for t in config.r12_targets]
    if config.scheme is not None:
        doc["scheme"] = config.scheme
    if config.dm is not None:
        doc["dm"] = config.dm
    return doc


# ---------------------------------------------------------------------------
# Mode implementations.  Each returns (csv rows written, error rows).
# ---------------------------------------------------------------------------


def _gaussian_row(params: SchemeParams, bounds) -> list:
    return [params.rho, params.gamma, params.alpha1, params.alpha2,
            params.rho_u1s, params.theta, params.beta, params.f, params.nhat,
            bounds.r13_max, bounds.r12_max, bounds.r13_plus_r12_max,
            bounds.r23_max, bounds.feasible, params.rho_u2s]


def _parse_scheme(section: dict):
    unknown = sorted(str(k) for k in set(section) - set(_SCHEME_FIELDS))
    if unknown:
        raise ConfigError(f"scheme.{unknown[0]}: unknown field")
    values = {}
    solve = False
    for name in _SCHEME_FIELDS:
        if name == "nhat":
            entry = section.get("nhat", "solve")
            if entry == "solve":
                solve = True
                continue
            values["nhat"] = _as_number(entry, "scheme.nhat")
        elif name == "rho_u2s":
            if name in section:
                values[name] = _as_number(section[name], f"scheme.{name}")
        else:
            values[name] = _as_number(_need(section, name, "scheme"),
                                      f"scheme.{name}")
    try:
        return SchemeParams(**values), solve
    except (ValueError, RelayToolkitError) as exc:
        raise ConfigError(f"scheme: {exc}") from None


def _run_gaussian_region(config: ExperimentConfig, out: Path):
    params, solve = _parse_scheme(config.scheme)
    if solve:
        params = replace(params, nhat=solve_nhat(config.power, params))
    bounds = evaluate_gaussian_region(config.power, params)
    _write_csv(out / "gaussian_region.csv", _GAUSSIAN_COLUMNS,
               [_gaussian_row(params, bounds)])
    return ["gaussian_region.csv"], []


def _resolve_targets(config: ExperimentConfig) -> tuple:
    if config.r12_targets:
        return config.r12_targets
    base = sweep(config.power, config.grid, config.thetas[0],
                 workers=config.workers)
    endpoint = max_r12_endpoint(base)
    if endpoint <= 0.0:
        return (0.0,)
    return tuple(endpoint * k / (config.n_targets - 1)
                 for k in range(config.n_targets))


def _run_tradeoff(config: ExperimentConfig, out: Path):
    targets = _resolve_targets(config)
    artifacts = []
    errors = []
    curve_files = []
    curves = []
    for theta in config.thetas:
        curve = tradeoff_curve(config.power, theta, config.grid, targets,
                               workers=config.workers,
                               refine_points=config.refine)
        name = f"tradeoff_theta_{theta:g}.csv"
        rows = [[p.r12, p.r13] + _gaussian_row(p.params,
                                               evaluate_gaussian_region(
                                                   config.power, p.params))
                for p in curve.points]
        _write_csv(out / name, ("r12", "r13") + _GAUSSIAN_COLUMNS, rows)
        artifacts.append(name)
        curve_files.append((theta, name))
        curves.append((theta, curve.points))
        for target in curve.omitted_targets:
            errors.append([f"tradeoff theta={theta:g}",
                           f"no admissible cell for r12 target {target:.9g}"])
    write_plot_script(curve_files, out / "plot_tradeoff.py")
    render_tradeoff_png(curves, out / "tradeoff.png")
    artifacts += ["plot_tradeoff.py", "tradeoff.png"]
    return artifacts, errors, targets


def _run_sdrc(config: ExperimentConfig, out: Path):
    rate = sdrc_scalar(config.power, config.grid, workers=config.workers)
    _write_csv(out / "sdrc.csv", ("sdrc_rate",), [[rate]])
    return ["sdrc.csv"], []


def _parse_alphabet(section, path: str) -> AlphabetSpec:
    if not isinstance(section, dict):
        raise ConfigError(f"{path}: expected a mapping of alphabet sizes")
    unknown = sorted(str(k) for k in set(section) - set(AlphabetSpec().__dict__))
    if unknown:
        raise ConfigError(f"{path}.{unknown[0]}: unknown alphabet name")
    try:
        return AlphabetSpec(**{k: _as_int(v, f"{path}.{k}")
                               for k, v in section.items()})
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from None


def _kernels_from_config(section: dict, names, path: str) -> dict:
    unknown = set(section) - set(names)
    if unknown:
        raise ConfigError(f"{path}.{sorted(unknown)[0]}: unknown kernel")
    out = {}
    for name in names:
        entry = _need(section, name, path)
        try:
            out[name] = np.asarray(entry, dtype=float)
        except (TypeError, ValueError):
            raise ConfigError(
                f"{path}.{name}: expected a nested list of numbers") from None
    return out


def _dm_instance(config: ExperimentConfig, causal: bool):
    section = config.dm
    unknown = set(section) - {"sizes", "kernels", "seed"}
    if unknown:
        raise ConfigError(f"dm.{sorted(unknown)[0]}: unknown field")
    alphabet = _parse_alphabet(_need(section, "sizes", "dm"), "dm.sizes")
    if "kernels" in section:
        kernels = section["kernels"]
        if not isinstance(kernels, dict):
            raise ConfigError("dm.kernels: expected a mapping of kernel tables")
        try:
            if causal:
                named = _kernels_from_config(
                    kernels, ("p_state", "p_k2", "p_q2_given_k2", "p_t1t2",
                              "channel", "p_yhat_given", "f1", "f2"),
                    "dm.kernels")
                named["f1"] = named["f1"].astype(np.int64)
                named["f2"] = named["f2"].astype(np.int64)
                return CausalFactorization(alphabet=alphabet, **named)
            named = _kernels_from_config(
                kernels, tuple(f.name for f in
                               DmFactorization.__dataclass_fields__.values()
                               if f.name != "alphabet"), "dm.kernels")
            return DmFactorization(alphabet=alphabet, **named)
        except RelayToolkitError as exc:
            raise ConfigError(f"dm.kernels: {exc}") from None
    rng = np.random.default_rng(_as_int(section.get("seed", config.seed),
                                        "dm.seed"))
    if causal:
        return random_causal_factorization(alphabet, rng)
    return random_dm_factorization(alphabet, rng)


def _run_dm(config: ExperimentConfig, out: Path, causal: bool):
    fact = _dm_instance(config, causal)
    if causal:
        bounds = evaluate_theorem2(fact)
        name = "dm_theorem2.csv"
        header = ("r13_max", "r12_max", "sum_max", "r23_max", "feasible")
        row = [bounds.r13_max, bounds.r12_max, bounds.r13_plus_r12_max,
               bounds.r23_max, bounds.feasible]
    else:
        mi = mi_values_from_joint(build_joint(fact))
        bounds = bounds_from_mi(mi)
        name = "dm_theorem1.csv"
        header = _MI_COLUMNS + ("r13_max", "r12_max", "sum_max", "r23_max",
                                "feasible")
        row = [getattr(mi, field) for field in _MI_COLUMNS]
        row += [bounds.r13_max, bounds.r12_max, bounds.r13_plus_r12_max,
                bounds.r23_max, bounds.feasible]
    _write_csv(out / name, header, [row])
    return [name], []


def _bounds_gap(a, b) -> float:
    return max(abs(a.r13_max - b.r13_max), abs(a.r12_max - b.r12_max),
               abs(a.r13_plus_r12_max - b.r13_plus_r12_max),
               abs(a.r23_max - b.r23_max))


def _run_reductions(config: ExperimentConfig, out: Path):
    """Cross-check specialized evaluations against their direct expressions."""
    rng = np.random.default_rng(config.seed)
    rows = []
    for trial in range(config.trials):
        p_u = _random_kernel(rng, (), (2, 2))
        p_v = _random_kernel(rng, (), (2,))
        p_x2v = _random_kernel(rng, (2,), (2,))
        p_x1u = _random_kernel(rng, (2, 2), (2,))
        ch2 = _random_kernel(rng, (2, 2), (2, 2))
        p_yh = _random_kernel(rng, (2, 2, 2, 2), (2,))
        emb = evaluate_theorem1(state_free_factorization(
            p_u, p_v, p_x2v, p_x1u, ch2, p_yh))
        ref = direct_state_free_bounds(p_u, p_v, p_x2v, p_x1u, ch2, p_yh)
        rows.append(["state_free", trial, _bounds_gap(emb, ref),
                     emb.feasible == ref.feasible])

        p_ss1 = _random_kernel(rng, (), (2, 2))
        p_tt = _random_kernel(rng, (2,), (2, 2))
        p_x1 = _random_kernel(rng, (2, 2, 2), (2,))
        chd = _random_kernel(rng, (2, 2), (2, 2))
        emb = evaluate_theorem1(no_relay_factorization(p_ss1, p_tt, p_x1, chd))
        ref = direct_no_relay_bounds(p_ss1, p_tt, p_x1, chd)
        rows.append(["no_relay", trial, _bounds_gap(emb, ref),
                     emb.feasible == ref.feasible])

        p_s = _random_kernel(rng, (), (2,))
        p_x2 = _random_kernel(rng, (), (2,))
        p_t1s = _random_kernel(rng, (2,), (2,))
        p_x1st = _random_kernel(rng, (2, 2), (2,))
        chf = _random_kernel(rng, (2, 2, 2), (2, 2))
        p_yh2 = _random_kernel(rng, (2, 2), (2,))
        emb = evaluate_theorem1(single_user_source_csi_factorization(
            p_s, p_x2, p_t1s, p_x1st, chf, p_yh2))
        ref = direct_single_user_source_csi_bounds(
            p_s, p_x2, p_t1s, p_x1st, chf, p_yh2)
        rows.append(["single_user_source_csi", trial, _bounds_gap(emb, ref),
                     emb.feasible == ref.feasible])

        for name, src, rel in (("perfect_csi_source", True, False),
                               ("perfect_csi_relay", False, True),
                               ("perfect_csi_both", True, True)):
            alphabet = AlphabetSpec(s=2, s1=2 if src else 1, s2=2 if rel else 1,
                                    k2=2, q2=2, t1=2, t2=2, x1=2, x2=2,
                                    yhat2=2, y2=2, y3=2)
            fact = random_dm_factorization(alphabet, rng)
            state = (perfect_full_csi_state if src and rel
                     else perfect_source_csi_state if src
                     else perfect_relay_csi_state)(_random_kernel(rng, (), (2,)))
            fact = replace(fact, p_state=state)
            emb = evaluate_theorem1(fact)
            ref = direct_perfect_csi_bounds(fact, src, rel)
            rows.append([name, trial, _bounds_gap(emb, ref),
                         emb.feasible == ref.feasible])
    header = ("family", "trial", "max_abs_diff", "flags_agree")
    lines = [",".join(header)]
    for family, trial, gap, agree in rows:
        lines.append(f"{family},{trial},{_fmt(gap)},{_fmt(agree)}")
    (out / "reductions.csv").write_text("\n".join(lines) + "\n",
                                        encoding="utf-8", newline="\n")
    errors = [[f"reductions {family} trial {trial}",
               f"identity gap {gap:.3e} exceeds 1e-9"]
              for family, trial, gap, agree in rows
              if gap > 1e-9 or not agree]
    return ["reductions.csv"], errors


def run(config: ExperimentConfig) -> int:
    """Execute a resolved experiment; returns the process exit status."""
    out = Path(config.out)
    out.mkdir(parents=True, exist_ok=True)
    start = time.monotonic()
    resolved_targets = None
    if config.mode == "gaussian-region":
        artifacts, errors = _run_gaussian_region(config, out)
    elif config.mode == "tradeoff":
        artifacts, errors, resolved_targets = _run_tradeoff(config, out)
    elif config.mode == "sdrc":
        artifacts, errors = _run_sdrc(config, out)
    elif config.mode == "dm-theorem1":
        artifacts, errors = _run_dm(config, out, causal=False)
    elif config.mode == "dm-theorem2":
        artifacts, errors = _run_dm(config, out, causal=True)
    else:
        artifacts, errors = _run_reductions(config, out)

    error_lines = ["context,detail"]
    error_lines += [f"{ctx},{detail}" for ctx, detail in errors]
    (out / "errors.csv").write_text("\n".join(error_lines) + "\n",
                                    encoding="utf-8", newline="\n")
    artifacts.append("errors.csv")

    resolved = _resolved_doc(config)
    if resolved_targets is not None:
        resolved["r12_targets"] = [float(t) for t in resolved_targets]
    manifest = {
        "version": __version__,
        "wall_time_seconds": round(time.monotonic() - start, 3),
        "artifacts": artifacts,
        "config": resolved,
    }
    with open(out / "manifest.yaml", "w", encoding="utf-8") as fh:
        yaml.safe_dump(manifest, fh, sort_keys=False)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sdrelay",
        description="Achievable-rate regions for state-dependent relay "
                    "channels with private messages.")
    parser.add_argument("--config", type=str, default=None,
                        help="YAML config file (a written manifest also works)")
    parser.add_argument("--mode", type=str, default=None, choices=_MODES)
    parser.add_argument("--out", type=str, default=None,
                        help="output directory (default: results)")
    parser.add_argument("--theta", type=str, default=None,
                        help="comma-separated list of relay power fractions")
    parser.add_argument("--workers", type=int, default=None)
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--refine", action="store_true", default=False,
                        help="polish frontier points with local search")
    for name in _POWER_FIELDS:
        parser.add_argument(f"--{name}-db", type=float, default=None,
                            dest=f"{name}_db")
        parser.add_argument(f"--{name}-linear", type=float, default=None,
                            dest=f"{name}_linear")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    overrides = vars(args).copy()
    config_path = overrides.pop("config")
    if overrides.get("theta") is not None:
        try:
            overrides["theta"] = [float(v) for v in
                                  overrides["theta"].split(",") if v.strip()]
        except ValueError:
            print("theta: expected comma-separated numbers", file=sys.stderr)
            return 2
    doc = {}
    if config_path is not None:
        try:
            with open(config_path, encoding="utf-8") as fh:
                doc = yaml.safe_load(fh) or {}
        except OSError as exc:
            print(f"config: {exc}", file=sys.stderr)
            return 2
        except yaml.YAMLError as exc:
            print(f"config: invalid YAML: {exc}", file=sys.stderr)
            return 2
    try:
        config = resolve_config(doc, overrides)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    try:
        return run(config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except RelayToolkitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
