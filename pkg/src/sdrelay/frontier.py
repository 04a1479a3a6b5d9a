"""Parameter sweeps and trade-off frontier extraction for the Gaussian model.

The sweep evaluates the closed-form rate bounds over a dense parameter grid
with the compression noise eliminated at constraint equality in every cell.
The heavy lifting is plain array arithmetic on conditional variances (the
conditioning sets are small and fixed), which keeps million-cell grids in
the seconds range; the generic covariance path in `gaussian` serves as the
reference implementation the engine is tested against.
"""

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .errors import ConstraintInfeasibleError, ParameterInfeasibleError
from .gaussian import PowerConfig, SchemeParams
from .region import (REGION_TOL, RateBounds, evaluate_gaussian_region,
                     solve_nhat)

logger = logging.getLogger(__name__)

_LN4 = 2.0 * math.log(2.0)
_DEG = 1e-12  # relative threshold below which a variance counts as zero

# Cell enumeration order; ties in sweeps resolve to the lexicographically
# smallest parameter vector because numpy argmax picks the first maximum.
SWEEP_AXES = ("rho", "gamma", "alpha1", "alpha2", "rho_u1s", "rho_u2s",
              "beta", "f")

_UNIT_AXES = {"gamma", "theta", "beta"}
_SIGNED_AXES = {"rho", "rho_u1s", "rho_u2s", "f"}


def _axis(lo: float, hi: float, n: int) -> tuple:
    return tuple(float(x) for x in np.linspace(lo, hi, n))


@dataclass(frozen=True)
class GridSpec:
    """Grid values per scheme parameter, each axis strictly increasing."""

    rho: tuple = _axis(-1.0, 1.0, 9)
    gamma: tuple = _axis(0.0, 1.0, 11)
    alpha1: tuple = _axis(0.0, 1.2, 13)
    alpha2: tuple = _axis(0.0, 1.2, 13)
    rho_u1s: tuple = _axis(-1.0, 1.0, 9)
    theta: tuple = _axis(0.0, 1.0, 11)
    beta: tuple = _axis(0.0, 1.0, 11)
    f: tuple = (0.0,)
    rho_u2s: tuple = (0.0,)

    def __post_init__(self):
        for name in SWEEP_AXES + ("theta",):
            values = tuple(float(v) for v in getattr(self, name))
            object.__setattr__(self, name, values)
            if not values:
                raise ValueError(f"{name} axis must not be empty")
            if any(b <= a for a, b in zip(values, values[1:])):
                raise ValueError(f"{name} axis must be strictly increasing")
            if name in _UNIT_AXES and not all(0.0 <= v <= 1.0 for v in values):
                raise ValueError(f"{name} axis must lie in [0, 1]")
            if name in _SIGNED_AXES and not all(-1.0 <= v <= 1.0 for v in values):
                raise ValueError(f"{name} axis must lie in [-1, 1]")
            if not all(math.isfinite(v) for v in values):
                raise ValueError(f"{name} axis must be finite")

    @property
    def cells(self) -> int:
        return math.prod(len(getattr(self, name)) for name in SWEEP_AXES)


_COLUMNS = ("rho", "gamma", "alpha1", "alpha2", "rho_u1s", "rho_u2s",
            "theta", "beta", "f", "nhat", "r13_max", "r12_max",
            "r13_plus_r12_max", "r23_max")


def _mi_pair(va, vb, cab, deg):
    """I(A; B) in bits for scalar components; deg marks degenerate cells."""
    det = va * vb - cab * cab
    ratio = np.where(det > 0.0, va * vb / np.where(det > 0.0, det, 1.0), np.inf)
    return np.where(deg, 0.0, 0.5 * np.log2(np.maximum(ratio, 1.0)))


def _sweep_chunk(power: PowerConfig, axes: tuple, theta: float,
                 lo: int, hi: int) -> dict:
    """Evaluate grid cells [lo, hi) into flat column arrays."""
    dims = tuple(len(ax) for ax in axes)
    coords = np.unravel_index(np.arange(lo, hi), dims)
    rho, gamma, alpha1, alpha2, r1s, r2s, beta, f = (
        np.asarray(ax, dtype=float)[co] for ax, co in zip(axes, coords))
    p1, p2, n2, n3, q = power.p1, power.p2, power.n2, power.n3, power.q
    th = float(theta)

    with np.errstate(all="ignore"):
        # (S, U1, U2) correlation matrix must be PSD; unit minors hold by
        # construction, so the determinant carries the whole gate.
        corr_det = (1.0 + 2.0 * rho * r1s * r2s
                    - rho * rho - r1s * r1s - r2s * r2s)
        valid = corr_det >= -3.0e-9

        pu2 = gamma * p1
        spu2 = np.sqrt(pu2)
        spu1 = -rho * spu2 + np.sqrt(rho * rho * pu2 + (1.0 - gamma) * p1)
        pu1 = spu1 * spu1
        sq = math.sqrt(q)
        c12 = rho * spu1 * spu2
        c1s = r1s * spu1 * sq
        c2s = r2s * spu2 * sq

        vx1 = pu1 + pu2 + 2.0 * c12
        x1s = c1s + c2s
        vy2 = vx1 + n2 + q + 2.0 * x1s
        vy3 = vx1 + p2 + n3 + q + 2.0 * x1s
        cy2y3 = vx1 + 2.0 * x1s + q

        vt1 = pu1 + alpha1 * alpha1 * q + 2.0 * alpha1 * c1s
        vt2 = pu2 + alpha2 * alpha2 * q + 2.0 * alpha2 * c2s
        scale_t1 = pu1 + alpha1 * alpha1 * q
        scale_t2 = pu2 + alpha2 * alpha2 * q
        deg_t1 = vt1 <= _DEG * scale_t1
        deg_t2 = vt2 <= _DEG * scale_t2
        ct1s = c1s + alpha1 * q
        ct2s = c2s + alpha2 * q
        ct1t2 = c12 + alpha2 * c1s + alpha1 * c2s + alpha1 * alpha2 * q
        ct1y2 = pu1 + c12 + c1s + alpha1 * (q + x1s)
        ct2y2 = c12 + pu2 + c2s + alpha2 * (q + x1s)
        ct1y3 = ct1y2  # X2, Z2, Z3 are all uncorrelated with T1
        ct2y3 = ct2y2

        i_t1_s = _mi_pair(vt1, q, ct1s, deg_t1)
        i_t2_s = _mi_pair(vt2, q, ct2s, deg_t2)

        vt1_s = np.maximum(vt1 - ct1s * ct1s / q, 0.0)
        vt2_s = np.maximum(vt2 - ct2s * ct2s / q, 0.0)
        c12_s = ct1t2 - ct1s * ct2s / q
        deg_pair = ((vt1_s <= _DEG * scale_t1) | (vt2_s <= _DEG * scale_t2)
                    | deg_t1 | deg_t2)
        i_t1_t2_s = _mi_pair(vt1_s, vt2_s, c12_s, deg_pair)

        # (V, X2) is independent of (T2, Y2), so the conditioning drops.
        i_t2_relay = _mi_pair(vt2, vy2, ct2y2, deg_t2)

        # Var(Y3 | V) = vy3 - theta*p2 and Var(Y3 | V, X2) = vy3 - p2.
        i_k2_y3 = 0.5 * np.log2(np.maximum(vy3 / (vy3 - th * p2), 1.0))
        budget = 0.5 * np.log2(np.maximum((vy3 - th * p2) / (vy3 - p2), 1.0))

        # Quantizer input W = beta*Y2 + f*T2 given (V, X2, Y3).
        vw = beta * beta * vy2 + f * f * vt2 + 2.0 * beta * f * ct2y2
        cwy3 = beta * cy2y3 + f * ct2y3
        vy3c = vy3 - p2
        sigw = np.maximum(vw - cwy3 * cwy3 / vy3c, 0.0)
        scale_w = beta * beta * vy2 + f * f * vt2
        quiet = sigw <= _DEG * scale_w  # quantization carries no information
        solvable = quiet | (budget > REGION_TOL)
        nhat_eval = np.where(quiet | ~solvable, 1.0,
                             sigw / np.expm1(_LN4 * np.maximum(budget, 1e-300)))
        nhat = np.where(solvable, nhat_eval, np.nan)

        # Destination decoding term at the solved compression noise.
        vyh = vw + nhat_eval
        ct1yh = beta * ct1y2 + f * ct1t2
        det2 = vyh * vy3c - cwy3 * cwy3
        det3 = (vt1 * det2
                - ct1yh * (ct1yh * vy3c - cwy3 * ct1y3)
                + ct1y3 * (ct1yh * cwy3 - vyh * ct1y3))
        ratio = np.where(det3 > 0.0,
                         vt1 * det2 / np.where(det3 > 0.0, det3, 1.0), np.inf)
        i_t1_out = np.where(deg_t1, 0.0, 0.5 * np.log2(np.maximum(ratio, 1.0)))

        r13 = np.maximum(i_t1_out - i_t1_s, 0.0)
        r12 = np.maximum(i_t2_relay - i_t2_s, 0.0)
        rsum_raw = i_t1_out + i_t2_relay - i_t1_s - i_t2_s - i_t1_t2_s
        rsum = np.maximum(rsum_raw, 0.0)
        feasible = valid & solvable
        clamped = ((i_t1_out - i_t1_s < 0.0) | (i_t2_relay - i_t2_s < 0.0)
                   | (rsum_raw < 0.0))

        nan = np.where(valid, 0.0, np.nan)
        return {
            "rho": rho, "gamma": gamma, "alpha1": alpha1, "alpha2": alpha2,
            "rho_u1s": r1s, "rho_u2s": r2s,
            "theta": np.full(rho.shape, th), "beta": beta, "f": f,
            "nhat": nhat + nan,
            "r13_max": r13 + nan, "r12_max": r12 + nan,
            "r13_plus_r12_max": rsum + nan, "r23_max": i_k2_y3 + nan,
            "feasible": feasible, "valid": valid, "clamped": clamped,
        }


@dataclass
class SweepResult:
    """Columnar sweep output; indexing materializes typed records.

    Cells that fail the correlation PSD gate carry valid=False and NaN
    values; cells whose compression constraint cannot be met carry
    feasible=False and NaN nhat (their bounds are evaluated at the sentinel
    noise variance and are only meaningful through the flags).
    """

    power: PowerConfig
    theta: float
    grid: GridSpec
    columns: dict

    def __len__(self) -> int:
        return self.columns["rho"].shape[0]

    def column(self, name: str) -> np.ndarray:
        return self.columns[name]

    def params_at(self, i: int):
        if not self.columns["valid"][i]:
            return None
        c = self.columns
        return SchemeParams(
            rho=float(c["rho"][i]), gamma=float(c["gamma"][i]),
            alpha1=float(c["alpha1"][i]), alpha2=float(c["alpha2"][i]),
            rho_u1s=float(c["rho_u1s"][i]), theta=float(c["theta"][i]),
            beta=float(c["beta"][i]), f=float(c["f"][i]),
            nhat=float(np.nan_to_num(c["nhat"][i], nan=1.0)),
            rho_u2s=float(c["rho_u2s"][i]))

    def bounds_at(self, i: int):
        if not self.columns["valid"][i]:
            return None
        c = self.columns
        return RateBounds(
            r13_max=float(c["r13_max"][i]), r12_max=float(c["r12_max"][i]),
            r13_plus_r12_max=float(c["r13_plus_r12_max"][i]),
            r23_max=float(c["r23_max"][i]),
            feasible=bool(c["feasible"][i]), clamped=bool(c["clamped"][i]))

    def __getitem__(self, i: int):
        return self.params_at(i), self.bounds_at(i)


def sweep(power: PowerConfig, grid: GridSpec, theta: float,
          workers: int = 1, chunk_size: int = 1 << 16) -> SweepResult:
    """Evaluate the rate bounds over every grid cell at a fixed theta.

    Cells are independent; with workers > 1 the chunks run in separate
    processes and are written back by index, so the output does not depend
    on scheduling.
    """
    if not 0.0 <= theta <= 1.0:
        raise ValueError(f"theta must lie in [0, 1], got {theta!r}")
    axes = tuple(getattr(grid, name) for name in SWEEP_AXES)
    n = grid.cells
    edges = [(lo, min(lo + chunk_size, n)) for lo in range(0, n, chunk_size)]
    parts: list = [None] * len(edges)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_sweep_chunk, power, axes, theta, lo, hi)
                       for lo, hi in edges]
            for k, fut in enumerate(futures):
                parts[k] = fut.result()
    else:
        for k, (lo, hi) in enumerate(edges):
            parts[k] = _sweep_chunk(power, axes, theta, lo, hi)
    columns = {name: np.concatenate([p[name] for p in parts])
               for name in parts[0]}
    return SweepResult(power=power, theta=float(theta), grid=grid,
                       columns=columns)


def max_r12_endpoint(result: SweepResult) -> float:
    """Largest r12 any admissible cell supports jointly with r13 = 0."""
    c = result.columns
    mask = c["valid"] & c["feasible"]
    if not mask.any():
        return 0.0
    best = np.where(mask, np.minimum(c["r12_max"], c["r13_plus_r12_max"]),
                    -np.inf)
    return float(np.max(best))


@dataclass(frozen=True)
class FrontierPoint:
    """One point of the trade-off curve with the parameters achieving it."""

    r12: float
    r13: float
    r23: float
    params: SchemeParams


@dataclass(frozen=True)
class FrontierCurve:
    """Best r13 per r12 target: a monotone non-increasing staircase."""

    theta: float
    points: tuple
    omitted_targets: tuple = ()

    def __post_init__(self):
        r12 = [p.r12 for p in self.points]
        r13 = [p.r13 for p in self.points]
        if any(b <= a for a, b in zip(r12, r12[1:])):
            raise ValueError("frontier r12 values must be strictly increasing")
        if any(b > a + 1e-12 for a, b in zip(r13, r13[1:])):
            raise ValueError("frontier r13 values must be non-increasing")


def _best_cell(result: SweepResult, target: float):
    c = result.columns
    value = np.minimum(c["r13_max"], c["r13_plus_r12_max"] - target)
    eligible = c["valid"] & c["feasible"] & (c["r12_max"] >= target)
    value = np.where(eligible, value, -np.inf)
    i = int(np.argmax(value))  # first maximum = lexicographically smallest
    if not np.isfinite(value[i]) or value[i] < 0.0:
        return None
    return i, float(value[i])


def tradeoff_curve(power: PowerConfig, theta: float, grid: GridSpec,
                   r12_targets, workers: int = 1,
                   refine_points: bool = False) -> FrontierCurve:
    """Maximize r13 over the sweep for each r12 target.

    Targets with no admissible cell are omitted with a warning.  Optional
    local refinement polishes each selected cell; the staircase is then
    re-enforced by carrying any later, better point back to smaller
    targets (always admissible there).
    """
    targets = [float(t) for t in r12_targets]
    if not targets or any(t < 0.0 for t in targets):
        raise ValueError("r12 targets must be nonnegative and non-empty")
    if any(b <= a for a, b in zip(targets, targets[1:])):
        raise ValueError("r12 targets must be strictly increasing")

    result = sweep(power, grid, theta, workers=workers)
    chosen: list = []
    omitted: list = []
    for t in targets:
        best = _best_cell(result, t)
        if best is None:
            omitted.append(t)
            continue
        i, r13 = best
        chosen.append((t, r13, float(result.column("r23_max")[i]),
                       result.params_at(i)))
    if omitted:
        logger.warning("no admissible sweep cell for r12 targets %s at theta=%g",
                       omitted, theta)

    if refine_points:
        polished = []
        for t, _, _, params in chosen:
            ref_params = refine(power, params, _frontier_objective(t),
                                frozen=("theta", "rho_u2s"))
            ref_bounds = evaluate_gaussian_region(power, ref_params)
            polished.append((t, min(ref_bounds.r13_max,
                                    ref_bounds.r13_plus_r12_max - t),
                             ref_bounds.r23_max, ref_params))
        chosen = polished
        for k in range(len(chosen) - 2, -1, -1):
            # A point admissible at a larger target is admissible here too.
            if chosen[k + 1][1] > chosen[k][1]:
                chosen[k] = (chosen[k][0],) + chosen[k + 1][1:]

    points = tuple(FrontierPoint(r12=t, r13=r13, r23=r23, params=params)
                   for t, r13, r23, params in chosen)
    return FrontierCurve(theta=float(theta), points=points,
                         omitted_targets=tuple(omitted))


def _frontier_objective(target: float):
    def objective(bounds: RateBounds) -> float:
        shortfall = max(0.0, target - bounds.r12_max)
        return (min(bounds.r13_max, bounds.r13_plus_r12_max - target)
                - 1e3 * shortfall)
    return objective


_REFINE_BOUNDS = {
    "rho": (-1.0, 1.0), "gamma": (0.0, 1.0), "alpha1": (-10.0, 10.0),
    "alpha2": (-10.0, 10.0), "rho_u1s": (-1.0, 1.0), "rho_u2s": (-1.0, 1.0),
    "theta": (0.0, 1.0), "beta": (0.0, 1.0), "f": (-1.0, 1.0),
}


def _refine_eval(power: PowerConfig, params: SchemeParams, objective):
    try:
        solved = replace(params, nhat=solve_nhat(power, params))
        return objective(evaluate_gaussian_region(power, solved)), solved
    except (ParameterInfeasibleError, ConstraintInfeasibleError):
        return -math.inf, None


def refine(power: PowerConfig, start: SchemeParams, objective,
           frozen: tuple = (), step: float = 0.25,
           min_step: float = 1e-4) -> SchemeParams:
    """Deterministic coordinate search with shrinking steps.

    Maximizes objective(bounds) over the scheme parameters, re-solving the
    compression noise at every candidate.  Infeasible candidates are
    skipped; the returned parameters never score below the start point.
    """
    names = [n for n in _REFINE_BOUNDS if n not in frozen]
    best_score, best = _refine_eval(power, start, objective)
    if best is None:
        raise ParameterInfeasibleError("refine start point is not evaluable")
    while step >= min_step:
        improved = False
        for name in names:
            lo, hi = _REFINE_BOUNDS[name]
            here = getattr(best, name)
            for cand in (here - step, here + step):
                cand = min(max(cand, lo), hi)
                if cand == here:
                    continue
                try:
                    trial = replace(best, **{name: cand})
                except (ValueError, ParameterInfeasibleError):
                    continue
                score, solved = _refine_eval(power, trial, objective)
                if solved is not None and score > best_score + 1e-12:
                    best_score, best = score, solved
                    improved = True
        if not improved:
            step *= 0.5
    return best


def sdrc_scalar(power: PowerConfig, grid: GridSpec, workers: int = 1) -> float:
    """Best r13 with the common stream and decode-forward carrier disabled.

    Pins gamma = 0 and theta = 0, leaving a single private stream against
    known state plus a pure compress-forward relay, and returns the largest
    feasible r13 bound on the remaining grid axes.
    """
    pinned = replace(grid, gamma=(0.0,))
    result = sweep(power, pinned, theta=0.0, workers=workers)
    mask = result.column("valid") & result.column("feasible")
    if not mask.any():
        return 0.0
    return float(np.max(np.where(mask, result.column("r13_max"), -np.inf)))
