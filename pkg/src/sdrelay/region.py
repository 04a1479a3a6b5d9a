"""Achievable-rate bounds from mutual-information bundles.

The non-causal coding theorem bounds the private rate to the destination
(r13), the private rate to the relay (r12), their sum, and the relay's own
rate (r23) by differences of mutual informations, subject to a compression
constraint tying the quantized relay observation to the forwarding rate.
This module evaluates those bounds, solves the compression constraint for
the quantization noise, and checks the underlying auxiliary-rate system
directly as a linear feasibility problem.
"""

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import linprog

from .errors import ConstraintInfeasibleError, RelayToolkitError
from .gaussian import (GaussianJoint, PowerConfig, SchemeParams,
                       assemble_covariance, conditional_mi)

# Strict theorem inequalities are implemented as non-strict with this slack.
REGION_TOL = 1e-9


@dataclass(frozen=True)
class MIValues:
    """The twelve mutual-information terms that drive the rate bounds.

    i_t1_out: destination decodes T1 from (YHAT2, Y3) given the relay codes;
    i_t2_relay: relay decodes T2 from its own observation; i_*_s: binning
    costs against the state; i_t1_t2_s: stream coupling given the state;
    i_k2_*: decode-forward carrier terms; i_q2_*: compress-forward carrier
    terms; i_yhat_*: quantization terms, with i_yhat_cond_y3 the residual
    after side-information decoding at the destination.
    """

    i_t1_out: float
    i_t1_s: float
    i_t2_relay: float
    i_t2_s: float
    i_t1_t2_s: float
    i_k2_y3: float
    i_k2_s2: float
    i_q2_y3: float
    i_q2_s2: float
    i_yhat_src: float
    i_yhat_y3: float
    i_yhat_cond_y3: float

    def __post_init__(self):
        for name, value in self.__dict__.items():
            if not math.isfinite(value) or value < 0.0:
                raise ValueError(f"{name} must be finite and >= 0, got {value!r}")
        # Conditioning on Y3 cannot increase the quantization residual.
        if self.i_yhat_cond_y3 > self.i_yhat_src + 1e-9:
            raise ValueError(
                "i_yhat_cond_y3 exceeds i_yhat_src by more than 1e-9 "
                f"({self.i_yhat_cond_y3!r} > {self.i_yhat_src!r})")


@dataclass(frozen=True)
class RateBounds:
    """Evaluated right-hand sides of the four rate inequalities."""

    r13_max: float
    r12_max: float
    r13_plus_r12_max: float
    r23_max: float
    feasible: bool
    clamped: bool = False

    def __post_init__(self):
        for name in ("r13_max", "r12_max", "r13_plus_r12_max", "r23_max"):
            value = getattr(self, name)
            if not math.isfinite(value) or value < 0.0:
                raise ValueError(f"{name} must be finite and >= 0, got {value!r}")
        if self.r13_plus_r12_max > self.r13_max + self.r12_max + 1e-9:
            raise ValueError("sum bound exceeds the sum of individual bounds")


@dataclass(frozen=True)
class RatePoint:
    """A candidate rate triple (r13, r12, r23), all nonnegative."""

    r13: float
    r12: float
    r23: float

    def __post_init__(self):
        for name, value in self.__dict__.items():
            if not math.isfinite(value) or value < 0.0:
                raise ValueError(f"{name} must be finite and >= 0, got {value!r}")


def bounds_from_mi(mi: MIValues, tol: float = REGION_TOL) -> RateBounds:
    """Combine MI terms into rate bounds; negative right-hand sides clamp to 0."""
    raw = (
        mi.i_t1_out - mi.i_t1_s,
        mi.i_t2_relay - mi.i_t2_s,
        mi.i_t1_out + mi.i_t2_relay - mi.i_t1_s - mi.i_t2_s - mi.i_t1_t2_s,
        mi.i_k2_y3 - mi.i_k2_s2,
    )
    feasible = mi.i_yhat_cond_y3 <= mi.i_q2_y3 - mi.i_q2_s2 + tol
    return RateBounds(*(max(0.0, r) for r in raw), feasible=feasible,
                      clamped=any(r < 0.0 for r in raw))


def mi_values_gaussian(power: PowerConfig, params: SchemeParams) -> MIValues:
    """Evaluate the MI bundle for the Gaussian model.

    The source knows the state, the relay does not, so the relay-side state
    terms vanish and the decode-forward carrier V and transmitted X2 play
    the roles of the relay's cloud and satellite codewords.
    """
    joint = assemble_covariance(power, params)
    cmi = lambda a, b, c=(): conditional_mi(joint, a, b, c)
    return MIValues(
        i_t1_out=cmi({"T1"}, {"YHAT2", "Y3"}, {"V", "X2"}),
        i_t1_s=cmi({"T1"}, {"S"}),
        i_t2_relay=cmi({"T2"}, {"Y2"}, {"V", "X2"}),
        i_t2_s=cmi({"T2"}, {"S"}),
        i_t1_t2_s=cmi({"T1"}, {"T2"}, {"S"}),
        i_k2_y3=cmi({"V"}, {"Y3"}),
        i_k2_s2=0.0,
        i_q2_y3=cmi({"X2"}, {"Y3"}, {"V"}),
        i_q2_s2=0.0,
        i_yhat_src=cmi({"YHAT2"}, {"Y2", "T2"}, {"V", "X2"}),
        i_yhat_y3=cmi({"YHAT2"}, {"Y3"}, {"V", "X2"}),
        i_yhat_cond_y3=cmi({"YHAT2"}, {"Y2", "T2"}, {"V", "X2", "Y3"}),
    )


def evaluate_gaussian_region(power: PowerConfig, params: SchemeParams) -> RateBounds:
    """Rate bounds of the Gaussian scheme at one parameter point."""
    return bounds_from_mi(mi_values_gaussian(power, params))


def _quantization_residual(power: PowerConfig, params: SchemeParams,
                           nhat: float) -> float:
    joint = assemble_covariance(power, replace(params, nhat=nhat))
    return conditional_mi(joint, {"YHAT2"}, {"Y2", "T2"}, {"V", "X2", "Y3"})


def solve_nhat(power: PowerConfig, params: SchemeParams,
               rel_tol: float = 1e-6) -> float:
    """Smallest compression-noise variance meeting the forwarding budget.

    The residual I(YHAT2; Y2, T2 | V, X2, Y3) decreases monotonically in
    nhat while the budget I(X2; Y3 | V) does not depend on it, so the
    boundary is found by bisection over log(nhat).  The nhat field of
    `params` is ignored.  Returns the sentinel 1.0 when compression is off
    (beta = 0 and f = 0) or carries no information; raises
    ConstraintInfeasibleError when the budget is zero but the residual is
    not.
    """
    if params.beta == 0.0 and params.f == 0.0:
        return 1.0
    joint = assemble_covariance(power, params)
    budget = conditional_mi(joint, {"X2"}, {"Y3"}, {"V"})
    if _quantization_residual(power, params, 1.0) <= max(budget, REGION_TOL):
        if budget <= REGION_TOL:
            # Residual vanishes for every nhat, e.g. beta=0 with a constant T2.
            if _quantization_residual(power, params, 1e-12) <= REGION_TOL:
                return 1.0
            raise ConstraintInfeasibleError(
                "forwarding budget is zero but the quantization residual is not")
        hi = 1.0
        lo = hi
        while _quantization_residual(power, params, lo / 16.0) <= budget:
            lo /= 16.0
            if lo < 1e-25:
                return 1.0  # residual never exceeds the budget
        lo /= 16.0
    else:
        if budget <= REGION_TOL:
            raise ConstraintInfeasibleError(
                "forwarding budget is zero but the quantization residual is not")
        lo = 1.0
        hi = lo
        while _quantization_residual(power, params, hi * 16.0) > budget:
            hi *= 16.0
            if hi > 1e25:
                raise ConstraintInfeasibleError(
                    "quantization residual stays above the forwarding budget")
        hi *= 16.0
    while hi > lo * (1.0 + rel_tol):
        mid = math.sqrt(lo * hi)
        if _quantization_residual(power, params, mid) > budget:
            lo = mid
        else:
            hi = mid
    return hi


def region_contains(bounds: RateBounds, point: RatePoint,
                    tol: float = REGION_TOL) -> bool:
    """Membership of a rate triple in the evaluated region (closure)."""
    return (bounds.feasible
            and point.r13 <= bounds.r13_max + tol
            and point.r12 <= bounds.r12_max + tol
            and point.r13 + point.r12 <= bounds.r13_plus_r12_max + tol
            and point.r23 <= bounds.r23_max + tol)


def aux_rate_feasible(mi: MIValues, point: RatePoint,
                      tol: float = REGION_TOL) -> bool:
    """Feasibility of the auxiliary-rate system behind the coding theorem.

    Checks whether nonnegative auxiliary rates (binning overheads r13p,
    r12p, r23p, the forwarding split r2/r2p, and the quantization rate
    rhat2) exist so that every covering and packing inequality of the
    random-coding proof holds with slack >= tol.  Eliminating the
    auxiliaries must reproduce the closed-form bounds; this routine keeps
    them explicit and asks a linear-program solver instead.
    """
    # Variable order: (r13p, r12p, r23p, r2, r2p, rhat2), all >= 0.
    a_ub = np.array([
        [-1.0, 0.0, 0.0, 0.0, 0.0, 0.0],   # r13p >= i_t1_s + tol
        [0.0, -1.0, 0.0, 0.0, 0.0, 0.0],   # r12p >= i_t2_s + tol
        [-1.0, -1.0, 0.0, 0.0, 0.0, 0.0],  # joint binning cover
        [0.0, 0.0, -1.0, 0.0, 0.0, 0.0],   # r23p >= i_k2_s2 + tol
        [0.0, 0.0, 0.0, 0.0, -1.0, 0.0],   # r2p >= i_q2_s2 + tol
        [0.0, 1.0, 0.0, 0.0, 0.0, 0.0],    # r12 + r12p <= i_t2_relay - tol
        [0.0, 0.0, 0.0, 0.0, 0.0, -1.0],   # rhat2 >= i_yhat_src + tol
        [0.0, 0.0, 1.0, 0.0, 0.0, 0.0],    # r23 + r23p <= i_k2_y3 - tol
        [0.0, 0.0, 0.0, 1.0, 1.0, 0.0],    # r2 + r2p <= i_q2_y3 - tol
        [0.0, 0.0, 0.0, -1.0, 0.0, 1.0],   # rhat2 <= r2 + i_yhat_y3 - tol
        [1.0, 0.0, 0.0, 0.0, 0.0, 0.0],    # r13 + r13p <= i_t1_out - tol
    ])
    b_ub = np.array([
        -(mi.i_t1_s + tol),
        -(mi.i_t2_s + tol),
        -(mi.i_t1_s + mi.i_t2_s + mi.i_t1_t2_s + tol),
        -(mi.i_k2_s2 + tol),
        -(mi.i_q2_s2 + tol),
        mi.i_t2_relay - point.r12 - tol,
        -(mi.i_yhat_src + tol),
        mi.i_k2_y3 - point.r23 - tol,
        mi.i_q2_y3 - tol,
        mi.i_yhat_y3 - tol,
        mi.i_t1_out - point.r13 - tol,
    ])
    result = linprog(np.zeros(6), A_ub=a_ub, b_ub=b_ub,
                     bounds=[(0.0, None)] * 6, method="highs")
    if result.status == 0:
        return True
    if result.status == 2:
        return False
    raise RelayToolkitError(f"linear feasibility solve failed: {result.message}")
