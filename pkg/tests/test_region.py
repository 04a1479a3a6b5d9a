"""Rate-bound assembly, compression-noise solving, and region membership."""

import math
from dataclasses import replace

import numpy as np
import pytest

from sdrelay import (
    ConstraintInfeasibleError,
    MIValues,
    PowerConfig,
    RateBounds,
    RatePoint,
    SchemeParams,
    assemble_covariance,
    aux_rate_feasible,
    bounds_from_mi,
    conditional_mi,
    evaluate_gaussian_region,
    mi_values_gaussian,
    region_contains,
    solve_nhat,
)

POWER = PowerConfig(p1=10.0, p2=10.0 ** 1.5, n2=1.0, n3=10.0, q=10.0)

# Single relay-decoded stream with the state pre-subtracted at the source:
# the relay link then looks state-free and r12 hits its interference-free
# ceiling (1/2)log2(1 + p1/n2).
STATE_CANCEL = SchemeParams(rho=0.0, gamma=1.0, alpha1=0.0,
                            alpha2=10.0 / 11.0, rho_u1s=0.0, theta=0.0,
                            beta=0.0, f=0.0, nhat=1.0)


def generic_mi() -> MIValues:
    return MIValues(i_t1_out=1.8, i_t1_s=0.4, i_t2_relay=1.5, i_t2_s=0.3,
                    i_t1_t2_s=0.2, i_k2_y3=1.1, i_k2_s2=0.1, i_q2_y3=0.9,
                    i_q2_s2=0.05, i_yhat_src=0.7, i_yhat_y3=0.25,
                    i_yhat_cond_y3=0.45)


def quantization_residual(power, params, nhat) -> float:
    joint = assemble_covariance(power, replace(params, nhat=nhat))
    return conditional_mi(joint, {"YHAT2"}, {"Y2", "T2"}, {"V", "X2", "Y3"})


def forwarding_budget(power, params) -> float:
    joint = assemble_covariance(power, params)
    return conditional_mi(joint, {"X2"}, {"Y3"}, {"V"})


# --- MI bundle and bound assembly ----------------------------------------------

def test_mi_values_rejects_negative_and_inconsistent():
    with pytest.raises(ValueError, match="i_t1_s"):
        replace(generic_mi(), i_t1_s=-0.1)
    with pytest.raises(ValueError, match="i_yhat_cond_y3"):
        replace(generic_mi(), i_yhat_cond_y3=0.8)  # exceeds i_yhat_src
    with pytest.raises(ValueError, match="finite"):
        replace(generic_mi(), i_k2_y3=math.inf)


def test_bounds_from_mi_values():
    b = bounds_from_mi(generic_mi())
    assert b.r13_max == pytest.approx(1.4, abs=1e-12)
    assert b.r12_max == pytest.approx(1.2, abs=1e-12)
    assert b.r13_plus_r12_max == pytest.approx(2.4, abs=1e-12)
    assert b.r23_max == pytest.approx(1.0, abs=1e-12)
    assert b.feasible and not b.clamped


def test_bounds_from_mi_clamps_negative_rates():
    mi = replace(generic_mi(), i_t1_out=0.1)  # binning cost exceeds decoding
    b = bounds_from_mi(mi)
    assert b.r13_max == 0.0
    assert b.clamped


def test_bounds_from_mi_feasibility_flag():
    infeasible = replace(generic_mi(), i_q2_y3=0.3)  # 0.45 > 0.3 - 0.05
    assert not bounds_from_mi(infeasible).feasible
    boundary = replace(generic_mi(), i_q2_y3=0.5)  # 0.45 == 0.5 - 0.05
    assert bounds_from_mi(boundary).feasible


def test_rate_bounds_invariants():
    with pytest.raises(ValueError, match="sum bound"):
        RateBounds(1.0, 1.0, 2.5, 1.0, feasible=True)
    with pytest.raises(ValueError, match="r12_max"):
        RateBounds(1.0, -0.2, 0.5, 1.0, feasible=True)
    with pytest.raises(ValueError):
        RatePoint(0.1, -0.1, 0.0)


# --- Gaussian evaluation ---------------------------------------------------------

def test_state_cancellation_endpoint_frozen():
    bounds = evaluate_gaussian_region(POWER, STATE_CANCEL)
    # (1/2) log2(1 + 10/1), with the dirty-paper coefficient p1/(p1+n2).
    assert bounds.r12_max == pytest.approx(1.7297158093186487, abs=1e-9)
    assert bounds.r13_max == pytest.approx(0.0, abs=1e-9)
    assert bounds.feasible


def test_state_cancellation_coefficient_is_optimal():
    best = evaluate_gaussian_region(POWER, STATE_CANCEL).r12_max
    for alpha2 in (0.0, 0.5, 0.8, 1.0):
        other = replace(STATE_CANCEL, alpha2=alpha2)
        assert evaluate_gaussian_region(POWER, other).r12_max <= best + 1e-12


def test_quantizer_off_ignores_noise_variance():
    base = SchemeParams(rho=0.2, gamma=0.4, alpha1=0.3, alpha2=0.5,
                        rho_u1s=0.1, theta=0.5, beta=0.0, f=0.0)
    a = evaluate_gaussian_region(POWER, replace(base, nhat=0.5))
    b = evaluate_gaussian_region(POWER, replace(base, nhat=5.0))
    assert a.r13_max == pytest.approx(b.r13_max, abs=1e-9)
    assert a.r12_max == pytest.approx(b.r12_max, abs=1e-9)
    assert a.r13_plus_r12_max == pytest.approx(b.r13_plus_r12_max, abs=1e-9)
    assert a.r23_max == pytest.approx(b.r23_max, abs=1e-9)
    assert a.feasible and b.feasible


# --- compression-noise solving ----------------------------------------------------

def test_solve_nhat_sentinel_when_quantizer_off():
    params = SchemeParams(rho=0.2, gamma=0.4, alpha1=0.3, alpha2=0.5,
                          rho_u1s=0.1, theta=0.5, beta=0.0, f=0.0)
    assert solve_nhat(POWER, params) == 1.0


def test_solve_nhat_meets_budget_minimally():
    params = SchemeParams(rho=0.2, gamma=0.4, alpha1=0.3, alpha2=0.5,
                          rho_u1s=0.1, theta=0.5, beta=1.0, f=0.0)
    budget = forwarding_budget(POWER, params)
    assert quantization_residual(POWER, params, 1.0) > budget  # binding case
    nhat = solve_nhat(POWER, params)
    assert quantization_residual(POWER, params, nhat) <= budget + 1e-9
    assert quantization_residual(POWER, params, nhat / 1.001) > budget
    assert evaluate_gaussian_region(POWER, replace(params, nhat=nhat)).feasible


def test_solve_nhat_tolerance_refinement():
    params = SchemeParams(rho=0.0, gamma=0.3, alpha1=0.2, alpha2=0.4,
                          rho_u1s=0.0, theta=0.4, beta=0.7, f=0.05)
    coarse = solve_nhat(POWER, params, rel_tol=1e-6)
    fine = solve_nhat(POWER, params, rel_tol=1e-10)
    assert coarse == pytest.approx(fine, rel=2e-6)
    assert coarse >= fine  # bisection returns the feasible upper edge


def test_residual_decreases_with_noise():
    params = SchemeParams(rho=0.2, gamma=0.4, alpha1=0.3, alpha2=0.5,
                          rho_u1s=0.1, theta=0.5, beta=1.0, f=0.0)
    values = [quantization_residual(POWER, params, nh)
              for nh in (0.25, 1.0, 4.0, 16.0)]
    assert all(a >= b for a, b in zip(values, values[1:]))


def test_solve_nhat_infeasible_when_budget_vanishes():
    # theta=1 puts all relay power on the carrier, so I(X2; Y3 | V) = 0
    # while the quantizer still produces a positive residual.
    params = SchemeParams(rho=0.2, gamma=0.4, alpha1=0.3, alpha2=0.5,
                          rho_u1s=0.1, theta=1.0, beta=0.8, f=0.0)
    with pytest.raises(ConstraintInfeasibleError):
        solve_nhat(POWER, params)
    evaluated = evaluate_gaussian_region(POWER, replace(params, nhat=1.0))
    assert not evaluated.feasible


# --- region membership --------------------------------------------------------------

def test_region_contains_basics():
    b = RateBounds(1.0, 1.0, 1.5, 1.0, feasible=True)
    assert region_contains(b, RatePoint(1.0, 0.4, 1.0))
    assert region_contains(b, RatePoint(0.0, 0.0, 0.0))
    assert not region_contains(b, RatePoint(1.2, 0.0, 0.0))
    assert not region_contains(b, RatePoint(0.9, 0.7, 0.0))  # sum face
    assert not region_contains(b, RatePoint(0.0, 0.0, 1.1))
    infeasible = RateBounds(1.0, 1.0, 1.5, 1.0, feasible=False)
    assert not region_contains(infeasible, RatePoint(0.0, 0.0, 0.0))


def test_aux_rate_feasible_directed():
    mi = generic_mi()
    assert aux_rate_feasible(mi, RatePoint(0.5, 0.5, 0.5))
    assert not aux_rate_feasible(mi, RatePoint(1.5, 0.0, 0.0))
    # Choking the forwarding budget kills every point, even the origin.
    choked = replace(mi, i_q2_y3=0.3)
    assert not aux_rate_feasible(choked, RatePoint(0.0, 0.0, 0.0))


# --- agreement between the explicit auxiliary system and the closed form -------------

MARGIN = 1e-3


def random_consistent_mi(rng) -> MIValues:
    """An MI bundle whose raw bounds clear every face by at least MARGIN."""
    while True:
        i_t1_s = float(rng.uniform(0.0, 1.0))
        i_t2_s = float(rng.uniform(0.0, 1.0))
        i_t1_t2_s = float(rng.uniform(3.5 * MARGIN, 1.0))
        i_t1_out = i_t1_s + float(rng.uniform(MARGIN, 2.5))
        i_t2_relay = i_t2_s + float(rng.uniform(MARGIN, 2.5))
        sum_raw = i_t1_out + i_t2_relay - i_t1_s - i_t2_s - i_t1_t2_s
        if sum_raw < MARGIN:
            continue
        i_k2_s2 = float(rng.uniform(0.0, 1.0))
        i_q2_s2 = float(rng.uniform(0.0, 0.5))
        i_yhat_y3 = float(rng.uniform(0.0, 1.5))
        i_yhat_src = i_yhat_y3 + float(rng.uniform(0.0, 1.5))
        residual = i_yhat_src - i_yhat_y3
        gap = float(rng.uniform(MARGIN, 1.0) * rng.choice([-1.0, 1.0]))
        i_q2_y3 = i_q2_s2 + residual + gap
        if i_q2_y3 < 0.0:
            continue
        return MIValues(i_t1_out=i_t1_out, i_t1_s=i_t1_s,
                        i_t2_relay=i_t2_relay, i_t2_s=i_t2_s,
                        i_t1_t2_s=i_t1_t2_s,
                        i_k2_y3=i_k2_s2 + float(rng.uniform(MARGIN, 2.0)),
                        i_k2_s2=i_k2_s2, i_q2_y3=i_q2_y3, i_q2_s2=i_q2_s2,
                        i_yhat_src=i_yhat_src, i_yhat_y3=i_yhat_y3,
                        i_yhat_cond_y3=residual)


def inside_point(rng, b: RateBounds) -> RatePoint:
    sum_cap = b.r13_plus_r12_max
    r13 = float(rng.uniform(0.0, min(b.r13_max, sum_cap) - MARGIN))
    r12 = float(rng.uniform(0.0, max(min(b.r12_max, sum_cap - r13) - MARGIN,
                                     0.0)))
    r23 = float(rng.uniform(0.0, b.r23_max - MARGIN))
    return RatePoint(r13, r12, r23)


def outside_point(rng, b: RateBounds) -> RatePoint:
    base = inside_point(rng, b)
    face = rng.choice(["r13", "r12", "r23", "sum"])
    bump = float(rng.uniform(MARGIN, 1.0))
    if face == "r13":
        return replace(base, r13=b.r13_max + bump)
    if face == "r12":
        return replace(base, r12=b.r12_max + bump)
    if face == "r23":
        return replace(base, r23=b.r23_max + bump)
    # Violate only the sum face; possible because i_t1_t2_s >= 3.5 * MARGIN.
    target = b.r13_plus_r12_max + MARGIN * (1.0 + 0.5 * float(rng.uniform()))
    lo = max(0.0, target - (b.r12_max - MARGIN))
    hi = min(b.r13_max - MARGIN, target)
    r13 = float(rng.uniform(lo, hi))
    return RatePoint(r13, target - r13, base.r23)


def test_auxiliary_system_matches_closed_form():
    rng = np.random.default_rng(2024)
    disagreements = 0
    checked = 0
    for _ in range(200):
        mi = random_consistent_mi(rng)
        b = bounds_from_mi(mi)
        points = [inside_point(rng, b), inside_point(rng, b),
                  outside_point(rng, b)]
        for p in points:
            checked += 1
            if aux_rate_feasible(mi, p) != region_contains(b, p):
                disagreements += 1
        if b.feasible:
            assert region_contains(b, points[0])
            assert not region_contains(b, points[2])
    assert checked == 600
    assert disagreements == 0


def test_auxiliary_system_on_gaussian_points():
    # Bounds evaluated from the model itself must be reproduced by the
    # explicit auxiliary-rate system at points just inside each face.
    params = SchemeParams(rho=0.2, gamma=0.4, alpha1=0.3, alpha2=0.5,
                          rho_u1s=0.1, theta=0.5, beta=0.7, f=0.0)
    params = replace(params, nhat=solve_nhat(POWER, params))
    mi = mi_values_gaussian(POWER, params)
    b = bounds_from_mi(mi)
    assert b.feasible
    eps = 1e-6
    near = RatePoint(max(b.r13_max - eps, 0.0),
                     max(min(b.r12_max, b.r13_plus_r12_max - b.r13_max) - eps,
                         0.0),
                     max(b.r23_max - eps, 0.0))
    assert region_contains(b, near)
    assert aux_rate_feasible(mi, near)
    beyond = RatePoint(b.r13_max + 1e-3, 0.0, 0.0)
    assert not region_contains(b, beyond)
    assert not aux_rate_feasible(mi, beyond)
