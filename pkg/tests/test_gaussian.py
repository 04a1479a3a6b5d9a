"""Covariance assembly and Gaussian conditional mutual information."""

import math

import numpy as np
import pytest

from sdrelay import (
    GaussianJoint,
    ParameterInfeasibleError,
    PowerConfig,
    SchemeParams,
    assemble_covariance,
    conditional_mi,
    solve_pu1,
)
from sdrelay.gaussian import VARIABLES

POWER = PowerConfig(p1=10.0, p2=10.0 ** 1.5, n2=1.0, n3=10.0, q=10.0)

GENERIC = SchemeParams(rho=0.3, gamma=0.4, alpha1=0.7, alpha2=0.5,
                       rho_u1s=0.2, theta=0.6, beta=0.8, f=0.1,
                       nhat=2.0, rho_u2s=0.1)


def random_params(rng) -> SchemeParams:
    """A parameter point that always passes the correlation PSD gate."""
    while True:
        rho, r1s, r2s = rng.uniform(-1.0, 1.0, size=3)
        det = 1.0 + 2.0 * rho * r1s * r2s - rho * rho - r1s * r1s - r2s * r2s
        if det >= 0.05:
            break
    return SchemeParams(
        rho=float(rho), gamma=float(rng.uniform(0.0, 1.0)),
        alpha1=float(rng.uniform(-1.5, 1.5)),
        alpha2=float(rng.uniform(-1.5, 1.5)),
        rho_u1s=float(r1s), theta=float(rng.uniform(0.0, 1.0)),
        beta=float(rng.uniform(0.0, 1.0)), f=float(rng.uniform(-1.0, 1.0)),
        nhat=float(rng.uniform(0.1, 5.0)), rho_u2s=float(r2s))


def random_power(rng) -> PowerConfig:
    vals = rng.uniform(0.2, 20.0, size=5)
    return PowerConfig(*map(float, vals))


# --- configuration validation ------------------------------------------------

def test_power_config_rejects_nonpositive():
    with pytest.raises(ValueError, match="p1"):
        PowerConfig(p1=0.0, p2=1.0, n2=1.0, n3=1.0, q=1.0)
    with pytest.raises(ValueError, match="n3"):
        PowerConfig(p1=1.0, p2=1.0, n2=1.0, n3=-2.0, q=1.0)
    with pytest.raises(ValueError, match="q"):
        PowerConfig(p1=1.0, p2=1.0, n2=1.0, n3=1.0, q=math.inf)


def test_scheme_params_range_checks():
    with pytest.raises(ValueError, match="gamma"):
        SchemeParams(rho=0.0, gamma=1.5, alpha1=0.0, alpha2=0.0,
                     rho_u1s=0.0, theta=0.0, beta=0.0, f=0.0)
    with pytest.raises(ValueError, match="rho"):
        SchemeParams(rho=-1.2, gamma=0.5, alpha1=0.0, alpha2=0.0,
                     rho_u1s=0.0, theta=0.0, beta=0.0, f=0.0)
    with pytest.raises(ValueError, match="nhat"):
        SchemeParams(rho=0.0, gamma=0.5, alpha1=0.0, alpha2=0.0,
                     rho_u1s=0.0, theta=0.0, beta=0.0, f=0.0, nhat=0.0)
    with pytest.raises(ValueError, match="alpha1"):
        SchemeParams(rho=0.0, gamma=0.5, alpha1=math.nan, alpha2=0.0,
                     rho_u1s=0.0, theta=0.0, beta=0.0, f=0.0)


def test_scheme_params_correlation_psd_gate():
    # rho^2 + rho_u1s^2 > 1 cannot come from any joint distribution.
    with pytest.raises(ParameterInfeasibleError):
        SchemeParams(rho=0.9, gamma=0.5, alpha1=0.0, alpha2=0.0,
                     rho_u1s=0.9, theta=0.0, beta=0.0, f=0.0)
    # The boundary itself is admitted.
    SchemeParams(rho=1.0, gamma=0.5, alpha1=0.0, alpha2=0.0,
                 rho_u1s=0.0, theta=0.0, beta=0.0, f=0.0)


# --- power split --------------------------------------------------------------

def test_solve_pu1_trivial_splits():
    assert solve_pu1(0.0, 0.0, 10.0) == pytest.approx(10.0, abs=1e-12)
    assert solve_pu1(0.7, 0.0, 10.0) == pytest.approx(10.0, abs=1e-12)
    assert solve_pu1(0.0, 1.0, 10.0) == pytest.approx(0.0, abs=1e-12)
    assert solve_pu1(0.0, 0.25, 10.0) == pytest.approx(7.5, abs=1e-12)


def test_solve_pu1_frozen_value():
    # Principal root at rho=0.5, gamma=0.25, p1=10.
    assert solve_pu1(0.5, 0.25, 10.0) == pytest.approx(
        4.243060905670012, abs=1e-12)


def test_solve_pu1_satisfies_power_identity():
    rng = np.random.default_rng(7)
    for _ in range(200):
        rho = float(rng.uniform(-1.0, 1.0))
        gamma = float(rng.uniform(0.0, 1.0))
        p1 = float(rng.uniform(0.1, 50.0))
        pu1 = solve_pu1(rho, gamma, p1)
        pu2 = gamma * p1
        assert pu1 >= 0.0
        total = pu1 + pu2 + 2.0 * rho * math.sqrt(pu1 * pu2)
        assert total == pytest.approx(p1, rel=1e-9)


def test_solve_pu1_rejects_bad_arguments():
    with pytest.raises(ValueError):
        solve_pu1(1.5, 0.5, 10.0)
    with pytest.raises(ValueError):
        solve_pu1(0.5, -0.1, 10.0)
    with pytest.raises(ValueError):
        solve_pu1(0.5, 0.5, 0.0)


# --- covariance assembly ------------------------------------------------------

def expected_entries(power: PowerConfig, params: SchemeParams) -> dict:
    """Hand-computed second moments for the generic spot checks."""
    pu1 = solve_pu1(params.rho, params.gamma, power.p1)
    pu2 = params.gamma * power.p1
    c12 = params.rho * math.sqrt(pu1 * pu2)
    c1s = params.rho_u1s * math.sqrt(pu1 * power.q)
    c2s = params.rho_u2s * math.sqrt(pu2 * power.q)
    vx1 = pu1 + pu2 + 2.0 * c12
    x1s = c1s + c2s
    vy2 = vx1 + power.n2 + power.q + 2.0 * x1s
    vy3 = vx1 + power.p2 + power.n3 + power.q + 2.0 * x1s
    a1, a2 = params.alpha1, params.alpha2
    return {
        ("X1", "X1"): vx1,
        ("Y2", "Y2"): vy2,
        ("Y3", "Y3"): vy3,
        ("Y2", "Y3"): vx1 + 2.0 * x1s + power.q,
        ("T1", "T1"): pu1 + a1 * a1 * power.q + 2.0 * a1 * c1s,
        ("T2", "T2"): pu2 + a2 * a2 * power.q + 2.0 * a2 * c2s,
        ("T1", "S"): c1s + a1 * power.q,
        ("T2", "S"): c2s + a2 * power.q,
        ("T1", "T2"): c12 + a2 * c1s + a1 * c2s + a1 * a2 * power.q,
        ("T1", "Y3"): pu1 + c12 + c1s + a1 * (power.q + x1s),
        ("T2", "Y2"): c12 + pu2 + c2s + a2 * (power.q + x1s),
        ("X2", "X2"): power.p2,
        ("X2", "Y3"): power.p2,
        ("V", "Y3"): params.theta * power.p2,
        ("V", "X2"): params.theta * power.p2,
        ("YHAT2", "Y2"): params.beta * vy2 + params.f *
            (c12 + pu2 + c2s + a2 * (power.q + x1s)),
    }


def test_covariance_matches_hand_computed_moments():
    joint = assemble_covariance(POWER, GENERIC)
    for (a, b), want in expected_entries(POWER, GENERIC).items():
        got = joint.cov[joint.index[a], joint.index[b]]
        assert got == pytest.approx(want, rel=1e-12, abs=1e-12), (a, b)


def test_covariance_symmetric_psd_full_index():
    rng = np.random.default_rng(11)
    for _ in range(25):
        joint = assemble_covariance(random_power(rng), random_params(rng))
        cov = joint.cov
        assert cov.shape == (15, 15)
        assert sorted(joint.index) == sorted(VARIABLES)
        assert np.max(np.abs(cov - cov.T)) == 0.0
        assert np.linalg.eigvalsh(cov)[0] >= -1e-9 * np.trace(cov)


def test_gaussian_joint_validation():
    with pytest.raises(ValueError, match="square"):
        GaussianJoint(np.zeros((2, 3)), {"S": 0, "U1": 1})
    with pytest.raises(ValueError, match="one-to-one"):
        GaussianJoint(np.eye(2), {"S": 0, "U1": 0})
    with pytest.raises(ValueError, match="unknown"):
        GaussianJoint(np.eye(1), {"BOGUS": 0})
    with pytest.raises(ValueError, match="symmetric"):
        GaussianJoint(np.array([[1.0, 0.5], [0.0, 1.0]]), {"S": 0, "U1": 1})
    with pytest.raises(ValueError, match="semidefinite"):
        GaussianJoint(np.array([[1.0, 2.0], [2.0, 1.0]]), {"S": 0, "U1": 1})


# --- conditional mutual information -------------------------------------------

def awgn_joint(p: float, n: float) -> GaussianJoint:
    # X1 ~ N(0, p), Y3 = X1 + Z with Z ~ N(0, n).
    cov = np.array([[p, p], [p, p + n]])
    return GaussianJoint(cov, {"X1": 0, "Y3": 1})


def test_awgn_capacity_closed_form():
    rng = np.random.default_rng(3)
    for _ in range(20):
        p = float(rng.uniform(0.05, 100.0))
        n = float(rng.uniform(0.05, 100.0))
        want = 0.5 * math.log2(1.0 + p / n)
        assert conditional_mi(awgn_joint(p, n), {"X1"}, {"Y3"}) == pytest.approx(
            want, abs=1e-12)


def test_independent_variables_have_zero_mi():
    cov = np.diag([2.0, 3.0, 4.0])
    joint = GaussianJoint(cov, {"S": 0, "U1": 1, "U2": 2})
    assert conditional_mi(joint, {"S"}, {"U1"}) == 0.0
    assert conditional_mi(joint, {"S"}, {"U1"}, {"U2"}) == 0.0


def test_mi_chain_rule_symmetry_scale():
    rng = np.random.default_rng(42)
    for _ in range(100):
        joint = assemble_covariance(random_power(rng), random_params(rng))
        a, b, c, d = {"T1"}, {"Y3"}, {"YHAT2"}, {"V", "X2"}
        chain_lhs = conditional_mi(joint, a, b | c, d)
        chain_rhs = (conditional_mi(joint, a, b, d)
                     + conditional_mi(joint, a, c, d | b))
        assert chain_lhs == pytest.approx(chain_rhs, abs=1e-9)
        assert conditional_mi(joint, a, b, d) == pytest.approx(
            conditional_mi(joint, b, a, d), abs=1e-9)
        scaled = GaussianJoint(joint.cov * 7.25, joint.index)
        assert conditional_mi(scaled, a, b | c, d) == pytest.approx(
            chain_lhs, abs=1e-9)
        assert chain_lhs >= 0.0


def test_conditional_mi_rejects_overlapping_groups():
    joint = assemble_covariance(POWER, GENERIC)
    with pytest.raises(ValueError, match="disjoint"):
        conditional_mi(joint, {"T1"}, {"T1", "Y3"})


def test_degenerate_parameter_corners_evaluate():
    # gamma=1 removes U1, theta in {0, 1} removes one relay component,
    # beta=f=0 makes the quantizer pure noise; all must stay finite.
    corners = [
        SchemeParams(rho=0.0, gamma=1.0, alpha1=0.3, alpha2=0.5,
                     rho_u1s=0.0, theta=0.5, beta=0.5, f=0.0),
        SchemeParams(rho=0.2, gamma=0.5, alpha1=0.3, alpha2=0.5,
                     rho_u1s=0.1, theta=0.0, beta=0.5, f=0.0),
        SchemeParams(rho=0.2, gamma=0.5, alpha1=0.3, alpha2=0.5,
                     rho_u1s=0.1, theta=1.0, beta=0.5, f=0.0),
        SchemeParams(rho=0.0, gamma=0.0, alpha1=0.0, alpha2=0.0,
                     rho_u1s=0.0, theta=0.5, beta=0.0, f=0.0),
        SchemeParams(rho=1.0, gamma=0.5, alpha1=0.3, alpha2=0.5,
                     rho_u1s=0.0, theta=0.5, beta=1.0, f=-0.5),
    ]
    for params in corners:
        joint = assemble_covariance(POWER, params)
        value = conditional_mi(joint, {"T1"}, {"YHAT2", "Y3"}, {"V", "X2"})
        assert math.isfinite(value) and value >= 0.0
        assert conditional_mi(joint, {"V"}, {"Y3"}) >= 0.0


def test_gamma_one_kills_private_stream():
    # With gamma=1 and alpha1=0, T1 = U1 carries zero power, so every MI
    # involving T1 alone must vanish.
    params = SchemeParams(rho=0.0, gamma=1.0, alpha1=0.0, alpha2=0.5,
                          rho_u1s=0.0, theta=0.5, beta=0.5, f=0.0)
    joint = assemble_covariance(POWER, params)
    assert conditional_mi(joint, {"T1"}, {"Y3"}) == pytest.approx(0.0, abs=1e-9)
    assert conditional_mi(joint, {"T1"}, {"S"}) == pytest.approx(0.0, abs=1e-9)
