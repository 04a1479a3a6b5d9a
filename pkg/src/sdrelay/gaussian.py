"""Gaussian second-moment model of the state-dependent relay channel.

The source splits its power between a private stream U1 (decoded only at the
destination) and a common stream U2 (decoded at the relay), both dirty-paper
coded against the additive state S.  The relay splits its power between a
decode-forward carrier V and a compress-forward carrier X2'.  Everything is
jointly Gaussian, so every rate expression reduces to log-determinant ratios
of covariance submatrices.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import NumericalConditioningError, ParameterInfeasibleError

# Canonical variable order: eight base variables followed by derived ones.
BASE_VARIABLES = ("S", "U1", "U2", "V", "X2P", "Z2", "Z3", "ZHAT")
DERIVED_VARIABLES = ("X1", "X2", "Y2", "Y3", "T1", "T2", "YHAT2")
VARIABLES = BASE_VARIABLES + DERIVED_VARIABLES

# Tolerances shared by the covariance path.
PSD_EIG_TOL = 1e-9      # smallest eigenvalue >= -PSD_EIG_TOL * trace
RIDGE_SCALE = 1e-12     # diagonal ridge for degenerate submatrices
_LN2 = math.log(2.0)


@dataclass(frozen=True)
class PowerConfig:
    """Linear-scale transmit powers and noise variances.

    p1: source power, p2: relay power, n2/n3: relay/destination noise
    variances, q: state variance.  All strictly positive and finite.
    """

    p1: float
    p2: float
    n2: float
    n3: float
    q: float

    def __post_init__(self):
        for name in ("p1", "p2", "n2", "n3", "q"):
            value = getattr(self, name)
            if not math.isfinite(value) or value <= 0.0:
                raise ValueError(f"{name} must be finite and > 0, got {value!r}")


@dataclass(frozen=True)
class SchemeParams:
    """Free parameters of the coding scheme.

    rho: correlation between the two source streams; gamma: fraction of
    source power on the relay-decoded stream; alpha1/alpha2: dirty-paper
    coefficients of T1 = U1 + alpha1*S and T2 = U2 + alpha2*S; rho_u1s,
    rho_u2s: stream-state correlations; theta: fraction of relay power on
    the decode-forward carrier; beta, f: compression gains in
    YHAT2 = beta*Y2 + f*T2 + ZHAT; nhat: compression noise variance.
    """

    rho: float
    gamma: float
    alpha1: float
    alpha2: float
    rho_u1s: float
    theta: float
    beta: float
    f: float
    nhat: float = 1.0
    rho_u2s: float = 0.0

    def __post_init__(self):
        unit = {"gamma": self.gamma, "theta": self.theta, "beta": self.beta}
        for name, value in unit.items():
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {value!r}")
        signed = {"rho": self.rho, "rho_u1s": self.rho_u1s,
                  "rho_u2s": self.rho_u2s, "f": self.f}
        for name, value in signed.items():
            if not -1.0 <= value <= 1.0:
                raise ValueError(f"{name} must lie in [-1, 1], got {value!r}")
        for name in ("alpha1", "alpha2"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if not (math.isfinite(self.nhat) and self.nhat > 0.0):
            raise ValueError(f"nhat must be finite and > 0, got {self.nhat!r}")
        corr = correlation_matrix(self.rho, self.rho_u1s, self.rho_u2s)
        if np.linalg.eigvalsh(corr)[0] < -PSD_EIG_TOL * 3.0:
            raise ParameterInfeasibleError(
                "correlations (rho=%g, rho_u1s=%g, rho_u2s=%g) do not form a "
                "positive semidefinite (S, U1, U2) correlation matrix"
                % (self.rho, self.rho_u1s, self.rho_u2s))


def correlation_matrix(rho: float, rho_u1s: float, rho_u2s: float) -> np.ndarray:
    """Correlation matrix of (S, U1, U2) implied by the three coefficients."""
    return np.array([
        [1.0, rho_u1s, rho_u2s],
        [rho_u1s, 1.0, rho],
        [rho_u2s, rho, 1.0],
    ])


@dataclass(frozen=True)
class GaussianJoint:
    """A zero-mean Gaussian vector: covariance plus a name-to-row index."""

    cov: np.ndarray
    index: dict

    def __post_init__(self):
        cov = np.asarray(self.cov, dtype=float)
        object.__setattr__(self, "cov", cov)
        n = cov.shape[0]
        if cov.shape != (n, n):
            raise ValueError(f"covariance must be square, got {cov.shape}")
        if len(self.index) != n or sorted(self.index.values()) != list(range(n)):
            raise ValueError("index must map names one-to-one onto rows")
        unknown = set(self.index) - set(VARIABLES)
        if unknown:
            raise ValueError(f"unknown variable tags: {sorted(unknown)}")
        scale = max(1.0, float(np.abs(cov).max()))
        if np.abs(cov - cov.T).max() > 1e-12 * scale:
            raise ValueError("covariance must be symmetric to 1e-12 relative")
        trace = float(np.trace(cov))
        if np.linalg.eigvalsh(cov)[0] < -PSD_EIG_TOL * max(trace, 1.0):
            raise ValueError("covariance is not positive semidefinite")

    def rows(self, names) -> list:
        """Row indices for a collection of variable names, ascending."""
        return sorted(self.index[name] for name in names)


def solve_pu1(rho: float, gamma: float, p1: float) -> float:
    """Private-stream power from the source power identity.

    Solves pu1 + pu2 + 2*rho*sqrt(pu1*pu2) = p1 with pu2 = gamma*p1 for the
    principal nonnegative root sqrt(pu1) = -rho*sqrt(gamma*p1)
    + sqrt(rho^2*gamma*p1 + (1-gamma)*p1).
    """
    if not -1.0 <= rho <= 1.0:
        raise ValueError(f"rho must lie in [-1, 1], got {rho!r}")
    if not 0.0 <= gamma <= 1.0:
        raise ValueError(f"gamma must lie in [0, 1], got {gamma!r}")
    if not (math.isfinite(p1) and p1 > 0.0):
        raise ValueError(f"p1 must be finite and > 0, got {p1!r}")
    pu2 = gamma * p1
    root = -rho * math.sqrt(pu2) + math.sqrt(rho * rho * pu2 + (1.0 - gamma) * p1)
    if root < 0.0:
        raise ParameterInfeasibleError(
            f"no nonnegative power split for rho={rho}, gamma={gamma}")
    pu1 = root * root
    residual = pu1 + pu2 + 2.0 * rho * math.sqrt(pu1 * pu2) - p1
    if abs(residual) > 1e-9 * p1:
        raise ParameterInfeasibleError(
            f"power identity violated by {residual:g} at rho={rho}, gamma={gamma}")
    return pu1


def assemble_covariance(power: PowerConfig, params: SchemeParams) -> GaussianJoint:
    """Covariance of all fifteen model variables for one parameter point."""
    pu1 = solve_pu1(params.rho, params.gamma, power.p1)
    pu2 = params.gamma * power.p1

    base = np.zeros((8, 8))
    s, u1, u2, v, x2p, z2, z3, zhat = range(8)
    base[s, s] = power.q
    base[u1, u1] = pu1
    base[u2, u2] = pu2
    base[u1, u2] = base[u2, u1] = params.rho * math.sqrt(pu1 * pu2)
    base[s, u1] = base[u1, s] = params.rho_u1s * math.sqrt(pu1 * power.q)
    base[s, u2] = base[u2, s] = params.rho_u2s * math.sqrt(pu2 * power.q)
    base[v, v] = params.theta * power.p2
    base[x2p, x2p] = (1.0 - params.theta) * power.p2
    base[z2, z2] = power.n2
    base[z3, z3] = power.n3
    base[zhat, zhat] = params.nhat

    # Each derived variable is a linear combination of the base variables.
    m = np.zeros((15, 8))
    m[:8, :8] = np.eye(8)
    coeffs = {
        "X1": {u1: 1.0, u2: 1.0},
        "X2": {v: 1.0, x2p: 1.0},
        "Y2": {u1: 1.0, u2: 1.0, z2: 1.0, s: 1.0},
        "Y3": {u1: 1.0, u2: 1.0, v: 1.0, x2p: 1.0, z3: 1.0, s: 1.0},
        "T1": {u1: 1.0, s: params.alpha1},
        "T2": {u2: 1.0, s: params.alpha2},
        "YHAT2": {u1: params.beta, u2: params.beta + params.f, z2: params.beta,
                  s: params.beta + params.f * params.alpha2, zhat: 1.0},
    }
    for row, name in enumerate(DERIVED_VARIABLES, start=8):
        for col, weight in coeffs[name].items():
            m[row, col] = weight

    cov = m @ base @ m.T
    cov = 0.5 * (cov + cov.T)
    return GaussianJoint(cov, {name: i for i, name in enumerate(VARIABLES)})


def _logdet_chol(mat: np.ndarray, ridge: float) -> float:
    """Log-determinant via Cholesky; raises LinAlgError if not PD."""
    if mat.size == 0:
        return 0.0
    if ridge:
        mat = mat + ridge * np.eye(mat.shape[0])
    chol = np.linalg.cholesky(mat)
    return 2.0 * float(np.sum(np.log(np.diag(chol))))


def conditional_mi(joint: GaussianJoint, a, b, c=()) -> float:
    """I(A; B | C) in bits from log-determinant ratios.

    I = (1/2) log2( det(S_ac) det(S_bc) / (det(S_c) det(S_abc)) ) with the
    empty-set determinant defined as 1.  When any of the four submatrices
    fails a plain Cholesky factorization (degenerate variables), all four
    are recomputed with a common diagonal ridge of 1e-12 times the trace of
    the union submatrix, which preserves the ratio in the degenerate limit.
    """
    a, b, c = set(a), set(b), set(c)
    if a & b or a & c or b & c:
        raise ValueError("variable groups must be disjoint")
    ia, ib, ic = joint.rows(a), joint.rows(b), joint.rows(c)
    groups = [sorted(ia + ic), sorted(ib + ic), ic, sorted(ia + ib + ic)]
    subs = [joint.cov[np.ix_(g, g)] for g in groups]

    try:
        logdets = [_logdet_chol(sub, 0.0) for sub in subs]
    except np.linalg.LinAlgError:
        union_trace = float(np.trace(subs[3]))
        if union_trace <= 0.0:
            return 0.0  # every involved variable is degenerate
        ridge = RIDGE_SCALE * union_trace
        try:
            logdets = [_logdet_chol(sub, ridge) for sub in subs]
        except np.linalg.LinAlgError as exc:
            raise NumericalConditioningError(
                f"submatrix not factorable even with ridge {ridge:g}") from exc

    value = (logdets[0] + logdets[1] - logdets[2] - logdets[3]) / (2.0 * _LN2)
    if value < -1e-6:
        raise NumericalConditioningError(
            f"conditional MI evaluated to {value:g}; submatrices inconsistent")
    return max(0.0, value)
