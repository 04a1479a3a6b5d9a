"""Discrete-memoryless evaluation of the relay-channel rate bounds.

A channel instance is a set of finite-alphabet kernels following the joint
factorization of the coding theorem.  Dense joint tables keep the mutual
informations exact (up to float rounding), which is what the reduction
identities and the causal-inclusion check rely on.  Empty variables are
modeled as one-letter alphabets.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import MalformedKernelError, TableSizeError
from .region import MIValues, RateBounds, REGION_TOL, bounds_from_mi

# Joint-table axis order; size-1 axes stand in for absent variables.
DM_VARIABLES = ("S", "S1", "S2", "K2", "Q2", "T1", "T2",
                "X1", "X2", "YHAT2", "Y2", "Y3")
_AXIS = {name: i for i, name in enumerate(DM_VARIABLES)}

DEFAULT_CELL_CAP = 10_000_000

# (field, kernel axes in storage order, axes normalized over)
_DM_KERNELS = (
    ("p_state", ("S", "S1", "S2"), ("S", "S1", "S2")),
    ("p_k2_given_s2", ("S2", "K2"), ("K2",)),
    ("p_q2_given_k2s2", ("K2", "S2", "Q2"), ("Q2",)),
    ("p_x2_given_q2k2s2", ("Q2", "K2", "S2", "X2"), ("X2",)),
    ("p_t1t2_given_s1", ("S1", "T1", "T2"), ("T1", "T2")),
    ("p_x1_given_t1t2s1", ("T1", "T2", "S1", "X1"), ("X1",)),
    ("channel", ("X1", "X2", "S", "Y2", "Y3"), ("Y2", "Y3")),
    ("p_yhat_given", ("Y2", "Q2", "K2", "S2", "T2", "YHAT2"), ("YHAT2",)),
)

_CAUSAL_KERNELS = (
    ("p_state", ("S", "S1", "S2"), ("S", "S1", "S2")),
    ("p_k2", ("K2",), ("K2",)),
    ("p_q2_given_k2", ("K2", "Q2"), ("Q2",)),
    ("p_t1t2", ("T1", "T2"), ("T1", "T2")),
    ("channel", ("X1", "X2", "S", "Y2", "Y3"), ("Y2", "Y3")),
    ("p_yhat_given", ("Y2", "Q2", "K2", "S2", "T2", "YHAT2"), ("YHAT2",)),
)


@dataclass(frozen=True)
class AlphabetSpec:
    """Alphabet sizes for every model variable (1 encodes an absent variable)."""

    s: int = 1
    s1: int = 1
    s2: int = 1
    k2: int = 1
    q2: int = 1
    t1: int = 1
    t2: int = 1
    x1: int = 1
    x2: int = 1
    yhat2: int = 1
    y2: int = 1
    y3: int = 1

    def __post_init__(self):
        for name, value in self.__dict__.items():
            if not isinstance(value, int) or value < 1:
                raise ValueError(f"{name} must be an integer >= 1, got {value!r}")

    def size(self, name: str) -> int:
        return getattr(self, name.lower())

    @property
    def shape(self) -> tuple:
        return tuple(self.size(name) for name in DM_VARIABLES)

    @property
    def cells(self) -> int:
        return math.prod(self.shape)


def _check_kernel(name: str, kernel: np.ndarray, axes, norm_axes, alphabet):
    expected = tuple(alphabet.size(v) for v in axes)
    if kernel.shape != expected:
        raise MalformedKernelError(
            f"{name} must have shape {expected} for axes {axes}, got {kernel.shape}")
    if kernel.min(initial=0.0) < 0.0:
        raise MalformedKernelError(f"{name} has negative entries")
    sum_over = tuple(axes.index(v) for v in norm_axes)
    sums = kernel.sum(axis=sum_over)
    if np.abs(sums - 1.0).max() > 1e-9:
        raise MalformedKernelError(
            f"{name} rows must sum to 1 within 1e-9 over {norm_axes}")


def _validate_kernels(obj, spec):
    for name, axes, norm_axes in spec:
        kernel = np.asarray(getattr(obj, name), dtype=float)
        object.__setattr__(obj, name, kernel)
        _check_kernel(name, kernel, axes, norm_axes, obj.alphabet)


def _check_map(name: str, table: np.ndarray, axes, out_size: int, alphabet):
    expected = tuple(alphabet.size(v) for v in axes)
    if table.shape != expected:
        raise MalformedKernelError(
            f"{name} must have shape {expected} for axes {axes}, got {table.shape}")
    if table.min(initial=0) < 0 or table.max(initial=0) >= out_size:
        raise MalformedKernelError(f"{name} values must lie in [0, {out_size})")


@dataclass(frozen=True)
class DmFactorization:
    """Kernels of the non-causal joint factorization.

    The relay side sees its state component before transmitting, so its
    cloud code K2, satellite code Q2, input X2 and quantizer all condition
    on S2; the source side codes (T1, T2) against S1.
    """

    alphabet: AlphabetSpec
    p_state: np.ndarray
    p_k2_given_s2: np.ndarray
    p_q2_given_k2s2: np.ndarray
    p_x2_given_q2k2s2: np.ndarray
    p_t1t2_given_s1: np.ndarray
    p_x1_given_t1t2s1: np.ndarray
    channel: np.ndarray
    p_yhat_given: np.ndarray

    def __post_init__(self):
        _validate_kernels(self, _DM_KERNELS)


@dataclass(frozen=True)
class CausalFactorization:
    """Kernels of the causal factorization.

    Codes are drawn independently of the state; the inputs are deterministic
    functions applied letter by letter: x1 = f1(t1, t2, s1) and
    x2 = f2(q2, k2, s2).
    """

    alphabet: AlphabetSpec
    p_state: np.ndarray
    p_k2: np.ndarray
    p_q2_given_k2: np.ndarray
    p_t1t2: np.ndarray
    channel: np.ndarray
    p_yhat_given: np.ndarray
    f1: np.ndarray
    f2: np.ndarray

    def __post_init__(self):
        _validate_kernels(self, _CAUSAL_KERNELS)
        for name in ("f1", "f2"):
            object.__setattr__(self, name,
                               np.asarray(getattr(self, name), dtype=np.int64))
        _check_map("f1", self.f1, ("T1", "T2", "S1"), self.alphabet.x1,
                   self.alphabet)
        _check_map("f2", self.f2, ("Q2", "K2", "S2"), self.alphabet.x2,
                   self.alphabet)


class JointPmf:
    """Dense joint table over the twelve model variables, with marginal cache."""

    def __init__(self, table: np.ndarray):
        table = np.asarray(table, dtype=float)
        if table.ndim != len(DM_VARIABLES):
            raise ValueError(f"joint table must have {len(DM_VARIABLES)} axes")
        self.table = table
        self._marginals: dict = {}

    @property
    def shape(self) -> tuple:
        return self.table.shape

    def marginal(self, names) -> np.ndarray:
        """Marginal over the named variables, axes kept in canonical order."""
        keep = tuple(sorted(_AXIS[name] for name in names))
        if keep not in self._marginals:
            drop = tuple(i for i in range(len(DM_VARIABLES)) if i not in keep)
            self._marginals[keep] = self.table.sum(axis=drop)
        return self._marginals[keep]


def _place(kernel: np.ndarray, axes) -> np.ndarray:
    """Reshape a kernel so each of its axes lands on its joint-table axis."""
    order = np.argsort([_AXIS[name] for name in axes])
    kernel = np.transpose(kernel, order)
    shape = [1] * len(DM_VARIABLES)
    for name, size in zip([axes[i] for i in order], kernel.shape):
        shape[_AXIS[name]] = size
    return kernel.reshape(shape)


def build_joint(fact: DmFactorization, cap: int = DEFAULT_CELL_CAP) -> JointPmf:
    """Multiply the factorization kernels into the dense joint table."""
    if fact.alphabet.cells > cap:
        raise TableSizeError(
            f"joint table needs {fact.alphabet.cells} cells, cap is {cap}")
    table = np.ones((1,) * len(DM_VARIABLES))
    for name, axes, _ in _DM_KERNELS:
        table = table * _place(getattr(fact, name), axes)
    total = float(table.sum())
    if abs(total - 1.0) > 1e-9:
        raise MalformedKernelError(
            f"joint table sums to {total!r}; kernels are inconsistent")
    return JointPmf(table)


def lift_causal(fact: CausalFactorization) -> DmFactorization:
    """Embed a causal instance into the non-causal factorization.

    State-independent kernels broadcast over the state axes and the
    deterministic input maps become indicator kernels, so the non-causal
    evaluator runs unchanged on causal instances.
    """
    a = fact.alphabet
    p_k2 = np.broadcast_to(fact.p_k2, (a.s2, a.k2))
    p_q2 = np.broadcast_to(fact.p_q2_given_k2[:, None, :], (a.k2, a.s2, a.q2))
    p_t1t2 = np.broadcast_to(fact.p_t1t2, (a.s1, a.t1, a.t2))
    p_x1 = np.eye(a.x1)[fact.f1]
    p_x2 = np.eye(a.x2)[fact.f2]
    return DmFactorization(
        alphabet=a,
        p_state=fact.p_state,
        p_k2_given_s2=np.ascontiguousarray(p_k2),
        p_q2_given_k2s2=np.ascontiguousarray(p_q2),
        p_x2_given_q2k2s2=p_x2,
        p_t1t2_given_s1=np.ascontiguousarray(p_t1t2),
        p_x1_given_t1t2s1=p_x1,
        channel=fact.channel,
        p_yhat_given=fact.p_yhat_given,
    )


def pmf_conditional_mi(joint: JointPmf, a, b, c=()) -> float:
    """I(A; B | C) in bits with the 0 log 0 = 0 convention."""
    a, b, c = set(a), set(b), set(c)
    if a & b or a & c or b & c:
        raise ValueError("variable groups must be disjoint")
    union = a | b | c
    m = joint.marginal(union)
    kept = sorted(_AXIS[name] for name in union)
    pos = {axis: i for i, axis in enumerate(kept)}
    a_axes = tuple(pos[_AXIS[name]] for name in a)
    b_axes = tuple(pos[_AXIS[name]] for name in b)
    p_ac = m.sum(axis=b_axes, keepdims=True)
    p_bc = m.sum(axis=a_axes, keepdims=True)
    p_c = p_ac.sum(axis=a_axes, keepdims=True)
    support = m > 0.0
    num = np.where(support, m * p_c, 1.0)
    den = np.where(support, p_ac * p_bc, 1.0)
    value = float(np.sum(np.where(support, m, 0.0) * np.log2(num / den)))
    return max(0.0, value)


def mi_values_from_joint(joint: JointPmf) -> MIValues:
    """The MI bundle of the non-causal bounds, extracted from a joint table."""
    cmi = lambda a, b, c=(): pmf_conditional_mi(joint, a, b, c)
    return MIValues(
        i_t1_out=cmi({"T1"}, {"YHAT2", "Y3"}, {"K2", "Q2"}),
        i_t1_s=cmi({"T1"}, {"S1"}),
        i_t2_relay=cmi({"T2"}, {"Y2", "S2"}, {"K2", "Q2"}),
        i_t2_s=cmi({"T2"}, {"S1"}),
        i_t1_t2_s=cmi({"T1"}, {"T2"}, {"S1"}),
        i_k2_y3=cmi({"K2"}, {"Y3"}),
        i_k2_s2=cmi({"K2"}, {"S2"}),
        i_q2_y3=cmi({"Q2"}, {"Y3"}, {"K2"}),
        i_q2_s2=cmi({"Q2"}, {"S2"}, {"K2"}),
        i_yhat_src=cmi({"YHAT2"}, {"Y2", "S2", "T2"}, {"K2", "Q2"}),
        i_yhat_y3=cmi({"YHAT2"}, {"Y3"}, {"K2", "Q2"}),
        i_yhat_cond_y3=cmi({"YHAT2"}, {"Y2", "S2", "T2"}, {"K2", "Q2", "Y3"}),
    )


def evaluate_theorem1(fact: DmFactorization,
                      cap: int = DEFAULT_CELL_CAP) -> RateBounds:
    """Non-causal rate bounds of a discrete instance."""
    return bounds_from_mi(mi_values_from_joint(build_joint(fact, cap)))


def evaluate_theorem2(fact: CausalFactorization,
                      cap: int = DEFAULT_CELL_CAP) -> RateBounds:
    """Causal rate bounds: same shapes, no state-subtraction terms.

    With codes independent of the state there is nothing to bin against,
    so the bounds are the plain decoding terms and the sum bound subtracts
    only the stream coupling I(T1; T2).
    """
    joint = build_joint(lift_causal(fact), cap)
    cmi = lambda a, b, c=(): pmf_conditional_mi(joint, a, b, c)
    b13 = cmi({"T1"}, {"YHAT2", "Y3"}, {"K2", "Q2"})
    b12 = cmi({"T2"}, {"Y2", "S2"}, {"K2", "Q2"})
    coupling = cmi({"T1"}, {"T2"})
    b23 = cmi({"K2"}, {"Y3"})
    residual = cmi({"YHAT2"}, {"Y2", "S2", "T2"}, {"K2", "Q2", "Y3"})
    budget = cmi({"Q2"}, {"Y3"}, {"K2"})
    raw_sum = b13 + b12 - coupling
    return RateBounds(b13, b12, max(0.0, raw_sum), b23,
                      feasible=residual <= budget + REGION_TOL,
                      clamped=raw_sum < 0.0)


def causal_subset_check(fact: CausalFactorization, tol: float = 1e-9) -> bool:
    """Causal bounds never exceed non-causal bounds on the lifted joint."""
    causal = evaluate_theorem2(fact)
    noncausal = evaluate_theorem1(lift_causal(fact))
    return (noncausal.r13_max >= causal.r13_max - tol
            and noncausal.r12_max >= causal.r12_max - tol
            and noncausal.r13_plus_r12_max >= causal.r13_plus_r12_max - tol
            and noncausal.r23_max >= causal.r23_max - tol)


def perfect_source_csi_state(p_s: np.ndarray) -> np.ndarray:
    """State kernel p(s, s1, s2) with s1 a perfect copy of s and s2 absent."""
    p_s = np.asarray(p_s, dtype=float)
    n = p_s.shape[0]
    return (p_s[:, None] * np.eye(n))[:, :, None]


def perfect_relay_csi_state(p_s: np.ndarray) -> np.ndarray:
    """State kernel p(s, s1, s2) with s2 a perfect copy of s and s1 absent."""
    p_s = np.asarray(p_s, dtype=float)
    n = p_s.shape[0]
    return (p_s[:, None] * np.eye(n))[:, None, :]


def perfect_full_csi_state(p_s: np.ndarray) -> np.ndarray:
    """State kernel p(s, s1, s2) with both components perfect copies of s."""
    p_s = np.asarray(p_s, dtype=float)
    eye = np.eye(p_s.shape[0])
    return np.einsum("a,ab,ac->abc", p_s, eye, eye)


def _random_kernel(rng: np.random.Generator, shape_given: tuple,
                   shape_out: tuple) -> np.ndarray:
    n_out = math.prod(shape_out)
    flat = rng.dirichlet(np.ones(n_out), size=shape_given)
    return flat.reshape(shape_given + shape_out)


def random_dm_factorization(alphabet: AlphabetSpec,
                            rng: np.random.Generator) -> DmFactorization:
    """A random non-causal instance with Dirichlet(1) kernel rows."""
    a = alphabet
    return DmFactorization(
        alphabet=a,
        p_state=_random_kernel(rng, (), (a.s, a.s1, a.s2)),
        p_k2_given_s2=_random_kernel(rng, (a.s2,), (a.k2,)),
        p_q2_given_k2s2=_random_kernel(rng, (a.k2, a.s2), (a.q2,)),
        p_x2_given_q2k2s2=_random_kernel(rng, (a.q2, a.k2, a.s2), (a.x2,)),
        p_t1t2_given_s1=_random_kernel(rng, (a.s1,), (a.t1, a.t2)),
        p_x1_given_t1t2s1=_random_kernel(rng, (a.t1, a.t2, a.s1), (a.x1,)),
        channel=_random_kernel(rng, (a.x1, a.x2, a.s), (a.y2, a.y3)),
        p_yhat_given=_random_kernel(rng, (a.y2, a.q2, a.k2, a.s2, a.t2),
                                    (a.yhat2,)),
    )


def random_causal_factorization(alphabet: AlphabetSpec,
                                rng: np.random.Generator) -> CausalFactorization:
    """A random causal instance with Dirichlet(1) kernels and random maps."""
    a = alphabet
    return CausalFactorization(
        alphabet=a,
        p_state=_random_kernel(rng, (), (a.s, a.s1, a.s2)),
        p_k2=_random_kernel(rng, (), (a.k2,)),
        p_q2_given_k2=_random_kernel(rng, (a.k2,), (a.q2,)),
        p_t1t2=_random_kernel(rng, (), (a.t1, a.t2)),
        channel=_random_kernel(rng, (a.x1, a.x2, a.s), (a.y2, a.y3)),
        p_yhat_given=_random_kernel(rng, (a.y2, a.q2, a.k2, a.s2, a.t2),
                                    (a.yhat2,)),
        f1=rng.integers(0, a.x1, size=(a.t1, a.t2, a.s1)),
        f2=rng.integers(0, a.x2, size=(a.q2, a.k2, a.s2)),
    )


# ---------------------------------------------------------------------------
# Specialized instances and their directly coded reduced expressions.
#
# Each builder embeds a smaller model into the full factorization (absent
# variables become one-letter alphabets, identified variables become
# indicator kernels).  Each direct_* evaluator computes the reduced rate
# expressions straight from the small kernels with entropy sums, giving an
# independent route that the embedded evaluation must reproduce.
# ---------------------------------------------------------------------------


def _entropy_bits(p: np.ndarray) -> float:
    p = p[p > 0.0]
    return float(-(p * np.log2(p)).sum())


def _mi_h(table: np.ndarray, a, b, c=()) -> float:
    """I(A; B | C) over positional axes via four joint entropies."""
    a, b, c = set(a), set(b), set(c)
    if not a or not b:
        return 0.0

    def h(keep):
        drop = tuple(i for i in range(table.ndim) if i not in keep)
        return _entropy_bits(np.atleast_1d(table.sum(axis=drop)))
    return h(a | c) + h(b | c) - h(c) - h(a | b | c)


def state_free_factorization(p_u1u2, p_v, p_x2_given_v, p_x1_given_u1u2,
                             channel, p_yhat) -> DmFactorization:
    """Embed a state-free instance: one-letter states, cloud code as K2,
    relay input as Q2, and the source auxiliaries equal to (U1, U2).

    channel has axes (x1, x2, y2, y3); p_yhat has axes (y2, x2, v, u2, yhat).
    """
    p_u1u2 = np.asarray(p_u1u2, dtype=float)
    p_v = np.asarray(p_v, dtype=float)
    p_x2_given_v = np.asarray(p_x2_given_v, dtype=float)
    p_x1_given_u1u2 = np.asarray(p_x1_given_u1u2, dtype=float)
    channel = np.asarray(channel, dtype=float)
    p_yhat = np.asarray(p_yhat, dtype=float)
    nu1, nu2 = p_u1u2.shape
    nv, nx2 = p_x2_given_v.shape
    nx1 = p_x1_given_u1u2.shape[-1]
    ny2, ny3 = channel.shape[-2:]
    alpha = AlphabetSpec(s=1, s1=1, s2=1, k2=nv, q2=nx2, t1=nu1, t2=nu2,
                         x1=nx1, x2=nx2, yhat2=p_yhat.shape[-1],
                         y2=ny2, y3=ny3)
    return DmFactorization(
        alphabet=alpha,
        p_state=np.ones((1, 1, 1)),
        p_k2_given_s2=p_v[None, :],
        p_q2_given_k2s2=p_x2_given_v[:, None, :],
        p_x2_given_q2k2s2=np.broadcast_to(
            np.eye(nx2)[:, None, None, :], (nx2, nv, 1, nx2)).copy(),
        p_t1t2_given_s1=p_u1u2[None, :, :],
        p_x1_given_t1t2s1=p_x1_given_u1u2[:, :, None, :],
        channel=channel[:, :, None, :, :],
        p_yhat_given=p_yhat[:, :, :, None, :, :],
    )


def direct_state_free_bounds(p_u1u2, p_v, p_x2_given_v, p_x1_given_u1u2,
                             channel, p_yhat) -> RateBounds:
    """State-free rate expressions computed on the reduced joint."""
    # axes: u1=0, u2=1, v=2, x2=3, x1=4, y2=5, y3=6, yhat=7
    table = np.einsum("ab,c,cd,abe,edfg,fdcbh->abcdefgh",
                      p_u1u2, p_v, p_x2_given_v, p_x1_given_u1u2,
                      channel, p_yhat)
    b13 = _mi_h(table, {0}, {7, 6}, {2, 3})
    b12 = _mi_h(table, {1}, {5}, {2, 3})
    coupling = _mi_h(table, {0}, {1})
    b23 = _mi_h(table, {2}, {6})
    residual = _mi_h(table, {7}, {5, 1}, {2, 3, 6})
    budget = _mi_h(table, {3}, {6}, {2})
    raw_sum = b13 + b12 - coupling
    return RateBounds(max(0.0, b13), max(0.0, b12), max(0.0, raw_sum),
                      max(0.0, b23), feasible=residual <= budget + REGION_TOL,
                      clamped=raw_sum < 0.0)


def no_relay_factorization(p_state_pair, p_t1t2_given_s1, p_x1_given_t1t2s1,
                           channel) -> DmFactorization:
    """Embed a broadcast-only instance: the relay-side variables collapse
    to one-letter alphabets and the quantizer is constant.

    p_state_pair has axes (s, s1); channel has axes (x1, s, y2, y3).
    """
    p_state_pair = np.asarray(p_state_pair, dtype=float)
    p_t1t2_given_s1 = np.asarray(p_t1t2_given_s1, dtype=float)
    p_x1_given_t1t2s1 = np.asarray(p_x1_given_t1t2s1, dtype=float)
    channel = np.asarray(channel, dtype=float)
    ns, ns1 = p_state_pair.shape
    _, nt1, nt2 = p_t1t2_given_s1.shape
    nx1 = p_x1_given_t1t2s1.shape[-1]
    ny2, ny3 = channel.shape[-2:]
    alpha = AlphabetSpec(s=ns, s1=ns1, s2=1, k2=1, q2=1, t1=nt1, t2=nt2,
                         x1=nx1, x2=1, yhat2=1, y2=ny2, y3=ny3)
    return DmFactorization(
        alphabet=alpha,
        p_state=p_state_pair[:, :, None],
        p_k2_given_s2=np.ones((1, 1)),
        p_q2_given_k2s2=np.ones((1, 1, 1)),
        p_x2_given_q2k2s2=np.ones((1, 1, 1, 1)),
        p_t1t2_given_s1=p_t1t2_given_s1,
        p_x1_given_t1t2s1=p_x1_given_t1t2s1,
        channel=channel[:, None, :, :, :],
        p_yhat_given=np.ones((ny2, 1, 1, 1, nt2, 1)),
    )


def direct_no_relay_bounds(p_state_pair, p_t1t2_given_s1, p_x1_given_t1t2s1,
                           channel) -> RateBounds:
    """Two-stream broadcast-with-state expressions on the reduced joint."""
    # axes: s=0, s1=1, t1=2, t2=3, x1=4, y2=5, y3=6
    table = np.einsum("ab,bcd,cdbe,eafg->abcdefg",
                      p_state_pair, p_t1t2_given_s1, p_x1_given_t1t2s1,
                      channel)
    b13 = _mi_h(table, {2}, {6}) - _mi_h(table, {2}, {1})
    b12 = _mi_h(table, {3}, {5}) - _mi_h(table, {3}, {1})
    raw_sum = b13 + b12 - _mi_h(table, {2}, {3}, {1})
    return RateBounds(max(0.0, b13), max(0.0, b12), max(0.0, raw_sum), 0.0,
                      feasible=True,
                      clamped=min(b13, b12, raw_sum) < 0.0)


def single_user_source_csi_factorization(p_s, p_x2, p_t1_given_s,
                                         p_x1_given_t1s, channel,
                                         p_yhat_given_y2x2) -> DmFactorization:
    """Embed a single-stream instance with source-only state knowledge:
    no relay-private or source-to-relay messages, relay input as Q2.

    p_t1_given_s has axes (s, t1); p_x1_given_t1s has axes (s, t1, x1);
    channel has axes (x1, x2, s, y2, y3); p_yhat has axes (y2, x2, yhat).
    """
    p_s = np.asarray(p_s, dtype=float)
    p_x2 = np.asarray(p_x2, dtype=float)
    p_t1_given_s = np.asarray(p_t1_given_s, dtype=float)
    p_x1_given_t1s = np.asarray(p_x1_given_t1s, dtype=float)
    channel = np.asarray(channel, dtype=float)
    p_yhat_given_y2x2 = np.asarray(p_yhat_given_y2x2, dtype=float)
    ns = p_s.shape[0]
    nx2 = p_x2.shape[0]
    nt1 = p_t1_given_s.shape[1]
    nx1 = p_x1_given_t1s.shape[-1]
    ny2, ny3 = channel.shape[-2:]
    alpha = AlphabetSpec(s=ns, s1=ns, s2=1, k2=1, q2=nx2, t1=nt1, t2=1,
                         x1=nx1, x2=nx2, yhat2=p_yhat_given_y2x2.shape[-1],
                         y2=ny2, y3=ny3)
    return DmFactorization(
        alphabet=alpha,
        p_state=perfect_source_csi_state(p_s),
        p_k2_given_s2=np.ones((1, 1)),
        p_q2_given_k2s2=p_x2[None, None, :],
        p_x2_given_q2k2s2=np.eye(nx2)[:, None, None, :],
        p_t1t2_given_s1=p_t1_given_s[:, :, None],
        p_x1_given_t1t2s1=np.transpose(p_x1_given_t1s, (1, 0, 2))[:, None, :, :],
        channel=channel,
        p_yhat_given=p_yhat_given_y2x2[:, :, None, None, None, :],
    )


def direct_single_user_source_csi_bounds(p_s, p_x2, p_t1_given_s,
                                         p_x1_given_t1s, channel,
                                         p_yhat_given_y2x2) -> RateBounds:
    """Single-stream compress-forward expressions on the reduced joint."""
    # axes: s=0, x2=1, t1=2, x1=3, y2=4, y3=5, yhat=6
    table = np.einsum("a,b,ac,acd,dbaef,ebg->abcdefg",
                      p_s, p_x2, p_t1_given_s, p_x1_given_t1s,
                      channel, p_yhat_given_y2x2)
    b13 = _mi_h(table, {2}, {6, 5}, {1}) - _mi_h(table, {2}, {0})
    residual = _mi_h(table, {6}, {4}, {1, 5})
    budget = _mi_h(table, {1}, {5})
    return RateBounds(max(0.0, b13), 0.0, max(0.0, b13), 0.0,
                      feasible=residual <= budget + REGION_TOL,
                      clamped=b13 < 0.0)


def direct_perfect_csi_bounds(fact: DmFactorization, source_informed: bool,
                              relay_informed: bool) -> RateBounds:
    """Rate expressions written against S itself for perfect-CSI instances.

    For a factorization whose informed state components are exact copies of
    S (and whose uninformed components are one-letter), every S1/S2
    occurrence in the bounds can be replaced by S; evaluating that variant
    directly cross-checks the general expressions.
    """
    table = build_joint(fact).table
    ax = _AXIS
    s = {ax["S"]}
    k2, q2 = {ax["K2"]}, {ax["Q2"]}
    t1, t2 = {ax["T1"]}, {ax["T2"]}
    y2, y3, yh = {ax["Y2"]}, {ax["Y3"]}, {ax["YHAT2"]}
    src = s if source_informed else set()
    rel = s if relay_informed else set()
    b13 = _mi_h(table, t1, yh | y3, k2 | q2) - _mi_h(table, t1, src)
    b12 = (_mi_h(table, t2, y2 | rel, k2 | q2) - _mi_h(table, t2, src))
    coupling = _mi_h(table, t1, t2, src)
    raw_sum = b13 + b12 - coupling
    b23 = _mi_h(table, k2, y3) - _mi_h(table, k2, rel)
    residual = _mi_h(table, yh, y2 | rel | t2, k2 | q2 | y3)
    budget = _mi_h(table, q2, y3, k2) - _mi_h(table, q2, rel, k2)
    return RateBounds(max(0.0, b13), max(0.0, b12), max(0.0, raw_sum),
                      max(0.0, b23),
                      feasible=residual <= budget + REGION_TOL,
                      clamped=min(b13, b12, raw_sum, b23) < 0.0)
