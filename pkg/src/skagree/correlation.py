"""Maximal correlation, its channel envelope, cross-ratio divergences,
Doeblin coefficient, and erasure-degradation construction.

Maximal correlation rho_m is the second singular value of the normalized
joint matrix Q[x,y] = p(x,y)/sqrt(p(x)p(y)) restricted to support
rows/columns.  The channel envelope eta = max over input pmfs of rho_m**2
and the reweighted maximum used by the zero-rate threshold are both
nonconvex, so they are located by multi-start simplex search; reported
values are certified lower bounds of the true maxima (all starts are
feasible points).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .errors import (
    DimensionMismatchError,
    EpsilonOutOfRangeError,
    InvalidAlphaError,
    InvalidPmfError,
    OutOfRangeError,
)
from .info import renyi_divergence
from .pmf import ERASURE_SYMBOL, Channel, JointPmf, _frozen

_NM_OPTIONS = {"xatol": 1e-7, "fatol": 1e-11, "maxiter": 4000, "maxfev": 4000}


@dataclass(frozen=True)
class CorrelationReport:
    """eta = max over inputs of rho_m**2, with the input pmf achieving it."""

    rho_m: float
    eta: float
    input_pmf_at_max: tuple


def _rho_sq(matrix: np.ndarray) -> float:
    """rho_m**2 of a raw joint table (not necessarily normalized)."""
    total = matrix.sum()
    if total <= 0.0:
        return 0.0
    m = matrix / total
    px = m.sum(axis=1)
    py = m.sum(axis=0)
    rows = px > 0.0
    cols = py > 0.0
    if rows.sum() < 2 or cols.sum() < 2:
        return 0.0
    sub = m[np.ix_(rows, cols)]
    # divide by the two marginal factors separately: their outer product can
    # underflow to zero when a search drives some masses below 1e-160
    q = sub / np.sqrt(px[rows])[:, None] / np.sqrt(py[cols])[None, :]
    s = np.linalg.svd(q, compute_uv=False)
    if s.size < 2:
        return 0.0
    return float(min(1.0, s[1]) ** 2)


def maximal_correlation(p: JointPmf) -> float:
    """Maximal correlation coefficient rho_m of a joint pmf, in [0, 1]."""
    return math.sqrt(_rho_sq(p.probs))


def _softmax(theta: np.ndarray) -> np.ndarray:
    z = np.exp(theta - theta.max())
    return z / z.sum()


def eta(channel: Channel) -> CorrelationReport:
    """Maximize rho_m**2 over input pmfs of the channel.

    Multi-start Nelder-Mead over a softmax parameterization of the input
    simplex: the uniform input, one start biased toward each vertex, and
    seeded random starts (at least 32 total).  Objective tolerance 1e-6.
    """
    w = channel.probs
    k = w.shape[0]
    if k == 1:
        return CorrelationReport(0.0, 0.0, (1.0,))

    def objective(theta: np.ndarray) -> float:
        px = _softmax(theta)
        return -_rho_sq(px[:, None] * w)

    starts = [np.zeros(k)]
    for i in range(k):
        t = np.zeros(k)
        t[i] = 3.0
        starts.append(t)
    rng = np.random.default_rng(20240517)
    while len(starts) < 32:
        starts.append(rng.normal(scale=1.5, size=k))
    best_val = -math.inf
    best_p = np.full(k, 1.0 / k)
    for theta0 in starts:
        res = minimize(objective, theta0, method="Nelder-Mead", options=_NM_OPTIONS)
        if -res.fun > best_val:
            best_val = -res.fun
            best_p = _softmax(res.x)
    best_val = float(min(1.0, max(0.0, best_val)))
    return CorrelationReport(
        math.sqrt(best_val), best_val, tuple(float(v) for v in best_p)
    )


def max_reweighted_rho_sq(p: JointPmf) -> float:
    """Maximize rho_m**2 over reweighted pmfs q(x,y) proportional to a(x)b(y)p(x,y).

    Heuristic multi-start search (>= 64 starts over log-weights, including
    the identity a = b = 1); the result is a certified lower bound on the
    true maximum.
    """
    m = p.probs
    nx, ny = m.shape
    dim = nx + ny

    def objective(uv: np.ndarray) -> float:
        a = np.exp(uv[:nx] - uv[:nx].max())
        b = np.exp(uv[nx:] - uv[nx:].max())
        return -_rho_sq(a[:, None] * b[None, :] * m)

    starts = [np.zeros(dim)]
    rng = np.random.default_rng(77003)
    for scale in (0.3, 1.0, 3.0):
        for _ in range(21):
            starts.append(rng.normal(scale=scale, size=dim))
    best = 0.0
    for uv0 in starts:
        res = minimize(objective, uv0, method="Nelder-Mead", options=_NM_OPTIONS)
        if -res.fun > best:
            best = -res.fun
    return float(min(1.0, max(0.0, best)))


# ---------------------------------------------------------------------------
# cross-ratio divergences
# ---------------------------------------------------------------------------

def _pair_tensors(p: JointPmf) -> tuple[np.ndarray, np.ndarray]:
    """The two product laws over (x1, y1, x2, y2): straight and swapped."""
    m = p.probs
    q = np.multiply.outer(m, m)  # q[x1, y1, x2, y2] = p(x1,y1) p(x2,y2)
    r = np.einsum("ad,cb->abcd", m, m)  # r[...] = p(x1,y2) p(x2,y1)
    return q, r


def j_alpha(p: JointPmf, alpha: float) -> float:
    """Renyi divergence between the straight and swapped pair laws, in nats."""
    alpha = float(alpha)
    if math.isnan(alpha) or alpha <= 0.0:
        raise InvalidAlphaError(f"order must lie in (0, inf], got {alpha!r}")
    q, r = _pair_tensors(p)
    return renyi_divergence(q.ravel(), r.ravel(), alpha).value


def j_infinity(p: JointPmf) -> float:
    """Max log cross ratio p(x1,y1)p(x2,y2)/(p(x1,y2)p(x2,y1)), in nats.

    The maximum runs over ordered tuples with x1 != x2 and y1 != y2, with
    ratio conventions 0/0 := 1 and c/0 := +inf.  Degenerate tables with no
    valid tuple (a single row or column) give 0.
    """
    m = p.probs
    nx, ny = m.shape
    if nx < 2 or ny < 2:
        return 0.0
    num = np.multiply.outer(m, m)
    den = np.einsum("ad,cb->abcd", m, m)
    valid = np.ones((nx, ny, nx, ny), dtype=bool)
    idx = np.arange(nx)
    valid[idx, :, idx, :] = False
    jdx = np.arange(ny)
    valid[:, jdx, :, jdx] = False
    if np.any(valid & (num > 0.0) & (den == 0.0)):
        return math.inf
    both = valid & (num > 0.0) & (den > 0.0)
    best = 0.0  # the 0/0 := 1 convention contributes log 1
    if both.any():
        best = max(best, float(np.max(np.log(num[both]) - np.log(den[both]))))
    return best


# ---------------------------------------------------------------------------
# Doeblin coefficient and erasure degradation
# ---------------------------------------------------------------------------

def doeblin_coefficient(channel: Channel) -> float:
    """Sum over outputs of the per-output minimum across inputs."""
    return float(channel.probs.min(axis=0).sum())


def _unique_erasure_label(taken) -> str:
    label = ERASURE_SYMBOL
    while label in taken:
        label += "'"
    return label


def erasure_degradation_channel(q: Channel, epsilon: float, p_a=None):
    """Realize q(r|a) as a degradation of an erasure observation, if possible.

    Feasible exactly when the Doeblin coefficient of q is at least epsilon;
    then there is a channel p(r|b) on the extended input alphabet
    B = A + erasure such that mixing its rows with weights (1-eps, eps)
    reproduces q(r|a) for every a.  The erasure row receives mass lambda(r)
    allocated greedily in output order under the per-output cap
    min_a q(r|a); any allocation meeting the cap works, so the order does
    not affect correctness.  Returns the channel, or None when infeasible.

    ``p_a`` is the strictly positive reference input pmf (uniform by
    default); it enters only through the marginal identity validated in
    tests, not through the construction itself.
    """
    epsilon = float(epsilon)
    if not (0.0 <= epsilon <= 1.0):
        raise EpsilonOutOfRangeError(f"epsilon must lie in [0, 1], got {epsilon!r}")
    rows = q.probs
    na, nr = rows.shape
    if p_a is None:
        p_a = np.full(na, 1.0 / na)
    else:
        p_a = np.asarray(p_a, dtype=np.float64)
        if p_a.shape != (na,):
            raise DimensionMismatchError("reference input pmf has the wrong length")
        if np.any(p_a <= 0.0) or abs(float(p_a.sum()) - 1.0) > 1e-9:
            raise InvalidPmfError("reference input pmf must be strictly positive")
    caps = rows.min(axis=0)
    if caps.sum() < epsilon:
        return None
    budget = epsilon
    lam = np.zeros(nr)
    for r in range(nr):
        take = min(float(caps[r]), budget)
        lam[r] = take
        budget -= take
        if budget <= 0.0:
            break
    b_alphabet = q.input_alphabet + (_unique_erasure_label(q.input_alphabet),)
    if epsilon == 0.0:
        erow = np.full(nr, 1.0 / nr)
        out = np.vstack([rows, erow])
    elif epsilon == 1.0:
        arows = np.full((na, nr), 1.0 / nr)
        out = np.vstack([arows, (p_a @ rows)[None, :]])
    else:
        arows = (rows - lam[None, :]) / (1.0 - epsilon)
        erow = lam / epsilon
        out = np.vstack([np.clip(arows, 0.0, None), erow])
    out = out / out.sum(axis=1, keepdims=True)
    return Channel(b_alphabet, q.output_alphabet, _frozen(out))


# ---------------------------------------------------------------------------
# uncertainty product
# ---------------------------------------------------------------------------

def uncertainty_product_bound(channel: Channel, n: int) -> float:
    """Exponent n * J_inf of the confusion-product lower bound, in nats.

    J_inf is evaluated on the joint built from a uniform input and the
    channel; the input marginal cancels inside every cross ratio, so any
    full-support input gives the same value.
    """
    n = int(n)
    if n < 1:
        raise OutOfRangeError(f"block length must be >= 1, got {n}")
    ni = channel.probs.shape[0]
    joint = JointPmf(
        channel.input_alphabet,
        channel.output_alphabet,
        _frozen(channel.probs / ni),
    )
    return n * j_infinity(joint)


def verify_uncertainty_product(
    confusion: Channel, bound_nats: float, m1: int = 0, m2: int = 1
) -> bool:
    """Check the two-message confusion-product inequality.

    Verifies p(m2|m1) p(m1|m2) >= p(m1|m1) p(m2|m2) exp(-bound) by
    comparing the two products in log space (log 0 = -inf, so both sides
    zero counts as equality and the inequality holds).
    """
    rows = confusion.probs
    k = rows.shape[0]
    if not (0 <= m1 < k and 0 <= m2 < k) or m1 == m2:
        raise OutOfRangeError(f"need two distinct message indices < {k}")

    def log_prod(a: float, b: float) -> float:
        if a == 0.0 or b == 0.0:
            return -math.inf
        return math.log(a) + math.log(b)

    lhs = log_prod(rows[m1, m2], rows[m2, m1])
    rhs = log_prod(rows[m1, m1], rows[m2, m2]) - bound_nats
    return lhs >= rhs
