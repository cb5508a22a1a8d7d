"""Entropies, mutual informations, Renyi/Chernoff divergences, TV distance.

Everything returns nats; the CLI converts to bits at the edge.  Extended
reals are used freely: ``+inf`` propagates through comparisons and no
function here ever returns NaN.  The convention ``0 * log 0 := 0`` applies
throughout, and divergence sums run over the support intersection with
zero-probability terms contributing zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.special import xlogy

from .errors import (
    AlphabetMismatchError,
    InvalidAlphaError,
    InvalidPmfError,
    OutOfRangeError,
)
from .pmf import JointPmf, Source

LN2 = math.log(2.0)

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def nats_to_bits(x: float) -> float:
    if x == math.inf:
        return math.inf
    return x / LN2


def bits_to_nats(x: float) -> float:
    if x == math.inf:
        return math.inf
    return x * LN2


@dataclass(frozen=True)
class Divergence:
    """A divergence value in nats, tagged with its order where applicable.

    For Chernoff information, ``alpha`` is the minimizing exponent found by
    the golden-section search.
    """

    value: float
    alpha: Optional[float] = None


def _as_pmf(p, name: str = "pmf") -> np.ndarray:
    arr = np.asarray(p, dtype=np.float64).ravel()
    if arr.size == 0:
        raise InvalidPmfError(f"{name} is empty")
    if not np.all(np.isfinite(arr)) or np.any(arr < 0):
        raise InvalidPmfError(f"{name} has negative or non-finite entries")
    total = float(arr.sum())
    if abs(total - 1.0) > 1e-9:
        raise InvalidPmfError(f"{name} sums to {total!r}, expected 1")
    return arr


def _aligned_pair(p, q) -> tuple[np.ndarray, np.ndarray]:
    pa = _as_pmf(p, "p")
    qa = _as_pmf(q, "q")
    if pa.shape != qa.shape:
        raise AlphabetMismatchError(
            f"p and q live on different alphabets ({pa.size} vs {qa.size} symbols)"
        )
    return pa, qa


def entropy(p) -> float:
    """Shannon entropy -sum p log p in nats."""
    arr = _as_pmf(p)
    return float(-xlogy(arr, arr).sum())


def binary_entropy(p: float) -> float:
    """h(p) in nats, with h(0) = h(1) = 0."""
    p = float(p)
    if not (0.0 <= p <= 1.0):
        raise OutOfRangeError(f"binary entropy needs p in [0, 1], got {p!r}")
    if p == 0.0 or p == 1.0:
        return 0.0
    return float(-p * math.log(p) - (1.0 - p) * math.log1p(-p))


def mutual_information(p: JointPmf) -> float:
    """I(X;Y) of a joint pmf, in nats."""
    joint = p.probs
    outer = np.outer(p.x_marginal(), p.y_marginal())
    pos = joint > 0.0
    return float(
        (joint[pos] * (np.log(joint[pos]) - np.log(outer[pos]))).sum()
    )


def conditional_mutual_information(source: Source) -> float:
    """I(X;Y|Z) under the source's joint law p(x,y) * p(z|x,y), in nats.

    Computed by direct enumeration over the materialized eavesdropper
    channel; for erasure sources this reproduces the identity
    I(X;Y|Z) = epsilon * I(X;Y).
    """
    joint = source.joint.probs
    nx, ny = joint.shape
    eve = source.eve_channel()
    # tensor[x, y, z] = p(x, y) * p(z | x, y), rows of eve are x-major pairs
    tensor = joint.reshape(nx, ny, 1) * eve.probs.reshape(nx, ny, -1)
    pz = tensor.sum(axis=(0, 1))
    pxz = tensor.sum(axis=1)
    pyz = tensor.sum(axis=0)
    pos = tensor > 0.0
    num = tensor * pz.reshape(1, 1, -1)
    den = pxz.reshape(nx, 1, -1) * pyz.reshape(1, ny, -1)
    out = float(
        (tensor[pos] * (np.log(num[pos]) - np.log(den[pos]))).sum()
    )
    return max(0.0, out)


def tv_distance(p, q) -> float:
    """Total-variation distance, half the L1 difference."""
    pa, qa = _aligned_pair(p, q)
    return float(0.5 * np.abs(pa - qa).sum())


def renyi_divergence(p, q, alpha: float) -> Divergence:
    """Renyi divergence of order alpha in nats.

    alpha = 1 returns the KL divergence (continuity limit); alpha = inf
    returns log max(p/q) over the support of p; alpha = 0 returns
    -log q(supp p).  Support conventions: terms with p(x) = 0 contribute
    nothing; q(x) = 0 on supp p yields +inf for alpha >= 1.
    """
    alpha = float(alpha)
    if math.isnan(alpha) or alpha < 0.0:
        raise InvalidAlphaError(f"order must lie in [0, inf], got {alpha!r}")
    pa, qa = _aligned_pair(p, q)
    psupp = pa > 0.0
    if alpha == math.inf:
        if np.any(psupp & (qa == 0.0)):
            return Divergence(math.inf, alpha)
        val = float(np.max(np.log(pa[psupp]) - np.log(qa[psupp])))
        return Divergence(max(0.0, val), alpha)
    if alpha == 0.0:
        mass = float(qa[psupp].sum())
        val = math.inf if mass == 0.0 else -math.log(mass)
        return Divergence(max(0.0, val), alpha)
    if alpha == 1.0:
        if np.any(psupp & (qa == 0.0)):
            return Divergence(math.inf, alpha)
        val = float(
            (pa[psupp] * (np.log(pa[psupp]) - np.log(qa[psupp]))).sum()
        )
        return Divergence(max(0.0, val), alpha)
    if alpha > 1.0 and np.any(psupp & (qa == 0.0)):
        return Divergence(math.inf, alpha)
    both = psupp & (qa > 0.0)
    if not both.any():
        return Divergence(math.inf, alpha)
    terms = np.exp(alpha * np.log(pa[both]) + (1.0 - alpha) * np.log(qa[both]))
    total = float(terms.sum())
    if total == 0.0:
        return Divergence(math.inf, alpha)
    return Divergence(max(0.0, math.log(total) / (alpha - 1.0)), alpha)


def chernoff_information(p, q) -> Divergence:
    """Chernoff information -log min over alpha in (0,1) of sum p^a q^(1-a).

    The inner sum runs over the support intersection and is convex in
    alpha; the minimum is located by golden-section search to an interval
    narrower than 1e-12.  Disjoint supports give +inf.  The returned
    ``alpha`` is the minimizer.
    """
    pa, qa = _aligned_pair(p, q)
    both = (pa > 0.0) & (qa > 0.0)
    if not both.any():
        return Divergence(math.inf, None)
    lp = np.log(pa[both])
    lq = np.log(qa[both])

    def f(a: float) -> float:
        return float(np.exp(a * lp + (1.0 - a) * lq).sum())

    lo, hi = 0.0, 1.0
    m1 = hi - _INV_PHI * (hi - lo)
    m2 = lo + _INV_PHI * (hi - lo)
    f1, f2 = f(m1), f(m2)
    while hi - lo > 1e-12:
        if f1 <= f2:
            hi, m2, f2 = m2, m1, f1
            m1 = hi - _INV_PHI * (hi - lo)
            f1 = f(m1)
        else:
            lo, m1, f1 = m1, m2, f2
            m2 = lo + _INV_PHI * (hi - lo)
            f2 = f(m2)
    astar = 0.5 * (lo + hi)
    return Divergence(max(0.0, -math.log(f(astar))), astar)
