"""Erasure-source thresholds: path minimum, cross-ratio minimum, rank-one
certificates, and the zero-rate envelopes.

Three probability thresholds order the erasure regimes:

* ``epsilon1`` — the minimum assigned value over all alternating paths,
  computed two independent ways (exhaustive scan and a parametric LP dual);
* ``epsilon2`` — the minimum square-root cross ratio over ordered pairs
  (equivalently the minimum over length-two paths);
* ``epsilon3_lb`` — a certified lower bound built from an explicit rank-one
  layer decomposition (the exact maximum is nonconvex and not attempted).

The LP dual of the path minimum is a pure difference-constraint system:
with potentials m(x) and n'(y) = -n(y), feasibility of
``m(x) - n'(y) <= log p(x,y)`` and ``n'(y) - m(x) <= A - log p(x,y)`` is
monotone in A, decided by negative-cycle detection and bisected to
|dA| <= 1e-10.  Every alternating cycle contains equally many edges of the
two kinds, so A = (max log p - min log p) is always feasible, which brackets
the search.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Optional

import numpy as np

from . import _kernels
from .correlation import eta, max_reweighted_rho_sq
from .errors import AlphabetTooLargeError, InvalidPathError
from .pmf import Channel, JointPmf, Source, restrict_support, y_given_x

_PATH_ENUM_LIMIT = 8
_LP_TOL = 1e-10


@dataclass(frozen=True)
class Path:
    """An alternating sequence of distinct row and column indices."""

    xs: tuple
    ys: tuple

    def __post_init__(self):
        xs = tuple(int(v) for v in self.xs)
        ys = tuple(int(v) for v in self.ys)
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ys", ys)
        if len(xs) == 0 or len(xs) != len(ys):
            raise InvalidPathError(
                f"path needs equally many (>=1) x- and y-indices, got {len(xs)}/{len(ys)}"
            )
        if len(set(xs)) != len(xs) or len(set(ys)) != len(ys):
            raise InvalidPathError("path indices must be distinct on each side")


def path_value(p: JointPmf, path: Path) -> float:
    """The geometric-mean cross ratio assigned to a path.

    value = (prod_i p(x_i, y_i) / (p(x_1, y_k) * prod_{i>=2} p(x_i, y_{i-1})))
    ** (1/k), with aggregate ratio conventions 0/0 := 1 and c/0 := +inf.
    Single-pair paths always have value 1.
    """
    nx, ny = p.shape
    if any(not 0 <= x < nx for x in path.xs) or any(
        not 0 <= y < ny for y in path.ys
    ):
        raise InvalidPathError("path indices out of range for this table")
    k = len(path.xs)
    m = p.probs
    num = 1.0
    den = m[path.xs[0], path.ys[k - 1]]
    for i in range(k):
        num *= m[path.xs[i], path.ys[i]]
        if i >= 1:
            den *= m[path.xs[i], path.ys[i - 1]]
    num = float(num)
    den = float(den)
    if num == 0.0 and den == 0.0:
        return 1.0
    if num == 0.0:
        return 0.0
    if den == 0.0:
        return math.inf
    return (num / den) ** (1.0 / k)


def _zero_cell_witness(q: JointPmf, rows: np.ndarray, cols: np.ndarray) -> Path:
    """A length-two zero-value path through a zero cell of the restricted table."""
    zi, zj = np.argwhere(q.probs == 0.0)[0]
    j2 = int(np.argmax(q.probs[zi]))
    i2 = int(np.argmax(q.probs[:, zj]))
    return Path(
        (int(rows[zi]), int(rows[i2])),
        (int(cols[zj]), int(cols[j2])),
    )


def epsilon1_paths(p: JointPmf) -> tuple[float, Path]:
    """Exhaustive minimum path value with one minimizing path.

    Zero-marginal rows/columns are dropped first; a remaining zero cell
    short-circuits to value 0 with an explicit length-two witness.  The
    all-positive scan enumerates each cyclic class once (smallest row index
    first).  Enumeration is factorial: tables whose support exceeds
    min(|X|,|Y|) = 8 must use :func:`epsilon1_lp` instead.
    """
    q, rows, cols = restrict_support(p)
    nx, ny = q.shape
    if min(nx, ny) > _PATH_ENUM_LIMIT:
        raise AlphabetTooLargeError(
            f"path enumeration needs min(|X|,|Y|) <= {_PATH_ENUM_LIMIT} support "
            f"symbols, got {min(nx, ny)}; use epsilon1_lp for the value"
        )
    if np.any(q.probs == 0.0):
        return 0.0, _zero_cell_witness(q, rows, cols)
    logv, wxs, wys = _kernels.path_scan(np.log(q.probs))
    witness = Path(
        tuple(int(rows[i]) for i in wxs), tuple(int(cols[j]) for j in wys)
    )
    return min(1.0, math.exp(logv)), witness


def _lp_edges(logp: np.ndarray):
    nx, ny = logp.shape
    xs, ys = np.meshgrid(np.arange(nx), np.arange(ny), indexing="ij")
    xs = xs.ravel()
    ys = ys.ravel() + nx
    u = np.concatenate([ys, xs])
    v = np.concatenate([xs, ys])
    return u, v, logp.ravel()


def _lp_feasible(u, v, lw, a: float, nnodes: int):
    w = np.concatenate([lw, a - lw])
    return _kernels.bf_feasible(u, v, w, nnodes)


def _lp_solve(logp: np.ndarray) -> tuple[float, np.ndarray]:
    """Smallest feasible A (within 1e-10) and potentials certifying it."""
    nx, ny = logp.shape
    nnodes = nx + ny
    u, v, lw = _lp_edges(logp)
    ok, dist = _lp_feasible(u, v, lw, 0.0, nnodes)
    if ok:
        return 0.0, dist
    hi = float(logp.max() - logp.min())
    ok, dist = _lp_feasible(u, v, lw, hi, nnodes)
    if not ok:  # pragma: no cover - impossible by the cycle-weight bound
        raise AssertionError("constraint system infeasible at its upper bracket")
    lo = 0.0
    while hi - lo > _LP_TOL:
        mid = 0.5 * (lo + hi)
        ok, mid_dist = _lp_feasible(u, v, lw, mid, nnodes)
        if ok:
            hi, dist = mid, mid_dist
        else:
            lo = mid
    return hi, dist


def epsilon1_lp(p: JointPmf) -> float:
    """Minimum path value via the parametric difference-constraint dual.

    Independent of :func:`epsilon1_paths` (no enumeration, no witness) and
    free of alphabet-size limits.  Zero cells short-circuit to 0.
    """
    q, _, _ = restrict_support(p)
    if np.any(q.probs == 0.0):
        return 0.0
    a_star, _ = _lp_solve(np.log(q.probs))
    return math.exp(-a_star)


def _cross_ratio_tensor(m: np.ndarray):
    """Ratio tensor over ordered tuples with conventions; invalid -> +inf."""
    nx, ny = m.shape
    num = np.multiply.outer(m, m)  # [x1, y1, x2, y2]
    den = np.einsum("ad,cb->abcd", m, m)
    ratio = np.full(num.shape, math.inf)
    both = (num > 0.0) & (den > 0.0)
    ratio[both] = num[both] / den[both]
    ratio[(num == 0.0) & (den == 0.0)] = 1.0
    ratio[(num == 0.0) & (den > 0.0)] = 0.0
    idx = np.arange(nx)
    ratio[idx, :, idx, :] = math.inf
    jdx = np.arange(ny)
    ratio[:, jdx, :, jdx] = math.inf
    return ratio


def epsilon2(p: JointPmf) -> tuple[float, Optional[tuple]]:
    """Minimum square-root cross ratio over ordered index pairs.

    Returns the value and a minimizing tuple (x1, x2, y1, y2), or None when
    one alphabet has a single symbol (the minimum over an empty set is 1).
    """
    nx, ny = p.shape
    if nx < 2 or ny < 2:
        return 1.0, None
    ratio = _cross_ratio_tensor(p.probs)
    flat = int(np.argmin(ratio))
    x1, y1, x2, y2 = np.unravel_index(flat, ratio.shape)
    value = math.sqrt(float(ratio[x1, y1, x2, y2]))
    return min(1.0, value), (int(x1), int(x2), int(y1), int(y2))


@dataclass(frozen=True, eq=False)
class Epsilon3Certificate:
    """An explicit feasible rank-one layer decomposition.

    ``base_layer`` is the rank-one reweighting delta(x,y) = exp(m(x) + n(y))
    / p(x,y) from the LP potentials, embedded in the full table (1 outside
    the support); each remaining layer is the single-cell indicator carrying
    that cell's leftover 1 - delta.  When the support is not a full
    rectangle no positive base layer exists and only indicator layers are
    emitted.  ``value`` is the sum over layers of the per-layer minimum over
    support cells — a lower bound on the best achievable threshold,
    recomputed generically from the layers themselves.
    """

    value: float
    base_layer: Optional[np.ndarray]
    support: np.ndarray

    @property
    def num_layers(self) -> int:
        return int(self.support.size) + (0 if self.base_layer is None else 1)

    def layers(self) -> Iterator[np.ndarray]:
        """Yield every delta layer as a full-table array (lazily)."""
        shape = self.support.shape
        if self.base_layer is not None:
            yield self.base_layer.copy()
            leftovers = 1.0 - self.base_layer
        else:
            leftovers = np.ones(shape)
        for i in range(shape[0]):
            for j in range(shape[1]):
                layer = np.zeros(shape)
                layer[i, j] = leftovers[i, j]
                yield layer

    def verify(self, p: JointPmf, tol: float = 1e-8) -> bool:
        """Check feasibility: nonnegativity, unit layer sums, rank-one
        weighted tables, and the stated value."""
        total = np.zeros(p.shape)
        value = 0.0
        for layer in self.layers():
            if np.any(layer < -tol):
                return False
            total += layer
            weighted = p.probs * layer
            s = np.linalg.svd(weighted, compute_uv=False)
            if s.size >= 2 and s[1] > tol * max(1.0, s[0]):
                return False
            if self.support.any():
                value += float(layer[self.support].min())
        if np.max(np.abs(total - 1.0)) > tol:
            return False
        return abs(value - self.value) <= tol


def epsilon3_certificate(p: JointPmf) -> Epsilon3Certificate:
    """Build the explicit layer decomposition underlying the lower bound."""
    support = p.probs > 0.0
    q, rows, cols = restrict_support(p)
    if np.any(q.probs == 0.0):
        cert = Epsilon3Certificate(0.0, None, support)
    else:
        nx, _ = q.shape
        a_star, dist = _lp_solve(np.log(q.probs))
        m = dist[:nx]
        nprime = dist[nx:]
        delta = np.exp(m[:, None] - nprime[None, :] - np.log(q.probs))
        full = np.ones(p.shape)
        full[np.ix_(rows, cols)] = delta
        cert = Epsilon3Certificate(0.0, full, support)
    value = 0.0
    if support.any():
        for layer in cert.layers():
            value += float(layer[support].min())
    return Epsilon3Certificate(value, cert.base_layer, support)


def epsilon3_lower_bound(p: JointPmf) -> float:
    """A certified lower bound on the rank-one layer threshold.

    Always at least epsilon1 (minus bisection slack ~1e-10); tightness in
    general is unknown and never claimed.
    """
    return epsilon3_certificate(p).value


def oneway_zero_threshold(channel: Channel) -> float:
    """Largest erasure probability with provably zero one-way rate: 1 - eta."""
    return 1.0 - eta(channel).eta


def lbar_zero_threshold(p: JointPmf) -> float:
    """1 minus the maximum rho_m**2 over reweightings of p.

    The inner maximization is a heuristic multi-start search, so the
    returned threshold is an upper bound on the true zero-rate threshold.
    """
    q, _, _ = restrict_support(p)
    return 1.0 - max_reweighted_rho_sq(q)


@dataclass(frozen=True, eq=False)
class ThresholdReport:
    """All thresholds for one erasure source plus the capacity verdict."""

    epsilon1: float
    epsilon2: float
    epsilon3_lb: float
    oneway_threshold: float
    lbar_threshold: float
    verdict: str
    witness_path: Optional[Path]
    witness_pair: Optional[tuple]

    def to_json_dict(self) -> dict:
        return {
            "epsilon1": self.epsilon1,
            "epsilon2": self.epsilon2,
            "epsilon3_lb": self.epsilon3_lb,
            "oneway_threshold": self.oneway_threshold,
            "lbar_threshold": self.lbar_threshold,
            "verdict": self.verdict,
            "witness_path": None
            if self.witness_path is None
            else {"xs": list(self.witness_path.xs), "ys": list(self.witness_path.ys)},
            "witness_pair": None
            if self.witness_pair is None
            else list(self.witness_pair),
        }


def threshold_report(source: Source) -> ThresholdReport:
    """Assemble every threshold and the verdict for an erasure source.

    The verdict is "zero" when epsilon <= epsilon1, "positive" when
    epsilon > epsilon2 and "indeterminate" in the gap.  When either support
    alphabet is binary the two thresholds coincide (paths cannot be longer
    than two pairs), so epsilon1 is reported equal to epsilon2 and the gap
    is empty.  Supports larger than the enumeration limit fall back to the
    LP value without a path witness.
    """
    epsilon = source.require_erasure()
    joint = source.joint
    restricted, _, _ = restrict_support(joint)
    nx, ny = restricted.shape
    if min(nx, ny) <= _PATH_ENUM_LIMIT:
        eps1, wpath = epsilon1_paths(joint)
    else:
        eps1, wpath = epsilon1_lp(joint), None
    eps2, wpair = epsilon2(joint)
    if min(nx, ny) <= 2:
        eps1 = eps2
    eps3 = epsilon3_lower_bound(joint)
    oneway = oneway_zero_threshold(y_given_x(restricted))
    lbar = lbar_zero_threshold(joint)
    if epsilon <= eps1:
        verdict = "zero"
    elif epsilon > eps2:
        verdict = "positive"
    else:
        verdict = "indeterminate"
    return ThresholdReport(
        epsilon1=eps1,
        epsilon2=eps2,
        epsilon3_lb=eps3,
        oneway_threshold=oneway,
        lbar_threshold=lbar,
        verdict=verdict,
        witness_path=wpath,
        witness_pair=wpair,
    )
