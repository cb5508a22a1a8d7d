"""Closed forms and curve emission for the doubly symmetric binary source
with an erasure eavesdropper, DSBE(p, epsilon).

This module collects the quantities that have exact or search-based
expressions in the binary-symmetric case: the pairwise threshold
min(p,1-p)/max(p,1-p), the one-way threshold 4p(1-p), the repetition-code
rate, the intrinsic-information-style upper bound ``b0_sub`` built from an
explicit reveal channel, and a certified lower bound on the one-way secret
key rate obtained by searching bounded-cardinality auxiliaries.  All rates
here are reported in bits, matching the usual plotting convention.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np
from scipy.special import xlogy

from .errors import EpsilonOutOfRangeError, OutOfRangeError
from .info import LN2, binary_entropy, mutual_information
from .pmf import JointPmf, Source, build_erasure_source, validate_joint

# auxiliary-search grid resolution: 201 input-bias points, 101 x 101
# conditional-law points.  Fine enough that the zero/positive transition of
# the one-way bound lands within half a grid step of the closed-form
# threshold; coarse enough to build the cached tables in about a second.
_Q_POINTS = 201
_ST_POINTS = 101
_ZERO_SNAP = 1e-12


def _check_p(p: float) -> float:
    p = float(p)
    if not 0.0 < p < 1.0 or math.isnan(p):
        raise OutOfRangeError(f"crossover probability must lie in (0, 1), got {p}")
    return p


def _check_eps(epsilon: float) -> float:
    epsilon = float(epsilon)
    if not 0.0 <= epsilon <= 1.0 or math.isnan(epsilon):
        raise EpsilonOutOfRangeError(
            f"erasure probability must lie in [0, 1], got {epsilon}"
        )
    return epsilon


@dataclass(frozen=True)
class DsbeParams:
    """Parameters (p, epsilon); p is canonicalized to (0, 0.5] since p and
    1-p describe the same source up to relabeling one alphabet."""

    p: float
    epsilon: float

    def __post_init__(self):
        p = _check_p(self.p)
        object.__setattr__(self, "p", min(p, 1.0 - p))
        object.__setattr__(self, "epsilon", _check_eps(self.epsilon))


@dataclass(frozen=True)
class DsbeThresholds:
    """The two closed-form feasibility thresholds for the binary source."""

    eps2: float
    oneway: float


def dsbe_pmf(p: float) -> JointPmf:
    """The 2x2 joint [[ (1-p)/2, p/2 ], [ p/2, (1-p)/2 ]]."""
    p = _check_p(p)
    m = np.array([[(1.0 - p) / 2.0, p / 2.0], [p / 2.0, (1.0 - p) / 2.0]])
    return validate_joint(m, ["0", "1"], ["0", "1"])


def dsbe_source(p: float, epsilon: float) -> Source:
    """DSBE(p, epsilon): the symmetric binary joint with an erasure observer."""
    return build_erasure_source(dsbe_pmf(p), _check_eps(epsilon))


def dsbe_thresholds(p: float) -> DsbeThresholds:
    """eps2 = min(p,1-p)/max(p,1-p) and the one-way threshold 4p(1-p).

    The pairwise threshold never exceeds the one-way threshold; they meet
    only at p = 1/2, where both degenerate to 1.
    """
    p = _check_p(p)
    eps2 = min(p, 1.0 - p) / max(p, 1.0 - p)
    oneway = 4.0 * p * (1.0 - p)
    assert eps2 <= oneway + 1e-15
    return DsbeThresholds(eps2=eps2, oneway=oneway)


def repetition_rate(p: float, epsilon: float, reps: int) -> float:
    """Secret-key rate of N-fold repetition advantage distillation, in bits.

    ((p^N + (1-p)^N) / N) * max(0, eps^N - h(p^N / (p^N + (1-p)^N))).
    The bracket compares the chance Eve missed the whole block against the
    parties' residual disagreement entropy; a negative bracket means the
    protocol distills nothing and the rate is 0.
    """
    p = _check_p(p)
    epsilon = _check_eps(epsilon)
    reps = int(reps)
    if reps < 1:
        raise OutOfRangeError(f"repetition count must be >= 1, got {reps}")
    pn = p**reps
    qn = (1.0 - p) ** reps
    keep = pn + qn
    mism = binary_entropy(pn / keep) / LN2
    return (keep / reps) * max(0.0, epsilon**reps - mism)


def b0_sub(p: float, epsilon: float) -> float:
    """I(X;Y|J) in bits for the calibrated reveal channel J of Z.

    J reveals the agreement bit when Z lands in the heavier symbol pair and
    erases otherwise; below the pairwise threshold the reveal probability is
    randomized down so the conditional joint given an erasure is exactly
    uniform, making the value identically zero there.  Above the threshold
    the posterior given J = e is proportional to [[a, b], [b, a]] with
    a = eps * max(p, 1-p) / 2 and b = min(p, 1-p) / 2, and
    I(X;Y|J) = P(J = e) * I(X;Y | J = e).
    """
    p = _check_p(p)
    epsilon = _check_eps(epsilon)
    mx = max(p, 1.0 - p)
    mn = min(p, 1.0 - p)
    if epsilon <= mn / mx:
        return 0.0
    a = epsilon * mx / 2.0
    b = mn / 2.0
    # the posterior [[a, b], [b, a]] has uniform marginals, so its mutual
    # information is ln2 - h(a / (a+b)); clamp the cancellation noise right
    # at the takeoff, where the true value sinks below one ulp
    i_cond = max(0.0, LN2 - binary_entropy(a / (a + b)))
    return (epsilon * mx + mn) * i_cond / LN2


@lru_cache(maxsize=8)
def _oneway_tables(p: float):
    """Per-bias tables of I(U;Y) and I(U;X) over a binary-auxiliary grid.

    For P(X=0) = q and the channel U|X given by s = p(U=0|X=0),
    t = p(U=0|X=1), both mutual informations are tabulated over the
    (s, t) grid.  They do not depend on the erasure rate, so one cached
    table per p serves every point of an epsilon sweep.
    """
    qs = np.linspace(0.0, 1.0, _Q_POINTS)
    s = np.linspace(0.0, 1.0, _ST_POINTS)[:, None]
    t = np.linspace(0.0, 1.0, _ST_POINTS)[None, :]
    a_tab = np.empty((_Q_POINTS, _ST_POINTS * _ST_POINTS))
    b_tab = np.empty_like(a_tab)
    for i, q in enumerate(qs):
        # joint p(u, x), u indexed first
        ux = np.stack(
            [
                np.broadcast_to(q * s, (_ST_POINTS, _ST_POINTS)),
                np.broadcast_to((1.0 - q) * t, (_ST_POINTS, _ST_POINTS)),
                np.broadcast_to(q * (1.0 - s), (_ST_POINTS, _ST_POINTS)),
                np.broadcast_to((1.0 - q) * (1.0 - t), (_ST_POINTS, _ST_POINTS)),
            ],
            axis=-1,
        ).reshape(_ST_POINTS, _ST_POINTS, 2, 2)
        pu = ux.sum(axis=3)
        hu = -xlogy(pu, pu).sum(axis=2)
        hx = -(xlogy(q, q) + xlogy(1.0 - q, 1.0 - q))
        hux = -xlogy(ux, ux).sum(axis=(2, 3))
        # pass X through the binary symmetric channel to get p(u, y)
        uy = np.empty_like(ux)
        uy[..., 0] = ux[..., 0] * (1.0 - p) + ux[..., 1] * p
        uy[..., 1] = ux[..., 0] * p + ux[..., 1] * (1.0 - p)
        py = uy.sum(axis=2)
        hy = -xlogy(py, py).sum(axis=2)
        huy = -xlogy(uy, uy).sum(axis=(2, 3))
        a_tab[i] = (hu + hy - huy).ravel()
        b_tab[i] = (hu + hx - hux).ravel()
    return qs, a_tab, b_tab


def _upper_envelope_at(xs: Sequence[float], ys: Sequence[float], x0: float) -> float:
    """Value of the upper concave envelope of the points (xs, ys) at x0."""
    pts = sorted(zip(xs, ys))
    hull: list = []
    for x3, y3 in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            cross = (x2 - x1) * (y3 - y1) - (y2 - y1) * (x3 - x1)
            if cross >= 0:
                hull.pop()
            else:
                break
        hull.append((x3, y3))
    for i in range(len(hull) - 1):
        (x1, y1), (x2, y2) = hull[i], hull[i + 1]
        if x1 <= x0 <= x2:
            if x2 == x1:
                return max(y1, y2)
            lam = (x0 - x1) / (x2 - x1)
            return y1 + lam * (y2 - y1)
    return hull[-1][1]


def s_ow_lower_bound(p: float, epsilon: float) -> float:
    """Certified lower bound on the one-way secret-key rate, in bits.

    Searches max I(U;Y|V) - I(U;Z|V) over Markov chains V - U - X with
    binary U and V.  For an erasure observer I(U;Z|V) = (1-eps) I(U;X|V),
    so the inner objective per X-bias q is f(q) = max_{s,t} (A - (1-eps)B)
    from the cached tables, and the outer V-average is the upper concave
    envelope of f evaluated at the true bias 1/2.  Every evaluated point is
    an achievable auxiliary, so the result never overshoots; values below
    the search's noise floor are snapped to exactly 0.
    """
    p = _check_p(p)
    epsilon = _check_eps(epsilon)
    qs, a_tab, b_tab = _oneway_tables(p)
    f = (a_tab - (1.0 - epsilon) * b_tab).max(axis=1)
    value = _upper_envelope_at(qs, f, 0.5)
    value = max(0.0, value) / LN2
    return 0.0 if value < _ZERO_SNAP else value


@dataclass(frozen=True)
class CurvePoint:
    """One epsilon sample of the benchmark curve family (rates in bits)."""

    epsilon: float
    i_xy_given_z: float
    b0_sub: float
    s_ow_lb: float
    r_n: dict

    def __post_init__(self):
        for n, r in self.r_n.items():
            assert r <= self.i_xy_given_z + 1e-9, (n, r, self.i_xy_given_z)


def emit_curves(
    p: float, eps_grid: Sequence[float], n_max: int = 6
) -> list[CurvePoint]:
    """Evaluate all benchmark curves on an epsilon grid, sorted ascending.

    i_xy_given_z is eps * I(X;Y): conditioning on the observer splits the
    world into a revealed part (no residual information) and an erased
    part of mass eps carrying the full I(X;Y).
    """
    p = _check_p(p)
    n_max = int(n_max)
    if n_max < 2:
        raise OutOfRangeError(f"n_max must be >= 2, got {n_max}")
    grid = sorted(_check_eps(e) for e in eps_grid)
    i_xy_bits = mutual_information(dsbe_pmf(p)) / LN2
    points = []
    for eps in grid:
        points.append(
            CurvePoint(
                epsilon=eps,
                i_xy_given_z=eps * i_xy_bits,
                b0_sub=b0_sub(p, eps),
                s_ow_lb=s_ow_lower_bound(p, eps),
                r_n={n: repetition_rate(p, eps, n) for n in range(2, n_max + 1)},
            )
        )
    return points


def curves_to_csv(points: Sequence[CurvePoint], n_max: int = 6) -> str:
    """Render curve points as CSV text with 9-significant-digit fields."""
    header = "epsilon,i_xy_given_z,b0_sub,s_ow," + ",".join(
        f"r_{n}" for n in range(2, int(n_max) + 1)
    )
    lines = [header]
    for pt in points:
        cells = [pt.epsilon, pt.i_xy_given_z, pt.b0_sub, pt.s_ow_lb]
        cells += [pt.r_n[n] for n in range(2, int(n_max) + 1)]
        lines.append(",".join("%.9g" % c for c in cells))
    return "\n".join(lines) + "\n"
