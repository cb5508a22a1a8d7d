"""Feasibility tests for positive secret-key rate and the swap-block
advantage-distillation construction, exact and simulated.

The single-letter test compares, over ordered symbol tuples, the Chernoff
information between the eavesdropper's two conditional laws against half
the log cross ratio of the four joint cells.  A strict inequality at any
tuple certifies a positive rate.  The block variant applies the same
comparison to pairs of disjoint string sets.

The swap construction uses the two complementary half-constant strings per
party.  For an erasure eavesdropper whose four revealed pairs are distinct
symbols, a single unerased coordinate identifies the accepted pattern, so
the block-posterior entropy collapses to the closed form
eps**n * (ln 2 + h(tilde_p)) used by :func:`swap_advantage_lb`; the
brute-force equivalence is enforced in tests rather than assumed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import _kernels
from .errors import (
    DimensionMismatchError,
    EmptySetError,
    EnumerationTooLargeError,
    OutOfRangeError,
    PairsCollideError,
    SetsNotDisjointError,
)
from .info import LN2, binary_entropy, chernoff_information
from .pmf import Source

#: Dependence threshold below which no eavesdropper-free reduction is known
#: to exist: sources whose dependence measure stays under (3 - sqrt(5)) / 8
#: ~= 0.0955 admit a positive-rate reduction argument.  The constant is not
#: claimed optimal; no procedure computes the underlying measure here.
WEAK_DEPENDENCE_THRESHOLD = (3.0 - math.sqrt(5.0)) / 8.0

_ENUM_LIMIT = 10_000_000
_MC_CHUNK = 1 << 17


@dataclass(frozen=True)
class FeasibilityVerdict:
    """Outcome of a feasibility test.

    ``positive`` means a strict witness was found; ``witness`` is then the
    tuple (x1, x2, y1, y2) for the single-letter test or
    (A1, A2, B1, B2, n) for the set test.  On a negative verdict the
    reported sides belong to the tuple with the smallest lhs - rhs gap.
    """

    positive: bool
    witness: Optional[tuple]
    lhs_chernoff: float
    rhs_half_log_ratio: float


def _log_ratio(num: float, den: float) -> float:
    """log(num/den) with 0/0 := 1 and c/0 := +inf."""
    if num == 0.0 and den == 0.0:
        return 0.0
    if num == 0.0:
        return -math.inf
    if den == 0.0:
        return math.inf
    return math.log(num) - math.log(den)


def pair_feasibility_test(source: Source) -> FeasibilityVerdict:
    """Scan ordered symbol tuples for a strict single-letter witness.

    Tuples (x1, x2, y1, y2) with x1 != x2, y1 != y2 are visited in
    lexicographic order and the first strict witness wins.  For an erasure
    eavesdropper the left side is -log(epsilon) for every tuple (the two
    conditional laws share only the erasure atom), so the verdict is
    positive exactly when epsilon exceeds the minimum cross-ratio threshold.
    A negative verdict is not a converse in general, but is tight for
    erasure sources with a binary alphabet on either side.
    """
    m = source.joint.probs
    nx, ny = m.shape
    erasure = source.is_erasure
    if erasure:
        eps = source.eve.epsilon
        lhs_const = math.inf if eps == 0.0 else -math.log(eps) + 0.0
    else:
        rows = source.eve.channel.probs
        cache: dict = {}
    best_gap = math.inf
    best_lhs = math.inf
    best_rhs = -math.inf
    for x1 in range(nx):
        for x2 in range(nx):
            if x2 == x1:
                continue
            for y1 in range(ny):
                for y2 in range(ny):
                    if y2 == y1:
                        continue
                    rhs = 0.5 * _log_ratio(
                        float(m[x1, y1] * m[x2, y2]), float(m[x1, y2] * m[x2, y1])
                    )
                    if erasure:
                        lhs = lhs_const
                    else:
                        key = (x1 * ny + y1, x2 * ny + y2)
                        key = (min(key), max(key))
                        if key not in cache:
                            cache[key] = chernoff_information(
                                rows[key[0]], rows[key[1]]
                            ).value
                        lhs = cache[key]
                    if lhs < rhs:
                        return FeasibilityVerdict(
                            True, (x1, x2, y1, y2), lhs, rhs
                        )
                    if lhs == math.inf or rhs == -math.inf:
                        gap = math.inf
                    else:
                        gap = lhs - rhs
                    if gap < best_gap:
                        best_gap, best_lhs, best_rhs = gap, lhs, rhs
    return FeasibilityVerdict(False, None, best_lhs, best_rhs)


def _canonical_string_set(raw, n: int, limit: int, side: str) -> tuple:
    out = []
    for s in raw:
        t = tuple(int(v) for v in s)
        if len(t) != n:
            raise DimensionMismatchError(
                f"{side} member {t!r} has length {len(t)}, expected n={n}"
            )
        if any(not 0 <= v < limit for v in t):
            raise OutOfRangeError(f"{side} member {t!r} has an out-of-range symbol")
        out.append(t)
    if not out:
        raise EmptySetError(f"{side} set is empty")
    if len(set(out)) != len(out):
        raise SetsNotDisjointError(f"{side} set has duplicate members")
    return tuple(out)


def _block_prob(m: np.ndarray, a_set, b_set) -> float:
    total = 0.0
    for xs in a_set:
        for ys in b_set:
            prob = 1.0
            for x, y in zip(xs, ys):
                prob *= m[x, y]
            total += prob
    return float(total)


def _erasure_block_conditional(m, a_set, b_set, eps, n, norm):
    """Reveal-pattern sufficient statistic of Z^n given (X^n, Y^n) in A x B.

    Atoms are keyed by (erasure mask, revealed cell codes); content at
    erased coordinates is dropped, which loses nothing because erasures are
    content-free.
    """
    ny = m.shape[1]
    pw = [(eps ** (n - k)) * ((1.0 - eps) ** k) for k in range(n + 1)]
    atoms: dict = {}
    for xs in a_set:
        for ys in b_set:
            prob = 1.0
            for x, y in zip(xs, ys):
                prob *= m[x, y]
            if prob == 0.0:
                continue
            w = prob / norm
            codes = tuple(x * ny + y for x, y in zip(xs, ys))
            for mask in range(1 << n):
                k = mask.bit_count()
                revealed = tuple(
                    codes[t] for t in range(n) if mask >> t & 1
                )
                key = (mask, revealed)
                atoms[key] = atoms.get(key, 0.0) + w * pw[k]
    return atoms


def _general_block_conditional(rows, m, ny, a_set, b_set, norm):
    nz = rows.shape[1]
    n = len(a_set[0])
    out = np.zeros(nz**n)
    for xs in a_set:
        for ys in b_set:
            prob = 1.0
            for x, y in zip(xs, ys):
                prob *= m[x, y]
            if prob == 0.0:
                continue
            vec = np.ones(1)
            for x, y in zip(xs, ys):
                vec = np.kron(vec, rows[x * ny + y])
            out += (prob / norm) * vec
    return out


def set_feasibility_test(
    source: Source,
    a1: Sequence,
    a2: Sequence,
    b1: Sequence,
    b2: Sequence,
    n: int,
) -> FeasibilityVerdict:
    """Block-level feasibility test over disjoint string sets.

    Compares the Chernoff information between Z^n conditioned on
    (X^n in A1, Y^n in B1) versus (A2, B2) against half the log ratio of
    the four block probabilities.  With singleton length-1 sets this is
    exactly the single-letter test.  Erasure eavesdroppers are enumerated
    through the reveal-pattern statistic (masks x revealed content);
    general eavesdroppers require |Z|^n state enumeration, guarded at 1e7.
    """
    n = int(n)
    if n < 1:
        raise OutOfRangeError(f"block length must be >= 1, got {n}")
    m = source.joint.probs
    nx, ny = m.shape
    a1 = _canonical_string_set(a1, n, nx, "A1")
    a2 = _canonical_string_set(a2, n, nx, "A2")
    b1 = _canonical_string_set(b1, n, ny, "B1")
    b2 = _canonical_string_set(b2, n, ny, "B2")
    if set(a1) & set(a2):
        raise SetsNotDisjointError("A1 and A2 overlap")
    if set(b1) & set(b2):
        raise SetsNotDisjointError("B1 and B2 overlap")
    p11 = _block_prob(m, a1, b1)
    p12 = _block_prob(m, a1, b2)
    p21 = _block_prob(m, a2, b1)
    p22 = _block_prob(m, a2, b2)
    rhs = 0.5 * _log_ratio(p11 * p22, p12 * p21)
    if p11 == 0.0 or p22 == 0.0:
        # cannot condition on an impossible block event
        raise OutOfRangeError("a conditioning block event has probability zero")
    if source.is_erasure:
        eps = source.eve.epsilon
        work = (len(a1) * len(b1) + len(a2) * len(b2)) * (1 << n)
        if work > _ENUM_LIMIT:
            raise EnumerationTooLargeError(
                f"reveal-pattern enumeration needs {work} atoms (limit {_ENUM_LIMIT})"
            )
        q1 = _erasure_block_conditional(m, a1, b1, eps, n, p11)
        q2 = _erasure_block_conditional(m, a2, b2, eps, n, p22)
        keys = sorted(set(q1) | set(q2))
        v1 = np.array([q1.get(k, 0.0) for k in keys])
        v2 = np.array([q2.get(k, 0.0) for k in keys])
        lhs = chernoff_information(v1, v2).value
    else:
        rows = source.eve.channel.probs
        nz = rows.shape[1]
        work = (nz**n) * max(len(a1) * len(b1), len(a2) * len(b2))
        if work > _ENUM_LIMIT:
            raise EnumerationTooLargeError(
                f"general-eavesdropper enumeration needs {work} states "
                f"(limit {_ENUM_LIMIT})"
            )
        v1 = _general_block_conditional(rows, m, ny, a1, b1, p11)
        v2 = _general_block_conditional(rows, m, ny, a2, b2, p22)
        lhs = chernoff_information(v1, v2).value
    positive = lhs < rhs
    witness = (a1, a2, b1, b2, n) if positive else None
    return FeasibilityVerdict(positive, witness, lhs, rhs)


# ---------------------------------------------------------------------------
# swap construction
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SwapInstance:
    """An erasure source, a four-cell pair selection, and an even block length.

    The two strings per party are half x1 then half x2 and the swapped
    complement, so the four possible accepted (X^n, Y^n) patterns run
    through exactly the four cells (x_i, y_j).
    """

    source: Source
    x1: int
    y1: int
    x2: int
    y2: int
    n: int

    def __post_init__(self):
        self.source.require_erasure()
        nx, ny = self.source.joint.shape
        for v, lim, side in (
            (self.x1, nx, "x1"),
            (self.x2, nx, "x2"),
            (self.y1, ny, "y1"),
            (self.y2, ny, "y2"),
        ):
            if not 0 <= v < lim:
                raise OutOfRangeError(f"{side}={v} out of range")
        if self.x1 == self.x2 or self.y1 == self.y2:
            raise PairsCollideError(
                "the four revealed pairs must be distinct symbols "
                "(need x1 != x2 and y1 != y2)"
            )
        if self.n < 2 or self.n % 2:
            raise OutOfRangeError(f"block length must be even and >= 2, got {self.n}")

    @property
    def pair(self) -> tuple:
        return (self.x1, self.y1, self.x2, self.y2)

    def cells(self) -> tuple[float, float, float, float]:
        """(p11, p22, p12, p21) joint probabilities of the four cells."""
        m = self.source.joint.probs
        return (
            float(m[self.x1, self.y1]),
            float(m[self.x2, self.y2]),
            float(m[self.x1, self.y2]),
            float(m[self.x2, self.y1]),
        )


def tilde_p(instance: SwapInstance) -> float:
    """Conditional probability of the agreeing patterns given acceptance.

    Computed in log space as 1 / (1 + exp(lo - ld)) where ld and lo are the
    half-block log masses of the diagonal and off-diagonal patterns.
    """
    p11, p22, p12, p21 = instance.cells()
    half = instance.n / 2.0
    diag_zero = p11 == 0.0 or p22 == 0.0
    off_zero = p12 == 0.0 or p21 == 0.0
    if diag_zero and off_zero:
        raise OutOfRangeError("every accepted pattern has probability zero")
    if diag_zero:
        return 0.0
    if off_zero:
        return 1.0
    ld = half * (math.log(p11) + math.log(p22))
    lo = half * (math.log(p12) + math.log(p21))
    return 1.0 / (1.0 + math.exp(lo - ld))


def swap_advantage_lb(instance: SwapInstance) -> float:
    """Exact entropic advantage of the accepted swap blocks, in nats.

    Equals eps**n * (ln 2 + h(tilde_p)) - 2 h(tilde_p): the first term is
    the eavesdropper's residual block entropy (only an all-erased block
    leaves both the pattern pair and the agreement bit unknown), the second
    is what the parties themselves still miss about each other.  Positive
    values certify a strictly positive key rate at this block length.
    """
    eps = instance.source.require_erasure()
    pt = tilde_p(instance)
    h = binary_entropy(pt)
    return (eps**instance.n) * (LN2 + h) - 2.0 * h


def exact_acceptance_rate(instance: SwapInstance) -> float:
    """Probability that both parties declare membership."""
    p11, p22, p12, p21 = instance.cells()
    half = instance.n // 2
    return 2.0 * ((p11 * p22) ** half + (p12 * p21) ** half)


def exact_eve_error(instance: SwapInstance) -> float:
    """Bayes error of the eavesdropper's pattern guess given a diagonal block.

    The two diagonal hypotheses are equiprobable and distinguishable from
    any unerased coordinate, so the error is half the all-erased
    probability, eps**n / 2 (ties counted as half).
    """
    eps = instance.source.require_erasure()
    return 0.5 * eps**instance.n


@dataclass(frozen=True)
class McStatistics:
    """Counts and rates from a Monte-Carlo run of the swap protocol."""

    blocks: int
    accepted: int
    diagonal: int
    eve_errors: int
    acceptance_rate: float
    empirical_tilde_p: float
    empirical_eve_error: float


def monte_carlo_protocol(
    instance: SwapInstance, blocks: int, seed: int
) -> McStatistics:
    """Simulate the swap protocol over i.i.d. blocks, deterministically.

    Blocks are processed in fixed-size chunks; chunk c draws its random
    stream from the seed pair (seed, c), so results are byte-identical for
    a given seed regardless of backend, and chunks could be distributed
    without changing any count.  Per block, each coordinate samples a joint
    cell by inverse transform and an erasure flag; acceptance, pattern and
    eavesdropper-error counting happens in the active kernel backend.
    Rates conditioned on empty events are reported as 0.
    """
    blocks = int(blocks)
    if blocks < 1:
        raise OutOfRangeError(f"need at least one block, got {blocks}")
    seed = int(seed)
    if seed < 0:
        raise OutOfRangeError("seed must be a nonnegative integer")
    eps = instance.source.require_erasure()
    m = instance.source.joint.probs
    ny = m.shape[1]
    n = instance.n
    cdf = np.cumsum(m.ravel())
    cdf[-1] = 1.0
    c11 = instance.x1 * ny + instance.y1
    c22 = instance.x2 * ny + instance.y2
    c12 = instance.x1 * ny + instance.y2
    c21 = instance.x2 * ny + instance.y1
    accepted = diagonal = errors = 0
    nchunks = (blocks + _MC_CHUNK - 1) // _MC_CHUNK
    for ci in range(nchunks):
        size = min(_MC_CHUNK, blocks - ci * _MC_CHUNK)
        rng = np.random.default_rng([seed, ci])
        u_cells = rng.random((size, n))
        u_erase = rng.random((size, n))
        cells = np.searchsorted(cdf, u_cells, side="right")
        erased = u_erase < eps
        a, d, e = _kernels.mc_count(cells, erased, n // 2, c11, c22, c12, c21)
        accepted += a
        diagonal += d
        errors += e
    return McStatistics(
        blocks=blocks,
        accepted=accepted,
        diagonal=diagonal,
        eve_errors=errors,
        acceptance_rate=accepted / blocks,
        empirical_tilde_p=diagonal / accepted if accepted else 0.0,
        empirical_eve_error=errors / diagonal if diagonal else 0.0,
    )
