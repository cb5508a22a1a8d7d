"""Single-letter and block feasibility tests, the swap construction and
its Monte-Carlo simulator."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from skagree import (
    LN2,
    DimensionMismatchError,
    EmptySetError,
    EnumerationTooLargeError,
    NotErasureSourceError,
    OutOfRangeError,
    PairsCollideError,
    SetsNotDisjointError,
    SwapInstance,
    WEAK_DEPENDENCE_THRESHOLD,
    binary_entropy,
    build_erasure_source,
    build_general_source,
    dsbe_source,
    exact_acceptance_rate,
    exact_eve_error,
    monte_carlo_protocol,
    pair_feasibility_test,
    set_feasibility_test,
    swap_advantage_lb,
    tilde_p,
    validate_joint,
)
from oracles import swap_brute_force


def _erasure_as_general(joint, eps):
    """Materialize an erasure observer as an explicit channel."""
    src = build_erasure_source(joint, eps)
    return build_general_source(joint, src.eve_channel())


# ---------------------------------------------------------------------------
# single-letter test
# ---------------------------------------------------------------------------

def test_pair_test_positive_above_threshold():
    v = pair_feasibility_test(dsbe_source(0.4, 0.8))
    assert v.positive
    assert v.lhs_chernoff == pytest.approx(-math.log(0.8), abs=1e-12)
    assert v.rhs_half_log_ratio == pytest.approx(math.log(1.5), abs=1e-12)
    x1, x2, y1, y2 = v.witness
    assert x1 != x2 and y1 != y2


def test_pair_test_negative_below_threshold():
    v = pair_feasibility_test(dsbe_source(0.4, 0.5))
    assert not v.positive and v.witness is None
    # the reported sides belong to the smallest-gap tuple
    assert v.lhs_chernoff == pytest.approx(-math.log(0.5), abs=1e-12)
    assert v.rhs_half_log_ratio == pytest.approx(math.log(1.5), abs=1e-12)


def test_pair_test_extreme_epsilons():
    v1 = pair_feasibility_test(dsbe_source(0.4, 1.0))
    assert v1.positive and v1.lhs_chernoff == 0.0
    v0 = pair_feasibility_test(dsbe_source(0.4, 0.0))
    assert not v0.positive and v0.lhs_chernoff == math.inf


def test_pair_test_no_tuples():
    src = build_erasure_source(validate_joint([[0.4, 0.6]]), 0.9)
    v = pair_feasibility_test(src)
    assert (v.positive, v.witness) == (False, None)
    assert v.lhs_chernoff == math.inf and v.rhs_half_log_ratio == -math.inf


def test_pair_test_general_eve_matches_erasure_closed_form():
    joint = validate_joint([[0.3, 0.2], [0.2, 0.3]])
    for eps in (0.5, 0.8):
        g = pair_feasibility_test(_erasure_as_general(joint, eps))
        e = pair_feasibility_test(build_erasure_source(joint, eps))
        assert g.positive == e.positive
        assert g.lhs_chernoff == pytest.approx(e.lhs_chernoff, abs=1e-9)
        assert g.rhs_half_log_ratio == pytest.approx(e.rhs_half_log_ratio, abs=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_pair_test_strictness_invariant(seed):
    """positive implies a strict inequality between the reported sides."""
    rng = np.random.default_rng(seed)
    nx, ny = int(rng.integers(2, 4)), int(rng.integers(2, 4))
    m = rng.random((nx, ny)) + 0.01
    src = build_erasure_source(validate_joint(m / m.sum()), float(rng.random()))
    v = pair_feasibility_test(src)
    if v.positive:
        assert v.lhs_chernoff < v.rhs_half_log_ratio


# ---------------------------------------------------------------------------
# set test
# ---------------------------------------------------------------------------

def test_set_test_singletons_reduce_to_pair_test():
    rng = np.random.default_rng(21)
    for _ in range(10):
        m = rng.random((3, 3)) + 0.02
        src = build_erasure_source(validate_joint(m / m.sum()), float(rng.random()))
        pv = pair_feasibility_test(src)
        hits = []
        for x1 in range(3):
            for x2 in range(3):
                if x1 == x2:
                    continue
                for y1 in range(3):
                    for y2 in range(3):
                        if y1 == y2:
                            continue
                        sv = set_feasibility_test(
                            src, [[x1]], [[x2]], [[y1]], [[y2]], 1
                        )
                        hits.append(sv.positive)
        assert any(hits) == pv.positive


def test_set_test_swap_sets_block_values():
    src = dsbe_source(0.4, 0.8)
    a1, a2 = [(0, 0, 1, 1)], [(1, 1, 0, 0)]
    b1, b2 = [(0, 0, 1, 1)], [(1, 1, 0, 0)]
    v = set_feasibility_test(src, a1, a2, b1, b2, 4)
    # the two conditional block laws share only the all-erased outcome,
    # so the block Chernoff information is -n ln(eps)
    assert v.lhs_chernoff == pytest.approx(-4.0 * math.log(0.8), abs=1e-9)
    # block probabilities are (p11 p22)^2 and (p12 p21)^2
    assert v.rhs_half_log_ratio == pytest.approx(2.0 * math.log(2.25), abs=1e-12)
    assert v.positive
    assert v.witness == (tuple(a1), tuple(a2), tuple(b1), tuple(b2), 4)


def test_set_test_general_eve_matches_erasure_reduction():
    joint = validate_joint([[0.3, 0.2], [0.2, 0.3]])
    args = ([(0, 0)], [(1, 1)], [(0, 0)], [(1, 1)], 2)
    e = set_feasibility_test(build_erasure_source(joint, 0.7), *args)
    g = set_feasibility_test(_erasure_as_general(joint, 0.7), *args)
    assert g.positive == e.positive
    assert g.lhs_chernoff == pytest.approx(e.lhs_chernoff, abs=1e-9)
    assert g.rhs_half_log_ratio == pytest.approx(e.rhs_half_log_ratio, abs=1e-12)


def test_set_test_validation_errors():
    src = dsbe_source(0.4, 0.8)
    with pytest.raises(EmptySetError):
        set_feasibility_test(src, [], [[1]], [[0]], [[1]], 1)
    with pytest.raises(SetsNotDisjointError):
        set_feasibility_test(src, [[0]], [[0]], [[0]], [[1]], 1)
    with pytest.raises(DimensionMismatchError):
        set_feasibility_test(src, [[0, 0]], [[1]], [[0]], [[1]], 1)
    with pytest.raises(OutOfRangeError):
        set_feasibility_test(src, [[7]], [[1]], [[0]], [[1]], 1)


def test_set_test_enumeration_guard():
    src = dsbe_source(0.4, 0.8)
    n = 24
    with pytest.raises(EnumerationTooLargeError):
        set_feasibility_test(
            src, [(0,) * n], [(1,) * n], [(0,) * n], [(1,) * n], n
        )


def test_set_test_impossible_conditioning_event():
    src = build_erasure_source(validate_joint([[0.5, 0.0], [0.25, 0.25]]), 0.5)
    with pytest.raises(OutOfRangeError):
        set_feasibility_test(src, [[0]], [[1]], [[1]], [[0]], 1)


# ---------------------------------------------------------------------------
# swap construction: exact quantities
# ---------------------------------------------------------------------------

def test_swap_instance_validation():
    src = dsbe_source(0.4, 0.8)
    with pytest.raises(PairsCollideError):
        SwapInstance(source=src, x1=0, y1=0, x2=0, y2=1, n=2)
    with pytest.raises(OutOfRangeError):
        SwapInstance(source=src, x1=0, y1=0, x2=1, y2=1, n=3)
    with pytest.raises(OutOfRangeError):
        SwapInstance(source=src, x1=0, y1=0, x2=1, y2=1, n=0)
    with pytest.raises(OutOfRangeError):
        SwapInstance(source=src, x1=0, y1=0, x2=5, y2=1, n=2)
    joint = validate_joint([[0.3, 0.2], [0.2, 0.3]])
    general = _erasure_as_general(joint, 0.8)
    with pytest.raises(NotErasureSourceError):
        SwapInstance(source=general, x1=0, y1=0, x2=1, y2=1, n=2)


def test_tilde_p_values():
    src = dsbe_source(0.4, 0.8)
    inst2 = SwapInstance(source=src, x1=0, y1=0, x2=1, y2=1, n=2)
    assert tilde_p(inst2) == pytest.approx(0.09 / 0.13, abs=1e-12)
    inst4 = SwapInstance(source=src, x1=0, y1=0, x2=1, y2=1, n=4)
    assert tilde_p(inst4) == pytest.approx(0.0081 / (0.0081 + 0.0016), abs=1e-12)
    assert tilde_p(inst4) > tilde_p(inst2)  # drifts to 1 with n
    # balanced cross ratio pins tilde_p at 1/2 for every n
    uni = build_erasure_source(validate_joint(np.full((2, 2), 0.25)), 0.5)
    for n in (2, 4, 6):
        inst = SwapInstance(source=uni, x1=0, y1=0, x2=1, y2=1, n=n)
        assert tilde_p(inst) == pytest.approx(0.5, abs=1e-15)


def test_tilde_p_zero_cells():
    j = validate_joint([[0.5, 0.0], [0.25, 0.25]])
    src = build_erasure_source(j, 0.5)
    inst = SwapInstance(source=src, x1=0, y1=0, x2=1, y2=1, n=2)
    assert tilde_p(inst) == 1.0  # off-diagonal pattern impossible
    crossed = build_erasure_source(validate_joint([[0.0, 0.5], [0.5, 0.0]]), 0.5)
    flipped = SwapInstance(source=crossed, x1=0, y1=0, x2=1, y2=1, n=2)
    assert tilde_p(flipped) == 0.0  # diagonal pattern impossible
    # a dead column kills both pattern products: the instance never accepts
    dead = build_erasure_source(validate_joint([[0.4, 0.0], [0.6, 0.0]]), 0.5)
    bad = SwapInstance(source=dead, x1=0, y1=0, x2=1, y2=1, n=2)
    with pytest.raises(OutOfRangeError):
        tilde_p(bad)


def test_swap_advantage_extreme_epsilons():
    joint = validate_joint([[0.3, 0.2], [0.2, 0.3]])
    blind = SwapInstance(
        source=build_erasure_source(joint, 1.0), x1=0, y1=0, x2=1, y2=1, n=4
    )
    pt = tilde_p(blind)
    assert swap_advantage_lb(blind) == pytest.approx(
        LN2 - binary_entropy(pt), abs=1e-12
    )
    assert swap_advantage_lb(blind) > 0.0
    exposed = SwapInstance(
        source=build_erasure_source(joint, 0.0), x1=0, y1=0, x2=1, y2=1, n=4
    )
    assert swap_advantage_lb(exposed) == pytest.approx(
        -2.0 * binary_entropy(tilde_p(exposed)), abs=1e-12
    )
    assert swap_advantage_lb(exposed) <= 0.0


def test_swap_advantage_matches_brute_force_small_n():
    rng = np.random.default_rng(3)
    for _ in range(8):
        nx, ny = int(rng.integers(2, 4)), int(rng.integers(2, 4))
        m = rng.random((nx, ny)) + 0.05
        m /= m.sum()
        eps = 0.1 + 0.8 * float(rng.random())
        src = build_erasure_source(validate_joint(m), eps)
        x2 = int(rng.integers(1, nx))
        y2 = int(rng.integers(1, ny))
        for n in (2, 4):
            inst = SwapInstance(source=src, x1=0, y1=0, x2=x2, y2=y2, n=n)
            lib = swap_advantage_lb(inst)
            ora = swap_brute_force(m, eps, 0, 0, x2, y2, n)
            assert lib == pytest.approx(ora, abs=1e-9)


def test_swap_advantage_becomes_positive_for_large_n():
    src = dsbe_source(0.4, 0.8)
    vals = [
        swap_advantage_lb(SwapInstance(source=src, x1=0, y1=0, x2=1, y2=1, n=n))
        for n in range(2, 201, 2)
    ]
    assert any(v > 0 for v in vals)


def test_exact_rates():
    src = dsbe_source(0.4, 0.8)
    inst = SwapInstance(source=src, x1=0, y1=0, x2=1, y2=1, n=4)
    assert exact_acceptance_rate(inst) == pytest.approx(
        2 * (0.09**2 + 0.04**2), abs=1e-15
    )
    assert exact_eve_error(inst) == pytest.approx(0.5 * 0.8**4, abs=1e-15)


def test_weak_dependence_constant():
    assert WEAK_DEPENDENCE_THRESHOLD == pytest.approx((3 - math.sqrt(5)) / 8)
    assert 0.095 < WEAK_DEPENDENCE_THRESHOLD < 0.096


# ---------------------------------------------------------------------------
# Monte Carlo
# ---------------------------------------------------------------------------

def test_monte_carlo_deterministic_and_calibrated():
    src = dsbe_source(0.4, 0.8)
    inst = SwapInstance(source=src, x1=0, y1=0, x2=1, y2=1, n=4)
    blocks = 300_000  # spans multiple internal chunks
    a = monte_carlo_protocol(inst, blocks, seed=7)
    b = monte_carlo_protocol(inst, blocks, seed=7)
    assert a == b
    c = monte_carlo_protocol(inst, blocks, seed=8)
    assert (a.accepted, a.diagonal) != (c.accepted, c.diagonal)
    ar = exact_acceptance_rate(inst)
    sd = math.sqrt(ar * (1 - ar) / blocks)
    assert abs(a.acceptance_rate - ar) <= 4 * sd
    tp = tilde_p(inst)
    sd_tp = math.sqrt(tp * (1 - tp) / a.accepted)
    assert abs(a.empirical_tilde_p - tp) <= 4 * sd_tp


def test_monte_carlo_eve_error_rate():
    src = dsbe_source(0.4, 0.9)
    inst = SwapInstance(source=src, x1=0, y1=0, x2=1, y2=1, n=2)
    stats = monte_carlo_protocol(inst, 400_000, seed=11)
    # Eve errs only on all-erased diagonal blocks: rate eps**n / 2 of the
    # diagonal count, within binomial noise
    rate = 0.5 * 0.9**2
    sd = math.sqrt(rate * (1 - rate) / stats.diagonal)
    assert abs(stats.empirical_eve_error - rate) <= 4 * sd


def test_monte_carlo_validation():
    src = dsbe_source(0.4, 0.8)
    inst = SwapInstance(source=src, x1=0, y1=0, x2=1, y2=1, n=2)
    with pytest.raises(OutOfRangeError):
        monte_carlo_protocol(inst, 0, seed=1)
    with pytest.raises(OutOfRangeError):
        monte_carlo_protocol(inst, 100, seed=-3)
