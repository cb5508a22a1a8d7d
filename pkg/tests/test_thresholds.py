"""Path values, the two epsilon1 computations (enumeration and LP), the
pairwise threshold, rank-one certificates and the full report."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from skagree import (
    AlphabetTooLargeError,
    InvalidPathError,
    Path,
    build_erasure_source,
    epsilon1_lp,
    epsilon1_paths,
    epsilon2,
    epsilon3_certificate,
    epsilon3_lower_bound,
    lbar_zero_threshold,
    oneway_zero_threshold,
    path_value,
    threshold_report,
    validate_channel,
    validate_joint,
    y_given_x,
)
from oracles import brute_force_eps1, brute_force_eps2, random_joint

DSBS04 = validate_joint([[0.3, 0.2], [0.2, 0.3]])

# fixed 3x3 table used as a frozen regression anchor
TABLE3 = np.array(
    [[0.08, 0.13, 0.05], [0.21, 0.03, 0.11], [0.02, 0.17, 0.20]]
)
TABLE3 /= TABLE3.sum()
EPS1_TABLE3 = 0.12964074471043285


# ---------------------------------------------------------------------------
# path values
# ---------------------------------------------------------------------------

def test_path_value_singleton_is_one():
    assert path_value(DSBS04, Path((0,), (0,))) == 1.0
    assert path_value(DSBS04, Path((1,), (1,))) == 1.0


def test_path_value_alternating_cycle():
    # k=2 diagonal loop on the symmetric binary table:
    # (p00 p11 / (p01 p10))**(1/2) inverted to the minimizing orientation
    v = path_value(DSBS04, Path((0, 1), (1, 0)))
    assert v == pytest.approx(2.0 / 3.0, abs=1e-15)
    v_rev = path_value(DSBS04, Path((0, 1), (0, 1)))
    assert v_rev == pytest.approx(1.5, abs=1e-15)


def test_path_value_zero_conventions():
    j = validate_joint([[0.5, 0.0], [0.25, 0.25]])
    # numerator hits the zero cell -> value 0
    assert path_value(j, Path((0, 1), (1, 0))) == 0.0
    # denominator hits the zero cell -> value +inf
    assert path_value(j, Path((0, 1), (0, 1))) == math.inf


def test_path_validation():
    with pytest.raises(InvalidPathError):
        Path((), ())
    with pytest.raises(InvalidPathError):
        Path((0, 0), (0, 1))
    with pytest.raises(InvalidPathError):
        Path((0, 1), (0,))
    with pytest.raises(InvalidPathError):
        path_value(DSBS04, Path((0, 5), (0, 1)))


# ---------------------------------------------------------------------------
# epsilon1: enumeration vs LP vs brute force
# ---------------------------------------------------------------------------

def test_epsilon1_frozen_3x3():
    v, path = epsilon1_paths(validate_joint(TABLE3))
    assert v == pytest.approx(EPS1_TABLE3, abs=1e-12)
    assert path_value(validate_joint(TABLE3), path) == pytest.approx(v, abs=1e-12)
    assert epsilon1_lp(validate_joint(TABLE3)) == pytest.approx(v, abs=1e-9)


def test_epsilon1_symmetric_binary():
    v, path = epsilon1_paths(DSBS04)
    assert v == pytest.approx(2.0 / 3.0, abs=1e-15)
    assert sorted(path.xs) == [0, 1]


def test_epsilon1_product_tables():
    uniform = validate_joint(np.full((2, 2), 0.25))
    v, _ = epsilon1_paths(uniform)
    assert v == 1.0  # identical num/den products carry no float noise
    assert epsilon1_lp(uniform) == 1.0
    prod = validate_joint(np.outer([0.3, 0.7], [0.2, 0.3, 0.5]))
    v, _ = epsilon1_paths(prod)
    assert v == pytest.approx(1.0, abs=1e-12)
    assert epsilon1_lp(prod) == pytest.approx(1.0, abs=1e-12)
    assert epsilon3_lower_bound(prod) == pytest.approx(1.0, abs=1e-12)


def test_epsilon1_zero_cell_gives_zero_with_witness():
    j = validate_joint([[0.5, 0.0], [0.25, 0.25]])
    v, path = epsilon1_paths(j)
    assert v == 0.0
    assert path_value(j, path) == 0.0
    assert epsilon1_lp(j) == 0.0


def test_epsilon1_ignores_dead_rows():
    m = np.array([[0.3, 0.2, 0.0], [0.2, 0.3, 0.0], [0.0, 0.0, 0.0]])
    v, _ = epsilon1_paths(validate_joint(m))
    assert v == pytest.approx(2.0 / 3.0, abs=1e-12)


def test_epsilon1_paths_guard():
    m = np.full((9, 9), 1 / 81.0)
    with pytest.raises(AlphabetTooLargeError):
        epsilon1_paths(validate_joint(m))
    # the LP route has no such limit
    assert epsilon1_lp(validate_joint(m)) == pytest.approx(1.0)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10_000))
def test_epsilon1_matches_brute_force(seed):
    rng = np.random.default_rng(seed)
    nx, ny = int(rng.integers(2, 5)), int(rng.integers(2, 5))
    zeros = int(rng.integers(0, 3))
    m = random_joint(rng, nx, ny, zeros=zeros)
    j = validate_joint(m)
    v, path = epsilon1_paths(j)
    assert v == pytest.approx(brute_force_eps1(m), abs=1e-12)
    assert v <= 1.0 + 1e-12
    assert abs(v - epsilon1_lp(j)) <= 1e-8


# ---------------------------------------------------------------------------
# epsilon2
# ---------------------------------------------------------------------------

def test_epsilon2_values_and_witness():
    v, pair = epsilon2(DSBS04)
    assert v == pytest.approx(2.0 / 3.0, abs=1e-15)
    x1, x2, y1, y2 = pair
    m = DSBS04.probs
    ratio = m[x1, y1] * m[x2, y2] / (m[x1, y2] * m[x2, y1])
    assert math.sqrt(ratio) == pytest.approx(v, abs=1e-15)
    v3, pair3 = epsilon2(validate_joint(TABLE3))
    assert v3 == pytest.approx(EPS1_TABLE3, abs=1e-12)
    assert pair3 == (1, 2, 1, 0)


def test_epsilon2_degenerate_row():
    v, pair = epsilon2(validate_joint([[0.4, 0.6]]))
    assert v == 1.0 and pair is None


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10_000))
def test_epsilon2_matches_brute_force(seed):
    rng = np.random.default_rng(seed)
    m = random_joint(
        rng, int(rng.integers(2, 6)), int(rng.integers(2, 6)),
        zeros=int(rng.integers(0, 3)),
    )
    v, _ = epsilon2(validate_joint(m))
    assert v == pytest.approx(brute_force_eps2(m), abs=1e-12)
    v1, _ = epsilon1_paths(validate_joint(m))
    assert v1 <= v + 1e-12  # longer paths can only lower the minimum


# ---------------------------------------------------------------------------
# epsilon3 certificates
# ---------------------------------------------------------------------------

def test_epsilon3_certificate_structure():
    cert = epsilon3_certificate(validate_joint(TABLE3))
    assert cert.verify(validate_joint(TABLE3))
    assert cert.value == pytest.approx(epsilon3_lower_bound(validate_joint(TABLE3)))
    assert cert.num_layers == 1 + int((TABLE3 > 0).sum())
    total = sum(layer for layer in cert.layers())
    assert np.max(np.abs(total - 1.0)) <= 1e-9


def test_epsilon3_sandwiched_by_epsilon1():
    rng = np.random.default_rng(99)
    for _ in range(20):
        m = random_joint(rng, int(rng.integers(2, 5)), int(rng.integers(2, 5)))
        j = validate_joint(m)
        e1 = epsilon1_lp(j)
        e3 = epsilon3_lower_bound(j)
        assert e3 >= e1 - 1e-9
        assert e3 <= 1.0 + 1e-12
        assert epsilon3_certificate(j).verify(j)


def test_epsilon3_zero_cell():
    j = validate_joint([[0.5, 0.0], [0.25, 0.25]])
    cert = epsilon3_certificate(j)
    assert cert.value == 0.0
    assert cert.verify(j)


# ---------------------------------------------------------------------------
# channel thresholds and the report
# ---------------------------------------------------------------------------

def test_oneway_threshold_bsc():
    ch = validate_channel([[0.6, 0.4], [0.4, 0.6]], ["0", "1"], ["0", "1"])
    assert oneway_zero_threshold(ch) == pytest.approx(0.96, abs=1e-4)


def test_lbar_threshold_symmetric_binary():
    assert lbar_zero_threshold(DSBS04) == pytest.approx(0.96, abs=1e-4)


@pytest.mark.parametrize(
    "eps,verdict",
    [(0.5, "zero"), (2.0 / 3.0, "zero"), (0.67, "positive"), (1.0, "positive")],
)
def test_report_verdicts_binary(eps, verdict):
    rep = threshold_report(build_erasure_source(DSBS04, eps))
    assert rep.verdict == verdict
    assert rep.epsilon1 == rep.epsilon2  # binary alphabets force equality


def test_report_indeterminate_band():
    # a 3x3 source whose best path is longer than a 4-cycle, leaving a gap
    # between the path minimum and the pairwise minimum
    m = np.array(
        [
            [0.44683076, 0.00049426, 0.00073314],
            [0.11819020, 0.00889125, 0.03271970],
            [0.37102518, 0.02055557, 0.00055994],
        ]
    )
    j = validate_joint(m / m.sum())
    e1, _ = epsilon1_paths(j)
    e2, _ = epsilon2(j)
    assert e1 < e2 - 0.01  # the gap exists for this table
    rep = threshold_report(build_erasure_source(j, (e1 + e2) / 2.0))
    assert rep.verdict == "indeterminate"
    assert rep.epsilon1 == pytest.approx(e1) and rep.epsilon2 == pytest.approx(e2)


def test_report_json_shape():
    rep = threshold_report(build_erasure_source(DSBS04, 0.8))
    doc = rep.to_json_dict()
    assert list(doc) == [
        "epsilon1",
        "epsilon2",
        "epsilon3_lb",
        "oneway_threshold",
        "lbar_threshold",
        "verdict",
        "witness_path",
        "witness_pair",
    ]
    assert doc["witness_path"] == {"xs": [0, 1], "ys": [1, 0]}
    assert doc["verdict"] == "positive"


def test_report_large_alphabet_uses_lp_without_path():
    rng = np.random.default_rng(5)
    m = rng.random((9, 9)) + 0.05
    j = validate_joint(m / m.sum())
    rep = threshold_report(build_erasure_source(j, 0.5))
    assert rep.witness_path is None
    assert rep.epsilon1 == pytest.approx(epsilon1_lp(j), abs=1e-12)
    assert rep.witness_pair is not None


def test_oneway_uses_conditional_channel():
    rep = threshold_report(build_erasure_source(DSBS04, 0.5))
    direct = oneway_zero_threshold(y_given_x(DSBS04))
    assert rep.oneway_threshold == pytest.approx(direct, abs=1e-9)
