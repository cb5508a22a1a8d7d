"""Distribution and channel data model.

Conventions used throughout the package:

* probabilities are plain ``float64`` numpy arrays, logs are natural;
* a joint table ``probs[x, y]`` is indexed row = X symbol, column = Y symbol;
* the eavesdropper of an erasure source sees ``Z`` with alphabet
  ``("e",) + ((x, y) for x in X for y in Y)`` — the erasure symbol first,
  then the revealed pairs in x-major order;
* ``0 * log 0 := 0``, and ratio conventions ``0/0 := 1``, ``c/0 := +inf``
  are applied wherever cross ratios are formed;
* validation renormalizes only when the total is within ``1e-9`` of 1,
  otherwise the input is rejected outright.

All types are frozen; operations are pure functions and thread-safe.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from .errors import (
    AlphabetMismatchError,
    DegenerateWitnessError,
    DimensionMismatchError,
    EpsilonOutOfRangeError,
    InvalidPmfError,
    NegativeEntryError,
    NotErasureSourceError,
    NotNormalizedError,
)

ERASURE_SYMBOL = "e"

_SUM_TOL = 1e-9

Label = Union[str, tuple]


def _frozen(a: np.ndarray) -> np.ndarray:
    out = np.ascontiguousarray(a, dtype=np.float64)
    out.setflags(write=False)
    return out


def _check_labels(labels: Sequence[Label], side: str) -> tuple:
    labels = tuple(labels)
    if not labels:
        raise DimensionMismatchError(f"{side} alphabet is empty")
    if len(set(labels)) != len(labels):
        raise InvalidPmfError(f"{side} alphabet has duplicate labels: {labels!r}")
    return labels


@dataclass(frozen=True, eq=False)
class JointPmf:
    """A joint pmf over two finite alphabets. Construct via :func:`validate_joint`."""

    x_alphabet: tuple
    y_alphabet: tuple
    probs: np.ndarray

    @property
    def shape(self) -> tuple[int, int]:
        return self.probs.shape

    def x_marginal(self) -> np.ndarray:
        return self.probs.sum(axis=1)

    def y_marginal(self) -> np.ndarray:
        return self.probs.sum(axis=0)


@dataclass(frozen=True, eq=False)
class Channel:
    """A row-stochastic matrix ``probs[input, output]``."""

    input_alphabet: tuple
    output_alphabet: tuple
    probs: np.ndarray


@dataclass(frozen=True, eq=False)
class Erasure:
    epsilon: float


@dataclass(frozen=True, eq=False)
class General:
    channel: Channel


@dataclass(frozen=True, eq=False)
class Source:
    """A joint pmf together with the eavesdropper's observation model."""

    joint: JointPmf
    eve: Union[Erasure, General]

    @property
    def is_erasure(self) -> bool:
        return isinstance(self.eve, Erasure)

    def require_erasure(self) -> float:
        """Return epsilon, raising when the eavesdropper is not erasure-type."""
        if not self.is_erasure:
            raise NotErasureSourceError(
                "operation requires an erasure eavesdropper"
            )
        return self.eve.epsilon

    def z_alphabet(self) -> tuple:
        if self.is_erasure:
            pairs = tuple(
                (x, y) for x in self.joint.x_alphabet for y in self.joint.y_alphabet
            )
            return (ERASURE_SYMBOL,) + pairs
        return self.eve.channel.output_alphabet

    def eve_channel(self) -> Channel:
        """The eavesdropper channel p(z | x, y) with (x, y) rows in x-major order."""
        if not self.is_erasure:
            return self.eve.channel
        nx, ny = self.joint.shape
        eps = self.eve.epsilon
        rows = np.zeros((nx * ny, nx * ny + 1))
        rows[:, 0] = eps
        rows[np.arange(nx * ny), 1 + np.arange(nx * ny)] = 1.0 - eps
        pairs = tuple(
            (x, y) for x in self.joint.x_alphabet for y in self.joint.y_alphabet
        )
        return Channel(pairs, (ERASURE_SYMBOL,) + pairs, _frozen(rows))


@dataclass(frozen=True, eq=False)
class PreceqWitness:
    """Nonnegative reweighting functions with q(x,y) = a(x) b(y) p(x,y)."""

    a: np.ndarray
    b: np.ndarray


def validate_joint(
    matrix,
    x_labels: Optional[Sequence[Label]] = None,
    y_labels: Optional[Sequence[Label]] = None,
) -> JointPmf:
    """Validate and normalize a raw joint table into a :class:`JointPmf`.

    The matrix must be rectangular and nonnegative with total mass within
    1e-9 of one (then renormalized exactly).  Labels default to stringified
    indices.
    """
    arr = np.asarray(matrix, dtype=np.float64)
    if arr.ndim != 2:
        raise DimensionMismatchError(f"joint table must be 2-D, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidPmfError("joint table contains non-finite entries")
    if np.any(arr < 0):
        raise NegativeEntryError("joint table contains negative entries")
    total = float(arr.sum())
    if abs(total - 1.0) > _SUM_TOL:
        raise NotNormalizedError(f"joint table sums to {total!r}, expected 1")
    arr = arr / total
    nx, ny = arr.shape
    xs = _check_labels(
        x_labels if x_labels is not None else [str(i) for i in range(nx)], "X"
    )
    ys = _check_labels(
        y_labels if y_labels is not None else [str(i) for i in range(ny)], "Y"
    )
    if len(xs) != nx or len(ys) != ny:
        raise DimensionMismatchError(
            f"alphabet sizes ({len(xs)}, {len(ys)}) do not match table shape {arr.shape}"
        )
    return JointPmf(xs, ys, _frozen(arr))


def validate_channel(
    matrix,
    input_labels: Optional[Sequence[Label]] = None,
    output_labels: Optional[Sequence[Label]] = None,
) -> Channel:
    """Validate a row-stochastic matrix (each row renormalized within 1e-9)."""
    arr = np.asarray(matrix, dtype=np.float64)
    if arr.ndim != 2:
        raise DimensionMismatchError(f"channel must be 2-D, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidPmfError("channel contains non-finite entries")
    if np.any(arr < 0):
        raise NegativeEntryError("channel contains negative entries")
    sums = arr.sum(axis=1)
    if np.any(np.abs(sums - 1.0) > _SUM_TOL):
        bad = int(np.argmax(np.abs(sums - 1.0)))
        raise NotNormalizedError(f"channel row {bad} sums to {float(sums[bad])!r}")
    arr = arr / sums[:, None]
    ni, no = arr.shape
    ins = _check_labels(
        input_labels if input_labels is not None else [str(i) for i in range(ni)],
        "input",
    )
    outs = _check_labels(
        output_labels if output_labels is not None else [str(i) for i in range(no)],
        "output",
    )
    if len(ins) != ni or len(outs) != no:
        raise DimensionMismatchError(
            f"alphabet sizes ({len(ins)}, {len(outs)}) do not match shape {arr.shape}"
        )
    return Channel(ins, outs, _frozen(arr))


def build_erasure_source(joint: JointPmf, epsilon: float) -> Source:
    """Attach an erasure eavesdropper: Z = (X, Y) w.p. 1 - epsilon, else "e"."""
    epsilon = float(epsilon)
    if not (0.0 <= epsilon <= 1.0):
        raise EpsilonOutOfRangeError(f"epsilon must lie in [0, 1], got {epsilon!r}")
    return Source(joint, Erasure(epsilon))


def build_general_source(joint: JointPmf, channel: Channel) -> Source:
    """Attach an explicit eavesdropper channel with input alphabet X x Y (x-major)."""
    pairs = tuple((x, y) for x in joint.x_alphabet for y in joint.y_alphabet)
    if channel.input_alphabet != pairs:
        raise AlphabetMismatchError(
            "eavesdropper channel input alphabet must be the x-major pair alphabet"
        )
    return Source(joint, General(channel))


def source_from_dict(doc: dict) -> Source:
    """Build a Source from the JSON document schema.

    Expected fields: ``x_alphabet``, ``y_alphabet``, ``p_xy`` and ``eve``
    (either ``{"type": "erasure", "epsilon": e}`` or
    ``{"type": "general", "z_alphabet": [...], "p_z_given_xy": [[...]]}``
    with rows ordered x-major).
    """
    try:
        xs = doc["x_alphabet"]
        ys = doc["y_alphabet"]
        table = doc["p_xy"]
        eve = doc["eve"]
        kind = eve["type"]
    except (KeyError, TypeError) as exc:
        raise InvalidPmfError(f"malformed source document: missing {exc}") from exc
    joint = validate_joint(table, xs, ys)
    if kind == "erasure":
        if "epsilon" not in eve:
            raise InvalidPmfError("erasure eve requires an 'epsilon' field")
        return build_erasure_source(joint, eve["epsilon"])
    if kind == "general":
        try:
            z = eve["z_alphabet"]
            rows = eve["p_z_given_xy"]
        except KeyError as exc:
            raise InvalidPmfError(f"general eve requires {exc}") from exc
        pairs = tuple((x, y) for x in joint.x_alphabet for y in joint.y_alphabet)
        channel = validate_channel(rows, pairs, z)
        return build_general_source(joint, channel)
    raise InvalidPmfError(f"unknown eve type {kind!r}")


def load_source(path) -> Source:
    """Load a Source from a JSON file (see :func:`source_from_dict`)."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise InvalidPmfError(f"cannot read input file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InvalidPmfError(f"input is not valid JSON: {exc}") from exc
    return source_from_dict(doc)


def restrict_support(p: JointPmf) -> tuple[JointPmf, np.ndarray, np.ndarray]:
    """Drop zero-marginal rows and columns.

    Returns the restricted pmf plus the original row/column indices kept, so
    witnesses computed on the restriction can be mapped back.
    """
    rows = np.flatnonzero(p.x_marginal() > 0.0)
    cols = np.flatnonzero(p.y_marginal() > 0.0)
    sub = p.probs[np.ix_(rows, cols)]
    q = JointPmf(
        tuple(p.x_alphabet[i] for i in rows),
        tuple(p.y_alphabet[j] for j in cols),
        _frozen(sub),
    )
    return q, rows, cols


def y_given_x(p: JointPmf) -> Channel:
    """The conditional channel p(y|x); zero-marginal rows become uniform."""
    px = p.x_marginal()
    rows = np.where(
        px[:, None] > 0.0,
        p.probs / np.where(px[:, None] > 0.0, px[:, None], 1.0),
        1.0 / p.shape[1],
    )
    return Channel(p.x_alphabet, p.y_alphabet, _frozen(rows))


def preceq_check(q: JointPmf, p: JointPmf) -> Optional[PreceqWitness]:
    """Decide whether q(x,y) = a(x) b(y) p(x,y) for some nonnegative a, b.

    The log ratio log(q/p) must decompose additively over the bipartite
    support graph of q; the decomposition is found by BFS with one anchor
    per connected component and confirmed by elementwise reconstruction to
    1e-10.  Returns the witness, or None when the relation fails.
    """
    if q.x_alphabet != p.x_alphabet or q.y_alphabet != p.y_alphabet:
        raise AlphabetMismatchError("q and p must share both alphabets")
    nx, ny = p.shape
    qm, pm = q.probs, p.probs
    if np.any((qm > 0.0) & (pm == 0.0)):
        return None
    alpha = np.zeros(nx)
    beta = np.zeros(ny)
    seen_x = np.zeros(nx, dtype=bool)
    seen_y = np.zeros(ny, dtype=bool)
    qpos = qm > 0.0
    with np.errstate(divide="ignore", invalid="ignore"):
        logratio = np.where(qpos, np.log(qm) - np.log(np.where(qpos, pm, 1.0)), 0.0)
    for x0 in range(nx):
        if seen_x[x0] or not qpos[x0].any():
            continue
        seen_x[x0] = True
        alpha[x0] = 0.0
        queue = deque([("x", x0)])
        while queue:
            side, i = queue.popleft()
            if side == "x":
                for j in np.flatnonzero(qpos[i]):
                    if not seen_y[j]:
                        seen_y[j] = True
                        beta[j] = logratio[i, j] - alpha[i]
                        queue.append(("y", j))
            else:
                for x in np.flatnonzero(qpos[:, i]):
                    if not seen_x[x]:
                        seen_x[x] = True
                        alpha[x] = logratio[x, i] - beta[i]
                        queue.append(("x", x))
    a = np.where(seen_x, np.exp(alpha), 0.0)
    b = np.where(seen_y, np.exp(beta), 0.0)
    if np.max(np.abs(a[:, None] * b[None, :] * pm - qm)) > 1e-10:
        return None
    return PreceqWitness(_frozen(a), _frozen(b))


def preceq_simulation_channels(
    source: Source, witness: PreceqWitness
) -> tuple[Channel, Channel, float]:
    """Local acceptance channels realizing the reweighted source.

    Alice keeps her symbol with probability a(x)/max(a), Bob with
    b(y)/max(b); conditioned on both keeping (output "0"), the law of
    (X, Y, Z) is the reweighted joint times the unchanged eavesdropper
    channel.  Returns (X channel, Y channel, overall acceptance probability
    1/(max(a) max(b))).
    """
    a = np.asarray(witness.a, dtype=np.float64)
    b = np.asarray(witness.b, dtype=np.float64)
    nx, ny = source.joint.shape
    if a.shape != (nx,) or b.shape != (ny,):
        raise DimensionMismatchError("witness length does not match the source")
    abar = float(a.max()) if a.size else 0.0
    bbar = float(b.max()) if b.size else 0.0
    if abar <= 0.0 or bbar <= 0.0:
        raise DegenerateWitnessError("witness has an identically zero side")
    accept_x = a / abar
    accept_y = b / bbar
    cx = Channel(
        source.joint.x_alphabet,
        ("0", "1"),
        _frozen(np.column_stack([accept_x, 1.0 - accept_x])),
    )
    cy = Channel(
        source.joint.y_alphabet,
        ("0", "1"),
        _frozen(np.column_stack([accept_y, 1.0 - accept_y])),
    )
    return cx, cy, 1.0 / (abar * bbar)
