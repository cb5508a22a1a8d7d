"""Command-line surface: thresholds, feasibility, dsbe, simulate, measure.

Reports are JSON with fixed key order and 9-significant-digit floats
(curve emission is CSV); identical invocations produce byte-identical
output.  Exit codes: 0 success, 2 validation / argument errors, 3
computational guards (enumeration or alphabet too large).
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from typing import Optional

import numpy as np

from . import _backend
from .correlation import doeblin_coefficient, eta, j_infinity, maximal_correlation
from .dsbe import curves_to_csv, emit_curves
from .errors import (
    AlphabetMismatchError,
    GuardError,
    OutOfRangeError,
    ValidationError,
)
from .feasibility import (
    SwapInstance,
    exact_acceptance_rate,
    exact_eve_error,
    monte_carlo_protocol,
    pair_feasibility_test,
    tilde_p,
)
from .info import (
    LN2,
    conditional_mutual_information,
    mutual_information,
)
from .pmf import load_source, y_given_x
from .thresholds import threshold_report


def _fmt_float(x: float) -> str:
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    if math.isnan(x):
        return "NaN"
    return "%.9g" % x


def _to_json(value, indent: int = 0) -> str:
    """Minimal JSON writer: insertion-ordered dicts, %.9g floats, bare
    Infinity tokens (like Python's own json module emits for infinities)."""
    pad = " " * indent
    inner = " " * (indent + 2)
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [
            f'{inner}"{k}": {_to_json(v, indent + 2)}' for k, v in value.items()
        ]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(value, (list, tuple)):
        if not value:
            return "[]"
        items = [f"{inner}{_to_json(v, indent + 2)}" for v in value]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return "null"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return _fmt_float(float(value))
    return '"' + str(value).replace("\\", "\\\\").replace('"', '\\"') + '"'


def _emit(text: str, out_path: Optional[str]) -> None:
    if out_path:
        try:
            with open(out_path, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            raise ValidationError(f"cannot write output file: {exc}") from exc
    else:
        sys.stdout.write(text)


def _units_scale(units: str) -> float:
    return 1.0 / LN2 if units == "bits" else 1.0


def _cmd_thresholds(args) -> int:
    report = threshold_report(load_source(args.input))
    _emit(_to_json(report.to_json_dict()) + "\n", args.out)
    return 0


def _cmd_feasibility(args) -> int:
    verdict = pair_feasibility_test(load_source(args.input))
    scale = _units_scale(args.units)
    doc = {
        "units": args.units,
        "positive": verdict.positive,
        "witness": list(verdict.witness) if verdict.witness else None,
        "lhs_chernoff": verdict.lhs_chernoff * scale,
        "rhs_half_log_ratio": verdict.rhs_half_log_ratio * scale,
    }
    _emit(_to_json(doc) + "\n", args.out)
    return 0


def _cmd_measure(args) -> int:
    source = load_source(args.input)
    scale = _units_scale(args.units)
    report = eta(y_given_x(source.joint))
    doc = {
        "units": args.units,
        "i_xy": mutual_information(source.joint) * scale,
        "i_xy_given_z": conditional_mutual_information(source) * scale,
        "rho_m": maximal_correlation(source.joint),
        "eta": report.eta,
        "j_infinity": j_infinity(source.joint) * scale,
        "doeblin_eve": doeblin_coefficient(source.eve_channel()),
    }
    _emit(_to_json(doc) + "\n", args.out)
    return 0


def _cmd_simulate(args) -> int:
    source = load_source(args.input)
    labels = [s.strip() for s in args.pairs.split(",")]
    if len(labels) != 4:
        raise OutOfRangeError(
            f"--pairs needs exactly x1,y1,x2,y2 (got {len(labels)} fields)"
        )
    xa = source.joint.x_alphabet
    ya = source.joint.y_alphabet
    for lab, alpha, side in (
        (labels[0], xa, "x1"),
        (labels[1], ya, "y1"),
        (labels[2], xa, "x2"),
        (labels[3], ya, "y2"),
    ):
        if lab not in alpha:
            raise AlphabetMismatchError(f"{side}={lab!r} is not a source symbol")
    instance = SwapInstance(
        source=source,
        x1=xa.index(labels[0]),
        y1=ya.index(labels[1]),
        x2=xa.index(labels[2]),
        y2=ya.index(labels[3]),
        n=args.n,
    )
    stats = monte_carlo_protocol(instance, args.blocks, args.seed)
    doc = {
        "blocks": stats.blocks,
        "accepted": stats.accepted,
        "diagonal": stats.diagonal,
        "eve_errors": stats.eve_errors,
        "acceptance_rate": stats.acceptance_rate,
        "empirical_tilde_p": stats.empirical_tilde_p,
        "empirical_eve_error": stats.empirical_eve_error,
        "exact_acceptance_rate": exact_acceptance_rate(instance),
        "exact_tilde_p": tilde_p(instance),
        "exact_eve_error": exact_eve_error(instance),
    }
    _emit(_to_json(doc) + "\n", args.out)
    return 0


def _cmd_dsbe(args) -> int:
    if args.steps < 1:
        raise OutOfRangeError(f"--steps must be >= 1, got {args.steps}")
    if not 0.0 <= args.eps_min <= args.eps_max <= 1.0:
        raise OutOfRangeError(
            f"need 0 <= --eps-min <= --eps-max <= 1, got "
            f"[{args.eps_min}, {args.eps_max}]"
        )
    grid = np.linspace(args.eps_min, args.eps_max, args.steps)
    points = emit_curves(args.p, grid, args.n_max)
    _emit(curves_to_csv(points, args.n_max), args.out)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="skagree",
        description=(
            "Decide and quantify feasibility of positive-rate secret-key "
            "agreement for discrete sources observed through an eavesdropper."
        ),
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add_common(p, units=True):
        p.add_argument("--input", required=True, help="source description (JSON)")
        if units:
            p.add_argument(
                "--units", choices=("bits", "nats"), default="bits",
                help="unit for entropic fields (default: bits)",
            )
        p.add_argument("--out", default=None, help="write output here instead of stdout")

    p = sub.add_parser(
        "thresholds", help="erasure thresholds, certificates and verdict"
    )
    add_common(p, units=False)
    p.set_defaults(func=_cmd_thresholds)

    p = sub.add_parser(
        "feasibility", help="single-letter positive-rate test over symbol pairs"
    )
    add_common(p)
    p.set_defaults(func=_cmd_feasibility)

    p = sub.add_parser("measure", help="information and correlation measures")
    add_common(p)
    p.set_defaults(func=_cmd_measure)

    p = sub.add_parser("simulate", help="Monte-Carlo run of the swap protocol")
    add_common(p, units=False)
    p.add_argument(
        "--pairs", required=True,
        help="comma-separated symbol labels x1,y1,x2,y2",
    )
    p.add_argument("--n", type=int, required=True, help="even block length")
    p.add_argument("--blocks", type=int, default=100_000, help="number of blocks")
    p.add_argument(
        "--seed", type=int, required=True,
        help="RNG seed (mandatory: no silent nondeterminism)",
    )
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("dsbe", help="benchmark curve family as CSV (bits)")
    p.add_argument("--p", type=float, required=True, help="crossover probability")
    p.add_argument("--eps-min", type=float, default=0.0)
    p.add_argument("--eps-max", type=float, default=1.0)
    p.add_argument("--steps", type=int, default=200, help="number of grid rows")
    p.add_argument("--n-max", type=int, default=6, help="largest repetition count")
    p.add_argument("--out", default=None, help="write CSV here instead of stdout")
    p.set_defaults(func=_cmd_dsbe)
    return parser


def main(argv: Optional[list] = None) -> int:
    threads = os.environ.get("SKAGREE_THREADS")
    if threads:
        try:
            cap = int(threads)
        except ValueError:
            print(f"error: SKAGREE_THREADS={threads!r} is not an integer",
                  file=sys.stderr)
            return 2
        if cap >= 1:
            _backend.set_thread_cap(cap)
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except GuardError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
