#!/usr/bin/env python3
"""Benchmark the compiled kernels against their pure-numpy fallbacks.

Runs each hot kernel on a representative workload under both
implementations, checks that the outputs agree exactly, and prints a small
timing table.  Useful when deciding whether SKAGREE_BACKEND=numpy is an
acceptable deployment mode on a host without a working compiler toolchain.

Usage:  python3 benchmarks/compare_backends.py [--repeats N]
"""

import argparse
import sys
import time

import numpy as np

from skagree import _kernels
from skagree._backend import HAS_NUMBA


def _time(fn, args, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def _path_scan_case(rng):
    m = rng.random((6, 6)) + 0.05
    m /= m.sum()
    return (np.log(m),)


def _bf_case(rng):
    # difference-constraint system shaped like the threshold LP: a dense
    # bipartite constraint graph on 60 + 60 nodes
    nx = ny = 60
    us, vs, ws = [], [], []
    m = rng.random((nx, ny)) + 0.05
    m /= m.sum()
    logp = np.log(m)
    for x in range(nx):
        for y in range(ny):
            us.append(x)
            vs.append(nx + y)
            ws.append(-logp[x, y] + 0.1)
            us.append(nx + y)
            vs.append(x)
            ws.append(logp[x, y] + 0.1)
    return (
        np.asarray(us, dtype=np.int64),
        np.asarray(vs, dtype=np.int64),
        np.asarray(ws, dtype=np.float64),
        nx + ny,
    )


def _mc_case(rng):
    blocks, n = 1 << 17, 8
    cells = rng.integers(0, 4, size=(blocks, n)).astype(np.int64)
    erased = rng.random((blocks, n)) < 0.8
    return (cells, erased, n // 2, 0, 3, 1, 2)


def _norm(result):
    if isinstance(result, tuple):
        return tuple(
            v.tolist() if isinstance(v, np.ndarray) else float(v) for v in result
        )
    return result


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()
    if not HAS_NUMBA:
        print("numba is not importable here; nothing to compare.", file=sys.stderr)
        return 1
    _kernels.warmup()
    rng = np.random.default_rng(20240814)
    cases = [
        ("path_scan (6x6 table)", _kernels._path_scan_py,
         _kernels._path_scan_nb, _path_scan_case(rng)),
        ("bf_feasible (120 nodes)", _kernels._bf_feasible_py,
         _kernels._bf_feasible_nb, _bf_case(rng)),
        ("mc_count (131072 x 8)", _kernels._mc_count_py,
         _kernels._mc_count_nb, _mc_case(rng)),
    ]
    print(f"{'kernel':<26}{'numpy':>10}{'numba':>10}{'speedup':>9}  agree")
    for name, py, nb, case_args in cases:
        out_py = _norm(py(*case_args))
        out_nb = _norm(nb(*case_args))
        agree = out_py == out_nb
        t_py = _time(py, case_args, args.repeats)
        t_nb = _time(nb, case_args, args.repeats)
        print(
            f"{name:<26}{t_py:>9.4f}s{t_nb:>9.4f}s{t_py / t_nb:>8.1f}x"
            f"  {'yes' if agree else 'NO'}"
        )
        if not agree:
            print(f"  mismatch on {name}: {out_py!r} vs {out_nb!r}", file=sys.stderr)
            return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
