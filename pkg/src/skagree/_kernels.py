"""Hot numeric kernels, each in a numba and a pure-numpy variant.

Three kernels live here because they dominate runtime:

* ``path_scan``   — exhaustive minimum-value search over alternating paths
                    (all-positive log-table input, cyclic classes visited once
                    by fixing the smallest row index first);
* ``bf_feasible`` — negative-cycle detection for a difference-constraint
                    system via synchronous (Jacobi) Bellman-Ford relaxation;
* ``mc_count``    — integer pattern counting for the swap-protocol Monte
                    Carlo simulation.

The Jacobi update order and the integer-only Monte-Carlo counts make the two
backends return identical results (bit-for-bit for ``bf_feasible`` distances
and ``mc_count`` tallies), so the backend flag never changes a verdict or a
simulation statistic.  Dispatch is decided once at import by
:mod:`skagree._backend`.
"""

from __future__ import annotations

import itertools

import numpy as np

from ._backend import HAS_NUMBA, USE_NUMBA

if HAS_NUMBA:
    from numba import njit
else:  # pragma: no cover - exercised only when numba is absent
    njit = None


# ---------------------------------------------------------------------------
# path scan
# ---------------------------------------------------------------------------

def _path_scan_py(logp: np.ndarray) -> tuple[float, np.ndarray, np.ndarray]:
    """Pure-numpy exhaustive path scan.

    ``logp`` must be a finite (all-positive-probability) log table.  Returns
    the minimum mean log cross-ratio over all alternating paths together with
    one minimizing index pair (xs, ys).  The trivial single-pair path has
    value 0 (= log 1), which seeds the minimum.

    Paths are enumerated per cyclic equivalence class: the class
    representative places its smallest row index first, so each class is
    visited exactly once.  Column permutations are vectorized in batches.
    """
    nx, ny = logp.shape
    kmax = min(nx, ny)
    best = 0.0
    best_xs = np.zeros(1, dtype=np.int64)
    best_ys = np.zeros(1, dtype=np.int64)
    batch = 1 << 15
    for k in range(2, kmax + 1):
        yperm_iter = itertools.permutations(range(ny), k)
        while True:
            yblock = np.fromiter(
                itertools.chain.from_iterable(itertools.islice(yperm_iter, batch)),
                dtype=np.int64,
            ).reshape(-1, k)
            if yblock.size == 0:
                break
            yden = np.roll(yblock, 1, axis=1)
            for combo in itertools.combinations(range(nx), k):
                head = combo[0]
                for rest in itertools.permutations(combo[1:]):
                    xs = np.asarray((head,) + rest, dtype=np.int64)
                    num = logp[xs[None, :], yblock].sum(axis=1)
                    den = logp[xs[None, :], yden].sum(axis=1)
                    vals = (num - den) / k
                    i = int(np.argmin(vals))
                    if vals[i] < best:
                        best = float(vals[i])
                        best_xs = xs.copy()
                        best_ys = yblock[i].copy()
            if yblock.shape[0] < batch:
                break
    return best, best_xs, best_ys


if HAS_NUMBA:

    @njit(cache=True)
    def _path_scan_nb(logp):  # pragma: no cover - compiled
        nx, ny = logp.shape
        kmax = min(nx, ny)
        best = 0.0
        best_k = 1
        best_xs = np.zeros(kmax, np.int64)
        best_ys = np.zeros(kmax, np.int64)
        xs = np.empty(kmax, np.int64)
        ys = np.empty(kmax, np.int64)
        num = np.empty(kmax, np.float64)
        den = np.empty(kmax, np.float64)
        used_x = np.zeros(nx, np.bool_)
        used_y = np.zeros(ny, np.bool_)
        cand = np.zeros(kmax + 1, np.int64)
        ncells = nx * ny
        for x1 in range(nx):
            for y1 in range(ny):
                xs[0] = x1
                ys[0] = y1
                used_x[x1] = True
                used_y[y1] = True
                num[0] = logp[x1, y1]
                den[0] = 0.0
                d = 1
                cand[1] = 0
                while d >= 1:
                    if d < kmax:
                        c = cand[d]
                        advanced = False
                        while c < ncells:
                            x = c // ny
                            y = c % ny
                            if x > x1 and not used_x[x] and not used_y[y]:
                                xs[d] = x
                                ys[d] = y
                                used_x[x] = True
                                used_y[y] = True
                                num[d] = num[d - 1] + logp[x, y]
                                den[d] = den[d - 1] + logp[x, ys[d - 1]]
                                val = (num[d] - den[d] - logp[x1, y]) / (d + 1)
                                if val < best:
                                    best = val
                                    best_k = d + 1
                                    for i in range(d + 1):
                                        best_xs[i] = xs[i]
                                        best_ys[i] = ys[i]
                                cand[d] = c + 1
                                d += 1
                                cand[d] = 0
                                advanced = True
                                break
                            c += 1
                        if not advanced:
                            d -= 1
                            if d == 0:
                                break
                            used_x[xs[d]] = False
                            used_y[ys[d]] = False
                    else:
                        d -= 1
                        if d == 0:
                            break
                        used_x[xs[d]] = False
                        used_y[ys[d]] = False
                used_x[x1] = False
                used_y[y1] = False
        return best, best_xs[:best_k].copy(), best_ys[:best_k].copy()

else:  # pragma: no cover
    _path_scan_nb = None


def path_scan(logp: np.ndarray) -> tuple[float, np.ndarray, np.ndarray]:
    """Minimum mean log cross-ratio over all alternating paths, with witness."""
    logp = np.ascontiguousarray(logp, dtype=np.float64)
    if USE_NUMBA:
        return _path_scan_nb(logp)
    return _path_scan_py(logp)


# ---------------------------------------------------------------------------
# difference-constraint feasibility (Jacobi Bellman-Ford)
# ---------------------------------------------------------------------------

def _bf_feasible_py(u, v, w, nnodes):
    dist = np.zeros(nnodes, dtype=np.float64)
    for _ in range(nnodes):
        nd = dist.copy()
        np.minimum.at(nd, v, dist[u] + w)
        if np.array_equal(nd, dist):
            return True, dist
        dist = nd
    nd = dist.copy()
    np.minimum.at(nd, v, dist[u] + w)
    if np.array_equal(nd, dist):
        return True, dist
    return False, dist


if HAS_NUMBA:

    @njit(cache=True)
    def _bf_feasible_nb(u, v, w, nnodes):  # pragma: no cover - compiled
        dist = np.zeros(nnodes, np.float64)
        ne = u.shape[0]
        for _ in range(nnodes):
            nd = dist.copy()
            changed = False
            for e in range(ne):
                cand = dist[u[e]] + w[e]
                if cand < nd[v[e]]:
                    nd[v[e]] = cand
                    changed = True
            if not changed:
                return True, dist
            dist = nd
        for e in range(ne):
            if dist[u[e]] + w[e] < dist[v[e]]:
                return False, dist
        return True, dist

else:  # pragma: no cover
    _bf_feasible_nb = None


def bf_feasible(u: np.ndarray, v: np.ndarray, w: np.ndarray, nnodes: int):
    """Decide whether the difference-constraint graph has no negative cycle.

    All node potentials start at zero (equivalent to a virtual source with
    zero-weight edges to every node), so the returned potentials satisfy
    every constraint whenever the system is feasible.  Returns
    ``(feasible, potentials)``.
    """
    u = np.ascontiguousarray(u, dtype=np.int64)
    v = np.ascontiguousarray(v, dtype=np.int64)
    w = np.ascontiguousarray(w, dtype=np.float64)
    if USE_NUMBA:
        return _bf_feasible_nb(u, v, w, nnodes)
    return _bf_feasible_py(u, v, w, nnodes)


# ---------------------------------------------------------------------------
# Monte-Carlo pattern counting
# ---------------------------------------------------------------------------

def _mc_count_py(cells, erased, half, c11, c22, c12, c21):
    first = cells[:, 0]
    second = cells[:, half]
    const = (cells[:, :half] == first[:, None]).all(axis=1)
    const &= (cells[:, half:] == second[:, None]).all(axis=1)
    d1 = const & (first == c11) & (second == c22)
    d2 = const & (first == c22) & (second == c11)
    off = const & (
        ((first == c12) & (second == c21)) | ((first == c21) & (second == c12))
    )
    diag = int(d1.sum()) + int(d2.sum())
    accepted = diag + int(off.sum())
    errors = int((d2 & erased.all(axis=1)).sum())
    return accepted, diag, errors


if HAS_NUMBA:

    @njit(cache=True)
    def _mc_count_nb(cells, erased, half, c11, c22, c12, c21):  # pragma: no cover
        nb, n = cells.shape
        accepted = 0
        diag = 0
        errors = 0
        for b in range(nb):
            first = cells[b, 0]
            ok = True
            for i in range(1, half):
                if cells[b, i] != first:
                    ok = False
                    break
            if not ok:
                continue
            second = cells[b, half]
            for i in range(half + 1, n):
                if cells[b, i] != second:
                    ok = False
                    break
            if not ok:
                continue
            if (first == c11 and second == c22) or (first == c22 and second == c11):
                accepted += 1
                diag += 1
                if first == c22:
                    all_erased = True
                    for i in range(n):
                        if not erased[b, i]:
                            all_erased = False
                            break
                    if all_erased:
                        errors += 1
            elif (first == c12 and second == c21) or (first == c21 and second == c12):
                accepted += 1
        return accepted, diag, errors

else:  # pragma: no cover
    _mc_count_nb = None


def mc_count(cells, erased, half, c11, c22, c12, c21):
    """Count (accepted, diagonal, eve-error) blocks in a sampled batch.

    A block is accepted when its first ``half`` cells are one constant pair
    code and the remaining cells another, matching one of the four swap
    patterns.  Diagonal blocks carry the two equiprobable key hypotheses;
    an eve error is a second-hypothesis diagonal block whose coordinates
    were all erased (ties are guessed as the first hypothesis).
    """
    cells = np.ascontiguousarray(cells, dtype=np.int64)
    erased = np.ascontiguousarray(erased, dtype=np.bool_)
    if USE_NUMBA:
        return _mc_count_nb(cells, erased, half, c11, c22, c12, c21)
    return _mc_count_py(cells, erased, half, c11, c22, c12, c21)


def warmup() -> None:
    """Force JIT compilation of all kernels on tiny inputs (no-op on numpy)."""
    if not USE_NUMBA:
        return
    path_scan(np.zeros((2, 2)))
    bf_feasible(np.array([0, 1]), np.array([1, 0]), np.array([1.0, 1.0]), 2)
    mc_count(
        np.zeros((2, 2), dtype=np.int64),
        np.zeros((2, 2), dtype=np.bool_),
        1, 0, 3, 1, 2,
    )
