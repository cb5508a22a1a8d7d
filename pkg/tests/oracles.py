"""Slow, independent reference implementations used to cross-check the
library.  Everything here favours obvious correctness over speed: plain
loops, exhaustive enumeration, dense grids.
"""

import itertools
import math

import numpy as np


def random_joint(rng, nx, ny, full_support=True, zeros=0):
    """Random joint table; optionally knock out a few cells."""
    m = rng.random((nx, ny)) + (0.05 if full_support else 0.0)
    if zeros:
        flat = rng.choice(nx * ny, size=zeros, replace=False)
        m.ravel()[flat] = 0.0
    return m / m.sum()


def grid_chernoff(p, q, points=200001):
    """Chernoff information by dense grid over the exponent parameter."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    both = (p > 0) & (q > 0)
    if not both.any():
        return math.inf
    lp = np.log(p[both])
    lq = np.log(q[both])
    alphas = np.linspace(0.0, 1.0, points)[1:-1]
    vals = [np.exp(a * lp + (1 - a) * lq).sum() for a in alphas]
    return max(0.0, -math.log(min(vals)))


def ace_maximal_correlation(m, iters=4000, seed=0):
    """Maximal correlation by alternating conditional expectations."""
    m = np.asarray(m, dtype=float)
    m = m / m.sum()
    px = m.sum(axis=1)
    py = m.sum(axis=0)
    rows = px > 0
    cols = py > 0
    m = m[np.ix_(rows, cols)]
    px, py = px[rows], py[cols]
    if len(px) < 2 or len(py) < 2:
        return 0.0
    rng = np.random.default_rng(seed)

    def standardize(v, w):
        v = v - float(w @ v)
        norm = math.sqrt(float(w @ v**2))
        return None if norm < 1e-300 else v / norm

    f = rng.standard_normal(len(px))
    g = np.zeros(len(py))
    for _ in range(iters):
        f = standardize(f, px)
        if f is None:
            return 0.0
        g = standardize((m.T @ f) / py, py)
        if g is None:
            return 0.0
        f = (m @ g) / px
    f = standardize(f, px)
    if f is None:
        return 0.0
    corr = float(f @ m @ g)
    return min(1.0, abs(corr))


def brute_force_eps1(m):
    """Minimum path value by literal enumeration of alternating paths."""
    m = np.asarray(m, dtype=float)
    nx, ny = m.shape
    best = 1.0
    for k in range(1, min(nx, ny) + 1):
        for xs in itertools.permutations(range(nx), k):
            for ys in itertools.permutations(range(ny), k):
                num = 1.0
                for i in range(k):
                    num *= m[xs[i], ys[i]]
                den = m[xs[0], ys[k - 1]]
                for i in range(1, k):
                    den *= m[xs[i], ys[i - 1]]
                if num == 0.0 and den == 0.0:
                    val = 1.0
                elif num == 0.0:
                    val = 0.0
                elif den == 0.0:
                    continue  # value +inf, never the minimum
                else:
                    val = (num / den) ** (1.0 / k)
                best = min(best, val)
    return best


def brute_force_eps2(m):
    m = np.asarray(m, dtype=float)
    nx, ny = m.shape
    best = 1.0
    for x1, x2 in itertools.permutations(range(nx), 2):
        for y1, y2 in itertools.permutations(range(ny), 2):
            num = m[x1, y1] * m[x2, y2]
            den = m[x1, y2] * m[x2, y1]
            if num == 0.0 and den == 0.0:
                val = 1.0
            elif num == 0.0:
                val = 0.0
            elif den == 0.0:
                continue
            else:
                val = math.sqrt(num / den)
            best = min(best, val)
    return best


def _entropy_of(values):
    h = 0.0
    for v in values:
        if v > 0.0:
            h -= v * math.log(v)
    return h


def swap_brute_force(joint, eps, x1, y1, x2, y2, n):
    """H(X^n, Y^n | Z^n, accept) - H(Y^n|X^n, accept) - H(X^n|Y^n, accept)
    by literal enumeration of the four accepted patterns and every erasure
    mask.  Nats.
    """
    m = np.asarray(joint, dtype=float)
    half = n // 2

    def pattern_cells(xa, xb, ya, yb):
        return [(xa, ya)] * half + [(xb, yb)] * half

    # the four accepted (X^n, Y^n) strings: indices (x-string, y-string)
    patterns = [
        pattern_cells(x1, x2, y1, y2),
        pattern_cells(x2, x1, y2, y1),
        pattern_cells(x1, x2, y2, y1),
        pattern_cells(x2, x1, y1, y2),
    ]
    weights = []
    for cells in patterns:
        w = 1.0
        for x, y in cells:
            w *= m[x, y]
        weights.append(w)
    norm = sum(weights)
    weights = [w / norm for w in weights]

    # joint law of (pattern, Z^n): Z^n collapses to (mask, revealed cells)
    pz = {}
    joint_pz = {}
    for pi, cells in enumerate(patterns):
        for mask in range(1 << n):
            k = bin(mask).count("1")
            w = weights[pi] * (eps ** (n - k)) * ((1.0 - eps) ** k)
            revealed = tuple(cells[t] for t in range(n) if mask >> t & 1)
            key = (mask, revealed)
            pz[key] = pz.get(key, 0.0) + w
            joint_pz[(pi, key)] = joint_pz.get((pi, key), 0.0) + w
    h_xy_given_z = _entropy_of(joint_pz.values()) - _entropy_of(pz.values())

    # given acceptance, X^n and Y^n each take two values; marginal entropies
    # over the 2x2 pattern table give the residual party uncertainties
    q = np.array([[weights[0], weights[2]], [weights[3], weights[1]]])
    h_y_given_x = _entropy_of(q.ravel()) - _entropy_of(q.sum(axis=1))
    h_x_given_y = _entropy_of(q.ravel()) - _entropy_of(q.sum(axis=0))
    return h_xy_given_z - h_y_given_x - h_x_given_y


def enumerate_cmi(joint, eve_rows, z_size):
    """I(X;Y|Z) by direct enumeration of the full (x, y, z) tensor."""
    m = np.asarray(joint, dtype=float)
    nx, ny = m.shape
    t = np.zeros((nx, ny, z_size))
    for x in range(nx):
        for y in range(ny):
            t[x, y] = m[x, y] * eve_rows[x * ny + y]
    total = 0.0
    for z in range(z_size):
        pz = t[:, :, z].sum()
        if pz <= 0.0:
            continue
        sub = t[:, :, z] / pz
        px = sub.sum(axis=1)
        py = sub.sum(axis=0)
        for x in range(nx):
            for y in range(ny):
                if sub[x, y] > 0.0:
                    total += pz * sub[x, y] * math.log(
                        sub[x, y] / (px[x] * py[y])
                    )
    return max(0.0, total)
