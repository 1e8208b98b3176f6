"""Pure numpy implementations of the subset-enumeration kernels.

Mirrors ``_ckernels.pyx`` function for function; used when the compiled
module is missing or ``DIAMOND_RELAY_PURE_PYTHON`` is set.
"""
import numpy as np

_LO_BITS_MAX = 16


def subset_sums(v):
    v = np.asarray(v, dtype=np.float64)
    s = np.zeros(1, dtype=np.float64)
    for vi in v:
        s = np.concatenate([s, s + vi])
    return s


def _popcounts(bits):
    masks = np.arange(1 << bits, dtype=np.int64)
    counts = np.zeros(1 << bits, dtype=np.int64)
    for i in range(bits):
        counts += (masks >> i) & 1
    return counts


def cut_minimum(x, y, cx, cy, coherent, penalty):
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    n = x.shape[0]
    lo_bits = min(n, _LO_BITS_MAX)
    lo_x, hi_x = subset_sums(x[:lo_bits]), subset_sums(x[lo_bits:])
    lo_y, hi_y = subset_sums(y[:lo_bits]), subset_sums(y[lo_bits:])
    lo_pc, hi_pc = _popcounts(lo_bits), _popcounts(n - lo_bits)
    lo_comp = lo_x[::-1]  # lo_x[lo_full ^ l]
    hi_full = hi_x.shape[0] - 1

    best, best_mask = None, 0
    for h in range(hi_x.shape[0]):
        s = lo_comp + hi_x[hi_full ^ h]
        d = lo_y + hi_y[h]
        if coherent:
            d = d * d
        vals = np.log2(1.0 + cx * s) + np.log2(1.0 + cy * d) - penalty * (lo_pc + hi_pc[h])
        k = int(np.argmin(vals))
        if best is None or vals[k] < best:
            best = float(vals[k])
            best_mask = (h << lo_bits) | k
    return best, best_mask


def polymatroid_violation(v, n, tol):
    v = np.asarray(v, dtype=np.float64)
    if abs(v[0]) > tol:
        return 1, 0, 0
    masks = np.arange(1 << n, dtype=np.int64)
    bits = 1 << np.arange(n, dtype=np.int64)

    # rows: S, cols: i; violation only where i not in S
    up = masks[:, None] | bits[None, :]
    free = (masks[:, None] & bits[None, :]) == 0
    bad = free & (v[up] < v[masks][:, None] - tol)
    if bad.any():
        s, i = divmod(int(np.argmax(bad.ravel())), n)
        return 2, s, s | (1 << i)

    if n < 2:
        return 0, 0, 0
    ii, jj = np.triu_indices(n, k=1)
    bi, bj = bits[ii][None, :], bits[jj][None, :]
    m = masks[:, None]
    free = ((m & bi) == 0) & ((m & bj) == 0)
    lhs = v[m | bi] + v[m | bj]
    rhs = v[m | bi | bj] + v[m]
    bad = free & (lhs < rhs - tol)
    if bad.any():
        s, p = divmod(int(np.argmax(bad.ravel())), ii.shape[0])
        return 3, s | (1 << int(ii[p])), s | (1 << int(jj[p]))
    return 0, 0, 0
