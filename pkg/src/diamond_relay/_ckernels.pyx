# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled subset-enumeration kernels.

Every function here has a numpy twin in ``_kernels_py`` with the same
signature, the same bitmask convention (bit ``i`` set means element ``i``
is in the subset) and the same tie-breaking (smallest mask wins).
"""
import numpy as np

from libc.math cimport log2, fabs

cdef Py_ssize_t LO_BITS_MAX = 16


def subset_sums(const double[::1] v):
    """Return ``s[mask] = sum(v[i] for i in mask)`` for every mask."""
    cdef Py_ssize_t n = v.shape[0]
    cdef Py_ssize_t i, m, half
    out = np.zeros(1 << n, dtype=np.float64)
    cdef double[::1] s = out
    for i in range(n):
        half = 1 << i
        for m in range(half):
            s[m + half] = s[m] + v[i]
    return out


cdef inline int _popcount(unsigned long long x) nogil:
    cdef int c = 0
    while x:
        x &= x - 1
        c += 1
    return c


def cut_minimum(const double[::1] x, const double[::1] y, double cx, double cy,
                bint coherent, double penalty):
    """Minimise a two-hop cut value over all subsets ``L`` of the relays.

    value(L) = log2(1 + cx * sum_{i not in L} x_i)
             + log2(1 + cy * D(L)) - penalty * |L|

    where ``D(L)`` is ``sum_{i in L} y_i`` or its square when ``coherent``.
    Subset sums are split into low and high halves so memory stays at
    ``O(2 ** (n / 2))`` for large ``n``.
    """
    cdef Py_ssize_t n = x.shape[0]
    cdef Py_ssize_t lo_bits = n if n < LO_BITS_MAX else LO_BITS_MAX
    cdef Py_ssize_t hi_bits = n - lo_bits
    cdef unsigned long long lo_size = 1ULL << lo_bits
    cdef unsigned long long hi_size = 1ULL << hi_bits
    cdef unsigned long long lo_full = lo_size - 1
    cdef unsigned long long hi_full = hi_size - 1

    lo_x_arr = subset_sums(np.ascontiguousarray(x[:lo_bits]))
    hi_x_arr = subset_sums(np.ascontiguousarray(x[lo_bits:]))
    lo_y_arr = subset_sums(np.ascontiguousarray(y[:lo_bits]))
    hi_y_arr = subset_sums(np.ascontiguousarray(y[lo_bits:]))
    cdef double[::1] lo_x = lo_x_arr
    cdef double[::1] hi_x = hi_x_arr
    cdef double[::1] lo_y = lo_y_arr
    cdef double[::1] hi_y = hi_y_arr

    # log2 is monotone, so compare (1 + cx s)(1 + cy d) 2^(-penalty |L|) and
    # take the logarithm once for the winner.
    weight_arr = np.exp2(-penalty * np.arange(n + 1, dtype=np.float64))
    cdef double[::1] weight = weight_arr
    cdef unsigned long long h, l
    cdef double s, d, prod, hw
    cdef double best = 0.0
    cdef unsigned long long best_mask = 0
    cdef bint first = True
    cdef bint overflow = False
    cdef int hp
    with nogil:
        for h in range(hi_size):
            hp = _popcount(h)
            for l in range(lo_size):
                s = lo_x[lo_full ^ l] + hi_x[hi_full ^ h]
                d = lo_y[l] + hi_y[h]
                if coherent:
                    d = d * d
                prod = (1.0 + cx * s) * (1.0 + cy * d) * weight[_popcount(l) + hp]
                if first or prod < best:
                    best = prod
                    best_mask = (h << lo_bits) | l
                    first = False
        if best > 1e300:
            overflow = True
    if overflow:
        return _cut_minimum_logs(lo_x, hi_x, lo_y, hi_y, lo_bits, hi_bits, cx, cy, coherent, penalty)
    l = best_mask & lo_full
    h = best_mask >> lo_bits
    s = lo_x[lo_full ^ l] + hi_x[hi_full ^ h]
    d = lo_y[l] + hi_y[h]
    if coherent:
        d = d * d
    return log2(1.0 + cx * s) + log2(1.0 + cy * d) - penalty * (_popcount(l) + _popcount(h)), int(best_mask)


cdef _cut_minimum_logs(double[::1] lo_x, double[::1] hi_x, double[::1] lo_y, double[::1] hi_y,
                       Py_ssize_t lo_bits, Py_ssize_t hi_bits, double cx, double cy,
                       bint coherent, double penalty):
    # slow path for products beyond double range
    cdef unsigned long long lo_full = (1ULL << lo_bits) - 1
    cdef unsigned long long hi_full = (1ULL << hi_bits) - 1
    cdef unsigned long long h, l
    cdef double s, d, val
    cdef double best = 0.0
    cdef unsigned long long best_mask = 0
    cdef bint first = True
    with nogil:
        for h in range(hi_full + 1):
            for l in range(lo_full + 1):
                s = lo_x[lo_full ^ l] + hi_x[hi_full ^ h]
                d = lo_y[l] + hi_y[h]
                if coherent:
                    d = d * d
                val = log2(1.0 + cx * s) + log2(1.0 + cy * d) - penalty * (_popcount(l) + _popcount(h))
                if first or val < best:
                    best = val
                    best_mask = (h << lo_bits) | l
                    first = False
    return best, int(best_mask)


def polymatroid_violation(const double[::1] v, Py_ssize_t n, double tol):
    """Scan for the first violated polymatroid axiom.

    Returns ``(code, a, b)``: code 0 means none, 1 normalisation, 2
    monotonicity (``a`` subset of ``b`` with ``v[b] < v[a]``), 3
    submodularity (``v[a] + v[b] < v[a | b] + v[a & b]``).
    """
    cdef Py_ssize_t size = 1 << n
    cdef Py_ssize_t s, i, j, bi, bj
    if fabs(v[0]) > tol:
        return 1, 0, 0
    for s in range(size):
        for i in range(n):
            bi = 1 << i
            if s & bi:
                continue
            if v[s | bi] < v[s] - tol:
                return 2, s, s | bi
    for s in range(size):
        for i in range(n):
            bi = 1 << i
            if s & bi:
                continue
            for j in range(i + 1, n):
                bj = 1 << j
                if s & bj:
                    continue
                if v[s | bi] + v[s | bj] < v[s | bi | bj] + v[s] - tol:
                    return 3, s | bi, s | bj
    return 0, 0, 0
