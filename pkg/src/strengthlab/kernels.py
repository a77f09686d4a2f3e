"""Enumeration kernels with a numba path and a pure-numpy path.

Points of F_q^n (q = p^s) are indices in ``range(p**D)`` with ``D = n*s``
base-p digits, so vector addition is digit-wise addition mod p.  Which
path runs is decided by :func:`strengthlab._config.backend` at call time.
"""
import itertools

import numpy as np

from . import _config

ADD_TABLE_MAX = 4096

try:
    from numba import njit, prange
except ImportError:  # pragma: no cover
    njit = prange = None


def add_indices(a, b, p, D):
    """Digit-wise base-p sum of point indices (broadcasting)."""
    a, b = np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)
    out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
    pk = 1
    for _ in range(D):
        out += (((a // pk) + (b // pk)) % p) * pk
        pk *= p
    return out


def neg_indices(a, p, D):
    a = np.asarray(a, dtype=np.int64)
    out = np.zeros(a.shape, dtype=np.int64)
    pk = 1
    for _ in range(D):
        out += (-(a // pk) % p) * pk
        pk *= p
    return out


def add_table(p, D):
    """``table[a, b] = a + b`` for all point indices, or ``None`` if too large."""
    N = p**D
    if N > ADD_TABLE_MAX:
        return None
    idx = np.arange(N, dtype=np.int64)
    return add_indices(idx[:, None], idx[None, :], p, D)


def _subset_signs(m):
    # sign of the term F(v + sum_{i in S} v_i) in the m-fold difference
    return np.array([1 if (m - bin(S).count("1")) % 2 == 0 else -1 for S in range(1 << m)], dtype=np.int64)


# --- numpy path -------------------------------------------------------------


def _gowers_counts_numpy(vals, p, D, m):
    N = vals.shape[0]
    table = add_table(p, D)

    def add(a, b):
        if table is not None:
            return table[a, b]
        return add_indices(a, b, p, D)

    signs = _subset_signs(m)
    idx = np.arange(N, dtype=np.int64)
    counts = np.zeros(p, dtype=np.int64)
    # python loop over v_1..v_{m-1}; (v, v_m) handled as an N x N block
    for outer in itertools.product(range(N), repeat=m - 1):
        sums = [0]
        for v in outer:
            sums = sums + [int(add(s, v)) for s in sums]
        acc = np.zeros((N, N), dtype=np.int64)
        top = 1 << (m - 1)
        for S, s in enumerate(sums):
            base = add(idx, s)
            acc += signs[S] * vals[base][:, None]
            acc += signs[S + top] * vals[add(base[:, None], idx[None, :])]
        counts += np.bincount((acc % p).ravel(), minlength=p)
    return counts


# --- numba path -------------------------------------------------------------

if njit is not None:

    @njit(cache=True)
    def _add_digits(a, b, p, D):
        r = 0
        pk = 1
        for _ in range(D):
            r += (((a // pk) + (b // pk)) % p) * pk
            pk *= p
        return r

    @njit(parallel=True, cache=True)
    def _gowers_counts_nb(vals, table, use_table, p, D, m, signs):
        N = vals.shape[0]
        nsub = 1 << m
        rest = 1
        for _ in range(m - 1):
            rest *= N
        local = np.zeros((N, p), dtype=np.int64)
        for v1 in prange(N):
            sums = np.zeros(nsub, dtype=np.int64)
            vs = np.zeros(m, dtype=np.int64)
            acc = np.zeros(N, dtype=np.int64)
            for r in range(rest):
                vs[0] = v1
                rr = r
                for i in range(1, m):
                    vs[i] = rr % N
                    rr //= N
                sums[0] = 0
                for i in range(m):
                    step = 1 << i
                    for S in range(step):
                        if use_table:
                            sums[S + step] = table[sums[S], vs[i]]
                        else:
                            sums[S + step] = _add_digits(sums[S], vs[i], p, D)
                for v in range(N):
                    acc[v] = 0
                for S in range(nsub):
                    sh = sums[S]
                    pos = signs[S] > 0
                    for v in range(N):
                        if use_table:
                            x = vals[table[sh, v]]
                        else:
                            x = vals[_add_digits(v, sh, p, D)]
                        acc[v] += x if pos else p - x
                for v in range(N):
                    local[v1, acc[v] % p] += 1
        out = np.zeros(p, dtype=np.int64)
        for v1 in range(N):
            for j in range(p):
                out[j] += local[v1, j]
        return out


def gowers_counts(vals, p, D, m):
    """Tally of the m-fold difference of ``vals`` over all (v, v_1, ..., v_m).

    ``vals`` holds F_p values indexed by point; returns an int64 vector of
    length p summing to ``N**(m+1)``.
    """
    vals = np.ascontiguousarray(vals, dtype=np.int64)
    if m < 1:
        raise ValueError("m must be >= 1")
    if _config.backend() == "numba":
        table = add_table(p, D)
        use = table is not None
        if table is None:
            table = np.zeros((1, 1), dtype=np.int64)
        return _gowers_counts_nb(vals, table, use, p, D, m, _subset_signs(m))
    return _gowers_counts_numpy(vals, p, D, m)
