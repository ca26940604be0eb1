# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled integer kernels; mirrors verlinde_kit._pykernels."""

import numpy as np
cimport numpy as cnp

cnp.import_array()

ctypedef cnp.int64_t i64


cdef inline bint _reduce(i64[:, ::1] roots, i64[::1] comarks, i64[::1] theta,
                         long k_dual, i64[::1] mu, long* steps) noexcept nogil:
    cdef Py_ssize_t n = mu.shape[0]
    cdef Py_ssize_t i, j
    cdef i64 c, p, shift
    cdef bint moved, wall
    steps[0] = 0
    while True:
        moved = True
        while moved:
            moved = False
            for i in range(n):
                c = mu[i]
                if c < 0:
                    for j in range(n):
                        mu[j] -= c * roots[i, j]
                    steps[0] += 1
                    moved = True
                    break
        if k_dual <= 0:
            break
        p = 0
        for i in range(n):
            p += comarks[i] * mu[i]
        if p <= k_dual:
            break
        shift = p - k_dual
        for j in range(n):
            mu[j] -= shift * theta[j]
        steps[0] += 1
    wall = False
    for i in range(n):
        if mu[i] == 0:
            wall = True
    if k_dual > 0:
        p = 0
        for i in range(n):
            p += comarks[i] * mu[i]
        if p == k_dual:
            wall = True
    return wall


def reduce_weight(roots, comarks, theta, long k_dual, mu):
    cdef i64[:, ::1] r = np.ascontiguousarray(roots, dtype=np.int64)
    cdef i64[::1] cm = np.ascontiguousarray(comarks, dtype=np.int64)
    cdef i64[::1] th = np.ascontiguousarray(theta, dtype=np.int64)
    arr = np.array(mu, dtype=np.int64)
    cdef i64[::1] m = arr
    cdef long steps = 0
    wall = _reduce(r, cm, th, k_dual, m, &steps)
    return arr.tolist(), steps, bool(wall)


def klimyk_accumulate(roots, comarks, theta, long k_dual, shifted, weights, mults):
    cdef i64[:, ::1] r = np.ascontiguousarray(roots, dtype=np.int64)
    cdef i64[::1] cm = np.ascontiguousarray(comarks, dtype=np.int64)
    cdef i64[::1] th = np.ascontiguousarray(theta, dtype=np.int64)
    cdef i64[:, ::1] w = np.ascontiguousarray(weights, dtype=np.int64).reshape(-1, len(shifted))
    cdef i64[::1] ml = np.ascontiguousarray(mults, dtype=np.int64)
    cdef i64[::1] base = np.ascontiguousarray(shifted, dtype=np.int64)
    cdef Py_ssize_t count = w.shape[0], n = base.shape[0], t, j
    buf = np.empty(n, dtype=np.int64)
    cdef i64[::1] v = buf
    cdef long steps = 0
    cdef bint wall
    out = {}
    for t in range(count):
        for j in range(n):
            v[j] = base[j] + w[t, j]
        wall = _reduce(r, cm, th, k_dual, v, &steps)
        if wall:
            continue
        key = tuple(buf.tolist())
        out[key] = out.get(key, 0) + (-ml[t] if steps % 2 else ml[t])
    return out
