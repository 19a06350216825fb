# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled integer kernels: Bareiss elimination on int64 with 128-bit
intermediates.

Each entry point returns the same result as its twin in ``_pykernels``.
When an input does not fit in int64, or an eliminated entry leaves the
int64 range, the call is delegated to the pure-Python twin.
"""

from libc.stdlib cimport malloc, free
from libc.stdint cimport int64_t, INT64_MAX, INT64_MIN

from ptrank import _pykernels

cdef extern from *:
    ctypedef long long int128 "__int128"

cdef enum:
    OVERFLOW = -2


cdef int64_t* _load(object flat, Py_ssize_t n) except? NULL:
    cdef int64_t* a = <int64_t*> malloc(n * sizeof(int64_t))
    cdef Py_ssize_t k
    if a == NULL:
        raise MemoryError()
    try:
        for k in range(n):
            a[k] = flat[k]
    except OverflowError:
        free(a)
        return NULL
    return a


cdef inline bint _fits(int128 v) nogil:
    return v <= <int128> INT64_MAX and v >= <int128> INT64_MIN


cdef Py_ssize_t _rank(int64_t* a, Py_ssize_t rows, Py_ssize_t cols) nogil:
    cdef int64_t prev = 1, piv, aic, tmp
    cdef Py_ssize_t r = 0, c, p, i, j
    cdef int128 v
    for c in range(cols):
        if r == rows:
            break
        p = r
        while p < rows and a[p * cols + c] == 0:
            p += 1
        if p == rows:
            continue
        if p != r:
            for j in range(cols):
                tmp = a[p * cols + j]
                a[p * cols + j] = a[r * cols + j]
                a[r * cols + j] = tmp
        piv = a[r * cols + c]
        for i in range(r + 1, rows):
            aic = a[i * cols + c]
            for j in range(c + 1, cols):
                v = (<int128> a[i * cols + j] * piv - <int128> aic * a[r * cols + j]) / prev
                if not _fits(v):
                    return OVERFLOW
                a[i * cols + j] = <int64_t> v
            a[i * cols + c] = 0
        prev = piv
        r += 1
    return r


cdef int _det(int64_t* a, Py_ssize_t n, int64_t* out) nogil:
    cdef int64_t prev = 1, piv, aic, tmp
    cdef Py_ssize_t c, p, i, j
    cdef int sign = 1
    cdef int128 v
    for c in range(n - 1):
        p = c
        while p < n and a[p * n + c] == 0:
            p += 1
        if p == n:
            out[0] = 0
            return 0
        if p != c:
            for j in range(n):
                tmp = a[p * n + j]
                a[p * n + j] = a[c * n + j]
                a[c * n + j] = tmp
            sign = -sign
        piv = a[c * n + c]
        for i in range(c + 1, n):
            aic = a[i * n + c]
            for j in range(c + 1, n):
                v = (<int128> a[i * n + j] * piv - <int128> aic * a[c * n + j]) / prev
                if not _fits(v):
                    return OVERFLOW
                a[i * n + j] = <int64_t> v
            a[i * n + c] = 0
        prev = piv
    v = <int128> sign * a[(n - 1) * n + n - 1]
    if not _fits(v):
        return OVERFLOW
    out[0] = <int64_t> v
    return 0


def rank_int(flat, Py_ssize_t rows, Py_ssize_t cols):
    if rows == 0 or cols == 0:
        return 0
    cdef int64_t* a = _load(flat, rows * cols)
    cdef Py_ssize_t r
    if a == NULL:
        return _pykernels.rank_int(flat, rows, cols)
    with nogil:
        r = _rank(a, rows, cols)
    free(a)
    if r == OVERFLOW:
        return _pykernels.rank_int(flat, rows, cols)
    return r


def det_int(flat, Py_ssize_t n):
    if n == 0:
        return 1
    cdef int64_t* a = _load(flat, n * n)
    cdef int64_t out = 0
    cdef int status
    if a == NULL:
        return _pykernels.det_int(flat, n)
    with nogil:
        status = _det(a, n, &out)
    free(a)
    if status == OVERFLOW:
        return _pykernels.det_int(flat, n)
    return out
