# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""int64 Bareiss elimination with checked arithmetic.

Raises OverflowError when an input or intermediate leaves the int64 range;
callers then retry with the arbitrary-precision kernel.
"""
from libc.limits cimport LLONG_MIN
from libc.stdlib cimport malloc, free

cdef extern from *:
    """
    static inline int crn_mul_ovf(long long a, long long b, long long *r) {
        return __builtin_mul_overflow(a, b, r);
    }
    static inline int crn_sub_ovf(long long a, long long b, long long *r) {
        return __builtin_sub_overflow(a, b, r);
    }
    """
    int crn_mul_ovf(long long a, long long b, long long *r) nogil
    int crn_sub_ovf(long long a, long long b, long long *r) nogil


cdef int _eliminate(long long *a, Py_ssize_t nrows, Py_ssize_t ncols,
                    Py_ssize_t *pivots, Py_ssize_t *rank_out) noexcept nogil:
    cdef Py_ssize_t rank = 0, c, p, i, j
    cdef long long prev = 1, piv, f, t1, t2, d, tmp
    cdef long long *prow
    cdef long long *row
    for c in range(ncols):
        if rank == nrows:
            break
        p = rank
        while p < nrows and a[p * ncols + c] == 0:
            p += 1
        if p == nrows:
            continue
        if p != rank:
            for j in range(ncols):
                tmp = a[rank * ncols + j]
                a[rank * ncols + j] = a[p * ncols + j]
                a[p * ncols + j] = tmp
        prow = a + rank * ncols
        piv = prow[c]
        for i in range(rank + 1, nrows):
            row = a + i * ncols
            f = row[c]
            for j in range(c + 1, ncols):
                if crn_mul_ovf(piv, row[j], &t1):
                    return 1
                if crn_mul_ovf(f, prow[j], &t2):
                    return 1
                if crn_sub_ovf(t1, t2, &d):
                    return 1
                if prev == -1 and d == LLONG_MIN:
                    return 1
                row[j] = d // prev
            row[c] = 0
        prev = piv
        pivots[rank] = c
        rank += 1
    rank_out[0] = rank
    return 0


def echelon(rows, Py_ssize_t ncols):
    """Same contract as the pure-Python ``echelon``."""
    cdef Py_ssize_t nrows = len(rows)
    cdef Py_ssize_t i, j, rank = 0
    cdef long long *a
    cdef Py_ssize_t *pivots
    cdef int status
    if nrows == 0 or ncols == 0:
        return 0, [], [list(r) for r in rows]
    a = <long long *> malloc(nrows * ncols * sizeof(long long))
    pivots = <Py_ssize_t *> malloc(ncols * sizeof(Py_ssize_t))
    if a == NULL or pivots == NULL:
        free(a)
        free(pivots)
        raise MemoryError()
    try:
        for i in range(nrows):
            r = rows[i]
            for j in range(ncols):
                a[i * ncols + j] = r[j]  # OverflowError for out-of-range entries
        with nogil:
            status = _eliminate(a, nrows, ncols, pivots, &rank)
        if status:
            raise OverflowError("int64 overflow in elimination")
        out = [[a[i * ncols + j] for j in range(ncols)] for i in range(nrows)]
        return rank, [pivots[i] for i in range(rank)], out
    finally:
        free(a)
        free(pivots)
