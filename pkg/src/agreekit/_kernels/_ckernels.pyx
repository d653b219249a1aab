# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled pair-counting kernels.

Both kernels return exact integer counts (concordant, discordant, tied only
on x, tied only on y, tied on both) over all unordered pairs. They must stay
count-identical to the numpy fallback in _pykernels; the tau value itself is
assembled from these counts in shared Python code.
"""


def count_pairs(double[::1] x, double[::1] y):
    """Pair counts for two equal-length finite score sequences."""
    cdef Py_ssize_t n = x.shape[0]
    cdef Py_ssize_t i, j
    cdef long long nc = 0, nd = 0, tx = 0, ty = 0, tb = 0
    cdef double xi, yi
    cdef int sx, sy
    with nogil:
        for i in range(n):
            xi = x[i]
            yi = y[i]
            for j in range(i + 1, n):
                sx = 0
                if xi > x[j]:
                    sx = 1
                elif xi < x[j]:
                    sx = -1
                sy = 0
                if yi > y[j]:
                    sy = 1
                elif yi < y[j]:
                    sy = -1
                if sx == 0:
                    if sy == 0:
                        tb += 1
                    else:
                        tx += 1
                elif sy == 0:
                    ty += 1
                elif sx == sy:
                    nc += 1
                else:
                    nd += 1
    return nc, nd, tx, ty, tb


def count_pairs_indexed(signed char[:, ::1] codes_x, signed char[:, ::1] codes_y,
                        long long[::1] idx):
    """Pair counts over an item-index multiset against precomputed code matrices.

    codes_* are antisymmetric n x n matrices with entries -1/0/+1 and zero
    diagonal; idx entries may repeat (a repeated item counts as tied on both).
    """
    cdef Py_ssize_t m = idx.shape[0]
    cdef Py_ssize_t a, b, ia, ib
    cdef long long nc = 0, nd = 0, tx = 0, ty = 0, tb = 0
    cdef int cx, cy
    with nogil:
        for a in range(m):
            ia = <Py_ssize_t> idx[a]
            for b in range(a + 1, m):
                ib = <Py_ssize_t> idx[b]
                cx = codes_x[ia, ib]
                cy = codes_y[ia, ib]
                if cx == 0:
                    if cy == 0:
                        tb += 1
                    else:
                        tx += 1
                elif cy == 0:
                    ty += 1
                elif cx == cy:
                    nc += 1
                else:
                    nd += 1
    return nc, nd, tx, ty, tb
