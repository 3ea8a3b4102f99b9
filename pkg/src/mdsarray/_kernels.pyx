# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the kernels in `_kernels_py.py`."""

import numpy as np

NAME = "compiled"


def matmul(const unsigned short[:, ::1] a, const unsigned short[:, ::1] b,
           const unsigned short[::1] expt, const int[::1] logt, int p):
    cdef Py_ssize_t m = a.shape[0]
    cdef Py_ssize_t kk = a.shape[1]
    cdef Py_ssize_t n = b.shape[1]
    out_arr = np.zeros((m, n), dtype=np.uint16)
    cdef unsigned short[:, ::1] out = out_arr
    cdef Py_ssize_t i, j, k
    cdef int la
    cdef long long acc
    if p == 2:
        for i in range(m):
            for k in range(kk):
                if a[i, k] == 0:
                    continue
                la = logt[a[i, k]]
                for j in range(n):
                    out[i, j] ^= expt[la + logt[b[k, j]]]
    else:
        for i in range(m):
            for j in range(n):
                acc = 0
                for k in range(kk):
                    acc += <long long> a[i, k] * b[k, j]
                out[i, j] = <unsigned short> (acc % p)
    return out_arr


def row_reduce(unsigned short[:, ::1] m, int main_cols,
               const unsigned short[::1] expt, const int[::1] logt,
               int qm1, int p, bint reduced):
    cdef Py_ssize_t rows = m.shape[0]
    cdef Py_ssize_t cols = m.shape[1]
    cdef Py_ssize_t rank = 0
    cdef Py_ssize_t c, r, j, pr, rstart
    cdef int piv, linv, lf
    cdef unsigned short tmp
    cdef long long finv, fv
    for c in range(main_cols):
        pr = -1
        for r in range(rank, rows):
            if m[r, c] != 0:
                pr = r
                break
        if pr < 0:
            continue
        if pr != rank:
            for j in range(cols):
                tmp = m[rank, j]
                m[rank, j] = m[pr, j]
                m[pr, j] = tmp
        piv = m[rank, c]
        rstart = 0 if reduced else rank + 1
        if p == 2:
            if piv != 1:
                linv = qm1 - logt[piv]
                for j in range(c, cols):
                    m[rank, j] = expt[logt[m[rank, j]] + linv]
            for r in range(rstart, rows):
                if r == rank or m[r, c] == 0:
                    continue
                lf = logt[m[r, c]]
                for j in range(c, cols):
                    m[r, j] ^= expt[logt[m[rank, j]] + lf]
        else:
            if piv != 1:
                finv = expt[qm1 - logt[piv]]
                for j in range(c, cols):
                    m[rank, j] = <unsigned short> ((m[rank, j] * finv) % p)
            for r in range(rstart, rows):
                if r == rank or m[r, c] == 0:
                    continue
                fv = m[r, c]
                for j in range(c, cols):
                    m[r, j] = <unsigned short> ((m[r, j] + (p - fv) * m[rank, j]) % p)
        rank += 1
        if rank == rows:
            break
    return rank
