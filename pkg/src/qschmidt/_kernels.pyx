# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled enumeration kernel; see :mod:`qschmidt.kernels` for the contract."""

import numpy as np

from libc.stdlib cimport malloc, free

cdef enum:
    MAXDIM = 8


cdef struct Ctx:
    int m
    int gap
    int max_part
    int max_length
    long long* inc      # [2][max_part + 1][m]
    int* sinc           # [2][max_part + 1]
    long long lo[MAXDIM]
    long long hi[MAXDIM]
    long long stride[MAXDIM]
    long long gamma
    long long* out
    long long out_len
    long long visited
    int overflow


cdef inline long long* inc_at(Ctx* c, int parity, int part) nogil:
    return c.inc + (parity * (c.max_part + 1) + part) * c.m


cdef void record(Ctx* c, long long* vals, int sgn, long long g) nogil:
    cdef int d
    cdef long long key = 0
    c.visited += 1
    if c.gamma >= 0 and g != c.gamma:
        return
    for d in range(c.m):
        if vals[d] < c.lo[d] or vals[d] > c.hi[d]:
            return
        key += (vals[d] - c.lo[d]) * c.stride[d]
    if key < 0 or key >= c.out_len:
        c.overflow = 1
        return
    if sgn:
        c.out[key] -= 1
    else:
        c.out[key] += 1


cdef void rec(Ctx* c, int depth, int largest, long long* vals, int sgn, long long g) nogil:
    cdef int part, d, parity
    cdef long long* step
    cdef long long* nxt = vals + c.m
    cdef long long ng
    record(c, vals, sgn, g)
    if depth >= c.max_length or largest <= 0:
        return
    parity = depth & 1
    for part in range(1, largest + 1):
        step = inc_at(c, parity, part)
        if vals[0] + step[0] > c.hi[0]:
            break  # dim 0 increments are non-decreasing in part
        if parity == 0:
            ng = g + part
        else:
            ng = g - part
        if c.gamma >= 0:
            # remaining parts move the alternating sum within [ng, ng+part] or [ng-part, ng]
            if parity == 1:
                if c.gamma < ng or c.gamma > ng + part:
                    continue
            else:
                if c.gamma > ng or c.gamma < ng - part:
                    continue
        for d in range(c.m):
            nxt[d] = vals[d] + step[d]
        rec(c, depth + 1, part - c.gap, nxt,
            sgn ^ c.sinc[parity * (c.max_part + 1) + part], ng)


def accumulate(int max_part, int min_gap, int max_length, F, lo, hi, stride, sign_neg,
               long long gamma, long long[::1] out):
    """Enumerate and accumulate; returns the number of partitions visited."""
    cdef Ctx c
    cdef int m = len(lo)
    cdef int parity, part, d, k
    cdef long long ceil_h, floor_h
    cdef long long* vals
    if m < 1 or m > MAXDIM:
        raise ValueError("between 1 and 8 dimensions are supported")
    Fa = np.ascontiguousarray(F, dtype=np.int64).reshape(m, 4)
    sn = [int(x) & 1 for x in sign_neg]
    c.m = m
    c.gap = min_gap
    c.max_part = max_part
    c.max_length = max_length
    c.gamma = gamma
    c.out = NULL
    if out.shape[0] > 0:
        c.out = &out[0]
    c.out_len = out.shape[0]
    c.visited = 0
    c.overflow = 0
    for d in range(m):
        c.lo[d] = lo[d]
        c.hi[d] = hi[d]
        c.stride[d] = stride[d]
    c.inc = <long long*> malloc(2 * (max_part + 1) * m * sizeof(long long))
    c.sinc = <int*> malloc(2 * (max_part + 1) * sizeof(int))
    vals = <long long*> malloc((max_length + 2) * m * sizeof(long long))
    if c.inc == NULL or c.sinc == NULL or vals == NULL:
        free(c.inc); free(c.sinc); free(vals)
        raise MemoryError()
    try:
        for parity in range(2):
            for part in range(max_part + 1):
                ceil_h = (part + 1) // 2
                floor_h = part // 2
                for d in range(m):
                    c.inc[(parity * (max_part + 1) + part) * m + d] = (
                        Fa[d, 2 * parity] * ceil_h + Fa[d, 2 * parity + 1] * floor_h)
                c.sinc[parity * (max_part + 1) + part] = (
                    sn[2 * parity] * ceil_h + sn[2 * parity + 1] * floor_h) & 1
        for d in range(m):
            vals[d] = 0
        with nogil:
            rec(&c, 0, max_part, vals, 0, 0)
    finally:
        free(c.inc)
        free(c.sinc)
        free(vals)
    if c.overflow:
        raise IndexError("accumulator key outside the output buffer")
    return c.visited
