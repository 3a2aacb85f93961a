"""Pure-Python twin of the compiled enumeration kernel (same signature, same results)."""

from __future__ import annotations

import sys


def accumulate(max_part, min_gap, max_length, F, lo, hi, stride, sign_neg, gamma, out):
    m = len(lo)
    F = [[int(F[d][k]) for k in range(4)] for d in range(m)]
    lo = [int(x) for x in lo]
    hi = [int(x) for x in hi]
    stride = [int(x) for x in stride]
    sn = [int(x) & 1 for x in sign_neg]
    inc = [[None] * (max_part + 1) for _ in range(2)]
    sinc = [[0] * (max_part + 1) for _ in range(2)]
    for parity in range(2):
        for part in range(max_part + 1):
            ch, fh = (part + 1) // 2, part // 2
            inc[parity][part] = [F[d][2 * parity] * ch + F[d][2 * parity + 1] * fh
                                 for d in range(m)]
            sinc[parity][part] = (sn[2 * parity] * ch + sn[2 * parity + 1] * fh) & 1
    hi0 = hi[0]
    n_out = len(out)
    visited = 0
    dims = range(m)

    def record(vals, sgn, g):
        nonlocal visited
        visited += 1
        if gamma >= 0 and g != gamma:
            return
        key = 0
        for d in dims:
            v = vals[d]
            if v < lo[d] or v > hi[d]:
                return
            key += (v - lo[d]) * stride[d]
        if not 0 <= key < n_out:
            raise IndexError("accumulator key outside the output buffer")
        out[key] += -1 if sgn else 1

    def rec(depth, largest, vals, sgn, g):
        record(vals, sgn, g)
        if depth >= max_length or largest <= 0:
            return
        parity = depth & 1
        row = inc[parity]
        srow = sinc[parity]
        for part in range(1, largest + 1):
            step = row[part]
            if vals[0] + step[0] > hi0:
                break
            ng = g + part if parity == 0 else g - part
            if gamma >= 0:
                if parity == 1:
                    if gamma < ng or gamma > ng + part:
                        continue
                elif gamma > ng or gamma < ng - part:
                    continue
            rec(depth + 1, part - min_gap, [v + s for v, s in zip(vals, step)],
                sgn ^ srow[part], ng)

    limit = sys.getrecursionlimit()
    if max_length + 50 > limit:
        sys.setrecursionlimit(max_length + 100)
    rec(0, max_part, [0] * m, 0, 0)
    return visited
