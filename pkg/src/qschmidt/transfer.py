"""Transfer-matrix evaluation of weighted partition sums.

Computes the same quantity as the enumeration kernel without visiting
partitions one by one.  ``F_p(m)`` is the weighted sum over all admissible
tails whose first part is at most ``m`` and sits at an odd (``p = 0``) or even
(``p = 1``) index.  Choosing whether the first part equals ``m`` gives

    F_p(m) = F_p(m-1) + w_p(m) * F_{1-p}(m - gap).

With ``gap = 0`` the two parities reference each other at the same ``m``; a
run of repeated pairs ``(m, m)`` is summed as a geometric series, which
terminates because each pair has positive pruning weight.

Values are dense ``int64`` arrays over a box of exponent vectors; multiplying
by a monomial is an array shift that discards whatever leaves the box.  The
box is chosen so that no partial tail sum that could still reach the target
window is ever discarded.
"""

from __future__ import annotations

import numpy as np

_GUARD = 1 << 60


def _shift(arr: np.ndarray, vec: tuple[int, ...], mask: np.ndarray | None) -> np.ndarray:
    out = np.zeros_like(arr)
    src, dst = [], []
    for v, n in zip(vec, arr.shape):
        if abs(v) >= n:
            return out
        if v >= 0:
            src.append(slice(0, n - v))
            dst.append(slice(v, n))
        else:
            src.append(slice(-v, n))
            dst.append(slice(0, n + v))
    out[tuple(dst)] = arr[tuple(src)]
    if mask is not None:
        out *= mask
    return out


def transfer_sum(max_part: int, min_gap: int, weights: list[tuple[int, int, int, int]],
                 lo: list[int], hi: list[int], sign_neg: tuple[int, int, int, int],
                 total: int | None = None, total_dims: int | None = None
                 ) -> dict[tuple[int, ...], int]:
    """Weighted sum over partitions with parts ``<= max_part`` and gaps ``>= min_gap``.

    ``weights[d]`` are the coefficients of (ceilO, floorO, ceilE, floorE) in
    dimension ``d``; the box ``[lo[d], hi[d]]`` must contain 0 and every
    partial tail value that matters.  ``total`` caps the sum over the first
    ``total_dims`` dimensions (default all), which must be non-negative.
    Returns ``{exponents: coeff}``.
    """
    shape = tuple(h - l + 1 for l, h in zip(lo, hi))
    if any(n <= 0 for n in shape) or any(l > 0 or h < 0 for l, h in zip(lo, hi)):
        raise ValueError("the box must contain the origin")
    mask = None
    if total is not None:
        k = len(shape) if total_dims is None else total_dims
        grids = np.indices(shape)[:k].sum(axis=0) + sum(lo[:k])
        mask = (grids <= total).astype(np.int64)

    one = np.zeros(shape, dtype=np.int64)
    one[tuple(-l for l in lo)] = 1

    def step(parity: int, part: int):
        ch, fh = (part + 1) // 2, part // 2
        vec = tuple(w[2 * parity] * ch + w[2 * parity + 1] * fh for w in weights)
        neg = (sign_neg[2 * parity] * ch + sign_neg[2 * parity + 1] * fh) & 1
        return vec, -1 if neg else 1

    # table[p][m] = F_p(m); F_p(m) = 1 for m <= 0
    table = [[one], [one]]

    def F(p: int, m: int) -> np.ndarray:
        return table[p][m] if m >= 0 else one

    for m in range(1, max_part + 1):
        (v0, s0), (v1, s1) = step(0, m), step(1, m)
        if min_gap >= 1:
            f0 = table[0][m - 1] + s0 * _shift(F(1, m - min_gap), v0, mask)
            f1 = table[1][m - 1] + s1 * _shift(F(0, m - min_gap), v1, mask)
        else:
            acc = table[0][m - 1] + s0 * _shift(table[1][m - 1], v0, mask)
            pair = tuple(a + b for a, b in zip(v0, v1))
            if not any(pair) or all(x <= 0 for x in pair):
                raise ValueError("repeated pairs of parts carry no weight; the sum diverges")
            term = acc
            f0 = acc.copy()
            for _ in range(sum(shape) + 1):
                term = (s0 * s1) * _shift(term, pair, mask)
                if not term.any():
                    break
                f0 += term
            else:
                raise ValueError("repeated pairs of parts never leave the box; the sum diverges")
            f1 = table[1][m - 1] + s1 * _shift(f0, v1, mask)
        if np.abs(f0).max(initial=0) > _GUARD or np.abs(f1).max(initial=0) > _GUARD:
            raise OverflowError("coefficient too large for the int64 transfer buffer")
        table[0].append(f0)
        table[1].append(f1)

    result = table[0][max_part]
    idx = np.nonzero(result)
    return {tuple(int(i) + l for i, l in zip(pos, lo)): int(result[pos])
            for pos in zip(*idx)}


def class_size(max_part: int, min_gap: int, cost: tuple[int, int, int, int], budget: int) -> int:
    """Number of partitions whose pruning cost is at most ``budget`` (what enumeration would visit)."""
    counts = transfer_sum(max_part, min_gap, [cost], [0], [budget], (0, 0, 0, 0))
    return sum(counts.values())
