"""Backend selection for the enumeration kernel.

``accumulate`` walks every partition with parts ``<= max_part``, consecutive
differences ``>= min_gap`` and at most ``max_length`` parts.  For each one it
forms the Boulet exponents ``e = (ceilO, floorO, ceilE, floorE)`` and the
values ``v[d] = F[d] . e``.  Dimension 0 must have non-negative weights and is
used for pruning (``v[0] <= hi[0]``); a partition is recorded when every
``v[d]`` lies in ``[lo[d], hi[d]]`` and, if ``gamma >= 0``, its alternating sum
equals ``gamma``.  Recording adds ``(-1)**(sign_neg . e)`` to
``out[sum((v[d] - lo[d]) * stride[d])]``.  The return value is the number of
partitions visited.

The compiled extension is used when it imports; set ``QSCHMIDT_PURE_PYTHON=1``
to force the fallback.
"""

from __future__ import annotations

import os

from . import _fallback

try:
    from ._kernels import accumulate as _compiled_accumulate
except ImportError:  # extension not built
    _compiled_accumulate = None

BACKENDS = {"python": _fallback.accumulate}
if _compiled_accumulate is not None:
    BACKENDS["compiled"] = _compiled_accumulate

if os.environ.get("QSCHMIDT_PURE_PYTHON") or _compiled_accumulate is None:
    BACKEND = "python"
else:
    BACKEND = "compiled"


def accumulate(max_part, min_gap, max_length, F, lo, hi, stride, sign_neg, gamma, out,
               backend: str | None = None) -> int:
    return BACKENDS[backend or BACKEND](max_part, min_gap, max_length, F, lo, hi, stride,
                                        sign_neg, gamma, out)
