"""Both sides of the generating-function identities.

Enumeration side: sums of substituted Boulet weights over bounded classes of
partitions, computed by the enumeration kernel.  Formula side: finite sums and
products built from Pochhammer symbols and Gaussian binomials in the
substituted ring.  The two sides share nothing except the ring they live in.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from . import kernels
from .transfer import class_size, transfer_sum
from .series import (
    DivergenceError,
    Ring,
    SignedMonomial,
    SparsePoly,
    StructuralError,
    TruncationSpec,
    add,
    mul,
    pochhammer,
    qbinomial,
    series_inverse,
)

BOULET_VARS = ("a", "b", "c", "d")
_FACTOR = re.compile(r"([a-z])(?:\^(-?\d+))?")


def parse_monomial(text: str) -> SignedMonomial:
    """Parse images such as ``q``, ``-1``, ``zq``, ``q/z``, ``1/z``, ``-q^2*z^-1``."""
    s = text.replace(" ", "")
    sign = 1
    while s.startswith(("-", "+")):
        if s[0] == "-":
            sign = -sign
        s = s[1:]
    num, _, den = s.partition("/")
    exps: dict[str, int] = {}
    for chunk, mult in ((num, 1), (den, -1)):
        chunk = chunk.replace("*", "")
        if chunk in ("", "1"):
            continue
        pos = 0
        for m in _FACTOR.finditer(chunk):
            if m.start() != pos:
                raise ValueError(f"cannot parse monomial {text!r}")
            pos = m.end()
            exps[m.group(1)] = exps.get(m.group(1), 0) + mult * int(m.group(2) or 1)
        if pos != len(chunk):
            raise ValueError(f"cannot parse monomial {text!r}")
    return SignedMonomial(sign, tuple(exps.items()))


@dataclass(frozen=True)
class Substitution:
    """Images of a, b, c, d."""

    a: SignedMonomial
    b: SignedMonomial
    c: SignedMonomial
    d: SignedMonomial
    name: str = ""

    @classmethod
    def parse(cls, text: str) -> "Substitution":
        if text == "formal":
            return FORMAL
        pieces = [p.strip() for p in text.strip("()").split(",")]
        if len(pieces) != 4:
            raise ValueError(f"a substitution needs four images, got {text!r}")
        return cls(*(parse_monomial(p) for p in pieces), name=text)

    @classmethod
    def rts(cls, r: int, t: int, s: int, eps: int) -> "Substitution":
        """``(q^r, q^t, -1, eps*q^s)``."""
        if eps not in (1, -1):
            raise ValueError("eps must be +1 or -1")
        return cls(SignedMonomial.of(q=r), SignedMonomial.of(q=t), SignedMonomial(-1),
                   SignedMonomial.of(eps, q=s), name=f"q^{r},q^{t},-1,{'-' if eps < 0 else ''}q^{s}")

    @property
    def images(self) -> tuple[SignedMonomial, ...]:
        return self.a, self.b, self.c, self.d

    @property
    def variables(self) -> tuple[str, ...]:
        names = set().union(*(m.variables for m in self.images))
        order = ("q", "z") + BOULET_VARS
        return tuple(v for v in order if v in names)

    def Q(self) -> SignedMonomial:
        return self.a * self.b * self.c * self.d

    def __str__(self) -> str:
        return self.name or ",".join(map(str, self.images))


FORMAL = Substitution(*(SignedMonomial.of(**{v: 1}) for v in BOULET_VARS), name="formal")

PRESETS: dict[str, Substitution] = {
    name: Substitution.parse(name)
    for name in (
        "q,q,1,1",
        "zq,zq,q/z,q/z",
        "qz,qz,1/z,1/z",
        "z,z,q/z,q/z",
        "q,q,-1,-1",
        "q,q,-1,1",
        "q,q,-1,-q",
        "-1,-1,q,q",
        "1,1,q,q",
    )
}
PRESETS["formal"] = FORMAL


def formal_ring(total_degree: int) -> Ring:
    return Ring(BOULET_VARS, TruncationSpec(total=total_degree))


# -- enumeration side ---------------------------------------------------------------


@dataclass
class _Plan:
    max_part: int
    max_length: int
    F: np.ndarray
    lo: list[int]
    hi: list[int]
    stride: list[int]
    key_dims: list[int]
    sign_neg: list[int]
    size: int
    box_lo: list[int]  # transfer box per key dim; wider than the window for Laurent dims
    box_hi: list[int]


def _inc(f: tuple[int, ...], parity: int, part: int) -> int:
    return f[2 * parity] * ((part + 1) // 2) + f[2 * parity + 1] * (part // 2)


def _plan(min_gap: int, N: int | None, sub: Substitution, ring: Ring) -> _Plan:
    images = sub.images
    for img in images:
        for v in img.variables:
            if v not in ring.vars:
                raise StructuralError(f"image variable {v!r} not in ring {ring.vars}")
    funcs = {v: tuple(img.exp(v) for img in images) for v in ring.vars}
    trunc = ring.trunc

    if trunc.total is not None:
        f0 = tuple(sum(funcs[v][k] for v in ring.vars) for k in range(4))
        h0 = trunc.total
    elif "q" in ring.vars and trunc.max_of("q") is not None:
        f0 = funcs["q"]
        h0 = trunc.max_of("q")
    elif "q" in ring.vars and N is not None and min_gap >= 1:
        f0 = funcs["q"]
        h0 = sum(max(_inc(f0, 0, p), _inc(f0, 1, p)) for p in range(1, N + 1))
    else:
        raise DivergenceError("enumeration needs a q-degree or total-degree bound")
    if any(w < 0 for w in f0):
        raise DivergenceError("pruning weights must be non-negative")

    if N is None:
        if f0[0] + f0[1] == 0:
            raise DivergenceError("largest part is unbounded under this substitution")
        N = 0
        while _inc(f0, 0, N + 1) <= h0:
            N += 1
    if min_gap >= 1:
        max_length = N
    else:
        pair = f0[0] + f0[2]  # two consecutive parts of size >= 1 spend at least this much
        if pair == 0:
            raise DivergenceError("ordinary partitions of unbounded length contribute")
        max_length = 2 * (h0 // pair) + 1

    rows = [f0]
    lo = [0]
    hi = [h0]
    key_dims = []
    box_lo: list[int] = []
    box_hi: list[int] = []
    for v in ring.vars:
        f = funcs[v]
        reach = max_length * max((abs(_inc(f, par, p)) for par in (0, 1) for p in range(N + 1)),
                                 default=0)
        vlo = max(trunc.min_of(v), -reach if any(w < 0 for w in f) else 0)
        vmax = trunc.max_of(v)
        vhi = reach if vmax is None else min(vmax, reach)
        if trunc.total is not None:
            vhi = min(vhi, trunc.total)
        if vhi < vlo:
            vhi = vlo - 1  # empty window: nothing recorded
        rows.append(f)
        lo.append(vlo)
        hi.append(vhi)
        key_dims.append(len(rows) - 1)
        if any(w < 0 for w in f):
            box_lo.append(-reach)
            box_hi.append(reach)
        else:
            # tails only grow in this dim, so cropping above is safe
            box_lo.append(0)
            box_hi.append(max(vhi, 0))
    stride = [0] * len(rows)
    size = 1
    for d in reversed(key_dims):
        stride[d] = size
        size *= max(hi[d] - lo[d] + 1, 1)
    sign_neg = [1 if img.sign < 0 else 0 for img in images]
    return _Plan(N, max_length, np.array(rows, dtype=np.int64), lo, hi, stride, key_dims,
                 sign_neg, size, box_lo, box_hi)


#: classes up to this many partitions are enumerated one by one; larger ones use the transfer sum
ENUMERATION_LIMIT = 1_000_000


def weighted_sum(min_gap: int, N: int | None, sub: Substitution, ring: Ring,
                 gamma: int | None = None, backend: str | None = None,
                 method: str = "auto") -> SparsePoly:
    """Sum of substituted Boulet weights over partitions with parts ``<= N`` and gaps ``>= min_gap``.

    ``N=None`` means no bound on the largest part (realised exactly: parts
    whose own weight exceeds the truncation cannot contribute).  ``gamma``
    restricts to partitions with that alternating sum.  ``method`` is
    ``"enumerate"`` (visit every partition), ``"transfer"`` (recursion on the
    first part) or ``"auto"`` (enumerate unless the class exceeds
    :data:`ENUMERATION_LIMIT`).
    """
    plan = _plan(min_gap, N, sub, ring)
    if method == "auto":
        try:
            size = class_size(plan.max_part, min_gap, tuple(int(x) for x in plan.F[0]),
                              int(plan.hi[0]))
        except OverflowError:
            size = ENUMERATION_LIMIT + 1
        method = "enumerate" if size <= ENUMERATION_LIMIT else "transfer"
    if method == "enumerate":
        return _by_enumeration(plan, min_gap, ring, gamma, backend)
    if method == "transfer":
        return _by_transfer(plan, min_gap, ring, gamma)
    raise ValueError(f"unknown method {method!r}")


def _by_enumeration(plan: _Plan, min_gap: int, ring: Ring, gamma: int | None,
                    backend: str | None) -> SparsePoly:
    out = np.zeros(plan.size, dtype=np.int64)
    kernels.accumulate(plan.max_part, min_gap, plan.max_length, plan.F, plan.lo, plan.hi,
                       plan.stride, plan.sign_neg, -1 if gamma is None else gamma, out,
                       backend=backend)
    terms = {}
    for key in np.flatnonzero(out):
        rem = int(key)
        vals = []
        for d in plan.key_dims:
            s = plan.stride[d]
            vals.append(rem // s + plan.lo[d])
            rem %= s
        terms[tuple(vals)] = int(out[key])
    return SparsePoly.from_terms(ring, terms)


def _by_transfer(plan: _Plan, min_gap: int, ring: Ring, gamma: int | None) -> SparsePoly:
    weights = [tuple(int(x) for x in plan.F[d]) for d in plan.key_dims]
    lo, hi = list(plan.box_lo), list(plan.box_hi)
    if gamma is not None:
        weights.append((1, 1, -1, -1))
        lo.append(-plan.max_part)
        hi.append(plan.max_part)
    raw = transfer_sum(plan.max_part, min_gap, weights, lo, hi, tuple(plan.sign_neg),
                       ring.trunc.total, len(plan.key_dims))
    if gamma is not None:
        raw = {e[:-1]: c for e, c in raw.items() if e[-1] == gamma}
    return SparsePoly.from_terms(ring, raw)


def psi_enum(N: int | None, sub: Substitution, ring: Ring, gamma: int | None = None,
             backend: str | None = None, method: str = "auto") -> SparsePoly:
    """Boulet generating function over distinct-part partitions with parts ``<= N``."""
    return weighted_sum(1, N, sub, ring, gamma, backend, method)


def phi_enum(N: int | None, sub: Substitution, ring: Ring, gamma: int | None = None,
             backend: str | None = None, method: str = "auto") -> SparsePoly:
    """Boulet generating function over ordinary partitions with parts ``<= N``."""
    return weighted_sum(0, N, sub, ring, gamma, backend, method)


# -- formula side -------------------------------------------------------------------


def _split(N: int) -> tuple[int, int]:
    if N < 0:
        raise ValueError("N must be non-negative")
    return divmod(N, 2)


def _inv(p: SparsePoly) -> SparsePoly:
    return series_inverse(p)


def psi_formula_iz(N: int, sub: Substitution, ring: Ring) -> SparsePoly:
    """Bounded distinct-part Boulet function as a single sum over the q-binomial in Q = abcd."""
    M, nu = _split(N)
    a, b, c, _ = sub.images
    Q = sub.Q()
    ab = a * b
    total = ring.zero()
    for i in range(M + 1):
        term = mul(qbinomial(M, i, Q, ring), pochhammer(-a, Q, M - i + nu, ring))
        term = mul(term, pochhammer(-c, Q, i, ring))
        total = add(total, mul(term, (ab ** i).to_poly(ring)))
    return total


def phi_formula_iz(N: int, sub: Substitution, ring: Ring) -> SparsePoly:
    M, nu = _split(N)
    a, _, c, _ = sub.images
    Q = sub.Q()
    denom = mul(pochhammer(a * c, Q, M + nu, ring), pochhammer(Q, Q, M, ring))
    return mul(psi_formula_iz(N, sub, ring), _inv(denom))


def psi_formula_bu(N: int, sub: Substitution, ring: Ring) -> SparsePoly:
    """Companion sum; the ratio (ac;Q)_{M+nu}/(ac;Q)_{i+nu} is the product (ac Q^{i+nu};Q)_{M-i}."""
    M, nu = _split(N)
    a, b, c, _ = sub.images
    Q = sub.Q()
    ab, ac, abc = a * b, a * c, a * b * c
    total = ring.zero()
    for i in range(M + 1):
        term = mul(qbinomial(M, i, Q, ring), pochhammer(-a, Q, i + nu, ring))
        term = mul(term, pochhammer(-abc, Q, i, ring))
        term = mul(term, pochhammer(ac * Q ** (i + nu), Q, M - i, ring))
        total = add(total, mul(term, (ab ** (M - i)).to_poly(ring)))
    return total


def phi_formula_bu(N: int, sub: Substitution, ring: Ring) -> SparsePoly:
    M, nu = _split(N)
    a, b, c, _ = sub.images
    Q = sub.Q()
    ab, ac, abc = a * b, a * c, a * b * c
    total = ring.zero()
    for i in range(M + 1):
        term = mul(qbinomial(M, i, Q, ring), pochhammer(-a, Q, i + nu, ring))
        term = mul(term, pochhammer(-abc, Q, i, ring))
        term = mul(term, _inv(pochhammer(ac, Q, i + nu, ring)))
        total = add(total, mul(term, (ab ** (M - i)).to_poly(ring)))
    return mul(total, _inv(pochhammer(Q, Q, M, ring)))


def boulet_product(kind: str, sub: Substitution, ring: Ring) -> SparsePoly:
    """Infinite-product side: (-a,-abc;Q)_inf / (ab;Q)_inf, with (ac,Q;Q)_inf also below for 'phi'."""
    a, b, c, _ = sub.images
    Q = sub.Q()
    num = mul(pochhammer(-a, Q, None, ring), pochhammer(-(a * b * c), Q, None, ring))
    den = pochhammer(a * b, Q, None, ring)
    if kind == "phi":
        den = mul(den, mul(pochhammer(a * c, Q, None, ring), pochhammer(Q, Q, None, ring)))
    elif kind != "psi":
        raise ValueError(f"kind must be 'psi' or 'phi', got {kind!r}")
    return mul(num, _inv(den))


_q = SignedMonomial.of(q=1)


def rhs_schmidt_sum(N: int, variant: str, kind: str, ring: Ring) -> SparsePoly:
    """Finite sums for the O-weighted bounded classes; ``variant`` is 'old' (base q^2) or 'new' (base q)."""
    if N < 0:
        raise ValueError("N must be non-negative")
    if variant == "old":
        M, nu = _split(N)
        q2 = _q ** 2
        total = ring.zero()
        for i in range(M + 1):
            term = mul(qbinomial(M, i, q2, ring), pochhammer(-_q, q2, M - i + nu, ring))
            term = mul(term, pochhammer(SignedMonomial(-1), q2, i, ring))
            total = add(total, mul(term, ring.mono(q=2 * i)))
        if kind == "phi":
            total = mul(total, _inv(pochhammer(_q, _q, N, ring)))
        return total
    if variant == "new":
        return binomial_sum(N, kind, ring, shift=1)
    raise ValueError(f"variant must be 'old' or 'new', got {variant!r}")


def rhs_z_refined(N: int, kind: str, ring: Ring) -> SparsePoly:
    """``sum_k q^k z^k [N k]_q`` ('psi') or ``sum_k q^k z^k / ((q;q)_k (q;q)_{N-k})`` ('phi')."""
    total = ring.zero()
    for k in range(N + 1):
        if kind == "psi":
            term = qbinomial(N, k, _q, ring)
        else:
            term = _inv(mul(pochhammer(_q, _q, k, ring), pochhammer(_q, _q, N - k, ring)))
        total = add(total, mul(term, ring.mono(q=k, z=k)))
    return total


def binomial_sum(N: int, kind: str, ring: Ring, shift: int = 0) -> SparsePoly:
    """``sum_i [N i]_q q^(shift*i)`` ('psi') or ``sum_i q^(shift*i) / ((q;q)_i (q;q)_{N-i})`` ('phi')."""
    if N < 0:
        raise ValueError("N must be non-negative")
    total = ring.zero()
    for i in range(N + 1):
        if kind == "psi":
            term = qbinomial(N, i, _q, ring)
        else:
            term = _inv(mul(pochhammer(_q, _q, i, ring), pochhammer(_q, _q, N - i, ring)))
        total = add(total, mul(term, ring.mono(q=shift * i)))
    return total
