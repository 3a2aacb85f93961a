"""Catalogue of checkable identities and the engine that verifies them.

Every family knows how to build both sides of its identity for one parameter
set, and how to sweep a default grid of parameter sets.  Series families
compare truncated polynomials term by term; count families compare integer
sequences, stored as polynomials in ``q`` (the coefficient of ``q^n`` is the
count for ``n``) so that both modes report mismatches the same way.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Callable, Iterable, Iterator

from .genfun import (
    FORMAL,
    PRESETS,
    Substitution,
    binomial_sum,
    boulet_product,
    formal_ring,
    phi_enum,
    phi_formula_bu,
    phi_formula_iz,
    psi_enum,
    psi_formula_bu,
    psi_formula_iz,
    rhs_schmidt_sum,
    rhs_z_refined,
)
from .partitions import (
    ClassFilter,
    Partition,
    count_two_color,
    enumerate_partitions,
    enumerate_two_color,
    hook_counts,
    partitions_of,
    rr_weight,
    rr_weight_hat,
    stats,
)
from .series import (
    Ring,
    SignedMonomial,
    SparsePoly,
    TruncationSpec,
    add,
    coeff_of,
    first_difference,
    mul,
    pochhammer,
    qbinomial,
    render,
    render_monomial,
    rogers_szego,
    series_inverse,
    substitute,
)


class ParameterError(ValueError):
    """Missing, unknown or out-of-range identity parameters."""


PARAM_ORDER = ("kind", "sub", "N", "j", "n", "r", "t", "s", "eps", "degree")

q1 = SignedMonomial.of(q=1)


def q_ring(degree: int) -> Ring:
    return Ring(("q",), TruncationSpec.q_only(degree))


def qz_ring(degree: int, z_bound: int, z_min: int | None = None) -> Ring:
    return Ring(("q", "z"), TruncationSpec.qz(degree, z_bound, z_min))


def ring_for(sub: Substitution, degree: int, N: int = 0) -> Ring:
    """Smallest ring holding every intermediate of both sides under ``sub``."""
    if sub == FORMAL:
        return formal_ring(degree)
    if "z" in sub.variables:
        # formula intermediates carry z-powers bounded by the q-degree plus 2N
        return qz_ring(degree, degree + 2 * N)
    return q_ring(degree)


# -- bounds ----------------------------------------------------------------------------


@dataclass(frozen=True)
class BoundsProfile:
    """Default sweep bounds; every field can be overridden per run."""

    N_max: int = 10
    degree: int = 40
    count_degree: int = 40
    four_var_N_max: int = 6
    four_var_degree: int = 16
    rts_max: int = 2
    eps_values: tuple[int, ...] = (1, -1)
    rs_N_max: int = 12
    link_N_max: int = 10
    link_z_bound: int = 10
    # single-value overrides (None = sweep the default range)
    N: int | None = None
    j: int | None = None
    n: int | None = None
    r: int | None = None
    t: int | None = None
    s: int | None = None
    eps: int | None = None
    kind: str | None = None
    sub: str | None = None
    degree_override: int | None = None
    four_variable: bool = False

    def Ns(self, top: int | None = None) -> range | list[int]:
        return [self.N] if self.N is not None else range((self.N_max if top is None else top) + 1)

    def js(self, N: int | None) -> range | list[int]:
        if self.j is not None:
            return [self.j]
        return range((self.N_max if N is None else N) + 1)

    def kinds(self) -> list[str]:
        return [self.kind] if self.kind else ["psi", "phi"]

    def rts_grid(self) -> Iterator[tuple[int, int, int, int]]:
        def vals(v):
            return [v] if v is not None else range(self.rts_max + 1)
        for r in vals(self.r):
            for t in vals(self.t):
                for s in vals(self.s):
                    for e in ([self.eps] if self.eps is not None else self.eps_values):
                        yield r, t, s, e


DEFAULT_PROFILE = BoundsProfile()


# -- families --------------------------------------------------------------------------


Sides = Callable[[dict], tuple[SparsePoly, SparsePoly]]


@dataclass(frozen=True)
class Family:
    id: str
    title: str
    statement: str
    mode: str  # "series" or "count"
    params: tuple[str, ...]
    sides: Sides = field(repr=False)
    grid: Callable[[BoundsProfile], Iterable[dict]] = field(repr=False)
    # count families: partitions listed on each side of a table
    table: Callable[[dict], tuple[list, list]] | None = field(default=None, repr=False)
    projections: tuple[str, ...] = ()

    def describe(self) -> dict:
        return {"id": self.id, "title": self.title, "statement": self.statement,
                "mode": self.mode, "params": list(self.params)}


_FAMILIES: dict[str, Family] = {}


def _register(fam: Family) -> Family:
    _FAMILIES[fam.id] = fam
    return fam


def registry() -> list[Family]:
    return list(_FAMILIES.values())


def lookup(family_id: str) -> Family | None:
    return _FAMILIES.get(family_id)


def _kind(p: dict) -> str:
    return p.get("kind", "psi")


def _sub(p: dict) -> Substitution:
    name = p.get("sub", "q,q,1,1")
    return PRESETS[name] if name in PRESETS else Substitution.parse(name)


def _enum(kind: str):
    return psi_enum if kind == "psi" else phi_enum


def _inv(p: SparsePoly) -> SparsePoly:
    return series_inverse(p)


def _poch(first: SignedMonomial, ratio: SignedMonomial, length, ring: Ring) -> SparsePoly:
    return pochhammer(first, ratio, length, ring)


# four-variable products and finite sums ------------------------------------------------

PRODUCT_SUBS = ("formal", "q,q,1,1", "q,q,-1,-1", "q,q,-1,1", "q,q,-1,-q",
                "zq,zq,q/z,q/z", "qz,qz,1/z,1/z")
FINITE_SUBS = PRODUCT_SUBS + ("z,z,q/z,q/z", "1,1,q,q", "-1,-1,q,q")


def _sub_grid(pr: BoundsProfile, subs: tuple[str, ...], with_N: bool):
    if pr.four_variable:
        subs = ("formal",)
    elif pr.sub is not None:
        subs = (pr.sub,)
    for name in subs:
        if not with_N:
            yield {"sub": name}
            continue
        top = pr.four_var_N_max if name == "formal" else pr.N_max
        for N in pr.Ns(top):
            yield {"sub": name, "N": N}


def _product_sides(kind: str) -> Sides:
    def sides(p):
        sub = _sub(p)
        ring = ring_for(sub, p["degree"])
        return _enum(kind)(None, sub, ring), boulet_product(kind, sub, ring)
    return sides


for _k, _stmt in (("psi", "sum over distinct-part partitions of w = (-a,-abc;Q)_inf / (ab;Q)_inf"),
                  ("phi", "sum over all partitions of w = (-a,-abc;Q)_inf / (ab,ac,Q;Q)_inf")):
    _register(Family(
        f"boulet-{_k}-product",
        f"Four-variable weight product ({'distinct parts' if _k == 'psi' else 'all partitions'})",
        _stmt + "; w = a^ceilO b^floorO c^ceilE d^floorE, Q = abcd",
        "series", ("sub", "degree"), _product_sides(_k),
        lambda pr: _sub_grid(pr, PRODUCT_SUBS, False)))


def _finite_sides(kind: str, formula) -> Sides:
    def sides(p):
        sub = _sub(p)
        ring = ring_for(sub, p["degree"], p["N"])
        return _enum(kind)(p["N"], sub, ring), formula(p["N"], sub, ring)
    return sides


_register(Family(
    "iz-psi", "Bounded distinct-part weight sum, binomial form",
    "Psi_{2M+v} = sum_i [M i]_Q (-a;Q)_{M-i+v} (-c;Q)_i (ab)^i",
    "series", ("sub", "N", "degree"), _finite_sides("psi", psi_formula_iz),
    lambda pr: _sub_grid(pr, FINITE_SUBS, True)))
_register(Family(
    "iz-phi", "Bounded all-partition weight sum, binomial form",
    "Phi_{2M+v} = sum_i [M i]_Q (-a;Q)_{M-i+v} (-c;Q)_i (ab)^i / ((ac;Q)_{M+v} (Q;Q)_M)",
    "series", ("sub", "N", "degree"), _finite_sides("phi", phi_formula_iz),
    lambda pr: _sub_grid(pr, FINITE_SUBS, True)))
_register(Family(
    "bu-psi", "Bounded distinct-part weight sum, combinatorial form",
    "Psi_{2M+v} = sum_i [M i]_Q (-a;Q)_{i+v} (-abc;Q)_i (acQ^{i+v};Q)_{M-i} (ab)^{M-i}",
    "series", ("sub", "N", "degree"), _finite_sides("psi", psi_formula_bu),
    lambda pr: _sub_grid(pr, FINITE_SUBS, True)))
_register(Family(
    "bu-phi", "Bounded all-partition weight sum, combinatorial form",
    "Phi_{2M+v} = sum_i [M i]_Q (-a;Q)_{i+v} (-abc;Q)_i (ab)^{M-i} / ((ac;Q)_{i+v} (Q;Q)_M)",
    "series", ("sub", "N", "degree"), _finite_sides("phi", phi_formula_bu),
    lambda pr: _sub_grid(pr, FINITE_SUBS, True)))


# Schmidt-type products ---------------------------------------------------------------

def _schmidt_sides(kind: str) -> Sides:
    def sides(p):
        ring = q_ring(p["degree"])
        rhs = _inv(_poch(q1, q1, None, ring))
        if kind == "phi":
            rhs = mul(rhs, rhs)
        return _enum(kind)(None, PRESETS["q,q,1,1"], ring), rhs
    return sides


_register(Family(
    "schmidt", "Odd-indexed sum over distinct parts counts all partitions",
    "sum over distinct-part partitions of q^O = 1/(q;q)_inf",
    "series", ("degree",), _schmidt_sides("psi"), lambda pr: [{}]))
_register(Family(
    "uap", "Odd-indexed sum over all partitions counts 2-color partitions",
    "sum over all partitions of q^O = 1/(q;q)_inf^2",
    "series", ("degree",), _schmidt_sides("phi"), lambda pr: [{}]))


# Rogers-Szego ------------------------------------------------------------------------

def _rs_at_zq_q2(N: int, ring: Ring) -> SparsePoly:
    return substitute(rogers_szego(N, ring),
                      {"z": SignedMonomial.of(q=1, z=1), "q": SignedMonomial.of(q=2)}, ring)


def _rs_sides(p):
    N = p["N"]
    M, nu = divmod(N, 2)
    ring = qz_ring(p["degree"], N)
    q4 = SignedMonomial.of(q=4)
    zq = SignedMonomial.of(q=1, z=1)
    q_over_z = SignedMonomial.of(q=1, z=-1)
    rhs = ring.zero()
    for k in range(M + 1):
        term = mul(qbinomial(M, k, q4, ring), _poch(-zq, q4, M - k + nu, ring))
        term = mul(term, _poch(-q_over_z, q4, k, ring))
        rhs = add(rhs, mul(term, (zq ** (2 * k)).to_poly(ring)))
    return _rs_at_zq_q2(N, ring), rhs


_register(Family(
    "rogers-szego", "Rogers-Szego polynomial at (zq, q^2), binomial form",
    "H_{2M+v}(zq,q^2) = sum_k [M k]_{q^4} (-zq;q^4)_{M-k+v} (-q/z;q^4)_k (zq)^{2k}",
    "series", ("N", "degree"), _rs_sides,
    lambda pr: ({"N": N} for N in pr.Ns(pr.rs_N_max))))


def _link_sides(p):
    ring = qz_ring(p["degree"], max(DEFAULT_PROFILE.link_z_bound, p["N"]))
    return _rs_at_zq_q2(p["N"], ring), psi_enum(p["N"], PRESETS["zq,zq,q/z,q/z"], ring)


_register(Family(
    "rs-psi-link", "Rogers-Szego polynomial as a distinct-part weight sum",
    "H_N(zq,q^2) = Psi_N(zq,zq,q/z,q/z)",
    "series", ("N", "degree"), _link_sides,
    lambda pr: ({"N": N} for N in pr.Ns(pr.link_N_max))))


def _alt_sides(p):
    N = p["N"]
    ring = qz_ring(p["degree"], N, 0)
    terms: dict[tuple[int, int], int] = {}
    for pi in enumerate_partitions(ClassFilter.distinct(max_part=N, cap=("size", p["degree"]))):
        key = (pi.size, stats(pi).gamma)
        terms[key] = terms.get(key, 0) + 1
    lhs = SparsePoly.from_terms(ring, terms)
    q2 = SignedMonomial.of(q=2)
    rhs = ring.zero()
    for k in range(N + 1):
        rhs = add(rhs, mul(qbinomial(N, k, q2, ring), ring.mono(q=k, z=k)))
    return lhs, rhs


_register(Family(
    "psi-alt-genfun", "Size and alternating sum over bounded distinct parts",
    "sum over distinct parts <= N of q^|pi| z^gamma = sum_k q^k [N k]_{q^2} z^k",
    "series", ("N", "degree"), _alt_sides,
    lambda pr: ({"N": N} for N in pr.Ns(pr.link_N_max))))


def _zref_sides(kind: str) -> Sides:
    def sides(p):
        N = p["N"]
        ring = qz_ring(p["degree"], N, 0)
        return (_enum(kind)(N, PRESETS["qz,qz,1/z,1/z"], ring), rhs_z_refined(N, kind, ring))
    return sides


def _zref_grid(pr: BoundsProfile):
    for N in pr.Ns():
        yield {"N": N} if pr.j is None else {"N": N, "j": pr.j}


_register(Family(
    "z-refined-psi", "Odd-indexed sum and alternating sum over bounded distinct parts",
    "sum over distinct parts <= N of q^O z^gamma = sum_k q^k z^k [N k]_q",
    "series", ("N", "j", "n", "degree"), _zref_sides("psi"), _zref_grid,
    projections=("j", "n")))
_register(Family(
    "z-refined-phi", "Odd-indexed sum and alternating sum over bounded partitions",
    "sum over partitions with parts <= N of q^O z^gamma = sum_k q^k z^k / ((q;q)_k (q;q)_{N-k})",
    "series", ("N", "j", "n", "degree"), _zref_sides("phi"), _zref_grid,
    projections=("j", "n")))


def _fs_sides(variant: str) -> Sides:
    def sides(p):
        ring = q_ring(p["degree"])
        kind = _kind(p)
        return (_enum(kind)(p["N"], PRESETS["q,q,1,1"], ring),
                rhs_schmidt_sum(p["N"], variant, kind, ring))
    return sides


def _kind_N_grid(pr: BoundsProfile):
    for kind in pr.kinds():
        for N in pr.Ns():
            yield {"kind": kind, "N": N}


_register(Family(
    "finite-schmidt-old", "Bounded odd-indexed sums, base q^2 form",
    "Psi_{2M+v}(q,q,1,1) = sum_i [M i]_{q^2} (-q;q^2)_{M-i+v} (-1;q^2)_i q^{2i}; "
    "Phi_N(q,q,1,1) is the same sum over (q;q)_N",
    "series", ("kind", "N", "degree"), _fs_sides("old"), _kind_N_grid))
_register(Family(
    "finite-schmidt-new", "Bounded odd-indexed sums, base q form",
    "Psi_N(q,q,1,1) = sum_i [N i]_q q^i; Phi_N(q,q,1,1) = sum_i q^i / ((q;q)_i (q;q)_{N-i})",
    "series", ("kind", "N", "degree"), _fs_sides("new"), _kind_N_grid))


# counting identities -----------------------------------------------------------------

def _counts_poly(counts: list[int], ring: Ring) -> SparsePoly:
    return ring.poly([(n, c) for n, c in enumerate(counts)])


def _kernel_counts(kind: str, N: int, sub: str, degree: int, gamma: int | None) -> SparsePoly:
    return _enum(kind)(N, PRESETS[sub], q_ring(degree), gamma=gamma)


@lru_cache(maxsize=256)
def _cached_two_color(n_max, rule, N, j):
    return tuple(count_two_color(n_max, rule, N, j))


@lru_cache(maxsize=256)
def _cached_hooks(n_max, N, length):
    return tuple(hook_counts(n_max, N, length))


def _count_grid(with_j: bool):
    def grid(pr: BoundsProfile):
        for N in pr.Ns():
            if not with_j:
                yield {"N": N}
                continue
            for j in pr.js(N):
                yield {"N": N, "j": j}
    return grid


def _o_class(distinct: bool, N: int, n: int, j: int | None) -> list[Partition]:
    flt = ClassFilter(min_gap=1 if distinct else 0, max_part=N, cap=("O", n))
    return [p for p in enumerate_partitions(flt)
            if stats(p).O == n and (j is None or stats(p).gamma == j)]


def _e_class(distinct: bool, j: int, n: int) -> list[Partition]:
    flt = ClassFilter(min_gap=1 if distinct else 0, max_part=j + n, cap=("E", n))
    return [p for p in enumerate_partitions(flt) if stats(p).E == n and stats(p).gamma == j]


def _hook_side(n: int, N: int, length: int | None) -> list[Partition]:
    return [p for p in partitions_of(n, max_part=N)
            if stats(p).max_hook <= N and (length is None or len(p) == length)]


_register(Family(
    "hook-count", "Distinct parts by odd-indexed sum vs partitions with bounded hook",
    "#{distinct parts <= N, O = n} = #{partitions of n with largest hook <= N}",
    "count", ("N", "n", "degree"),
    lambda p: (_kernel_counts("psi", p["N"], "q,q,1,1", p["degree"], None),
               _counts_poly(list(_cached_hooks(p["degree"], p["N"], None)), q_ring(p["degree"]))),
    _count_grid(False),
    table=lambda p: (_o_class(True, p["N"], p["n"], None), _hook_side(p["n"], p["N"], None)),
    projections=("n",)))
_register(Family(
    "two-color", "Partitions by odd-indexed sum vs 2-color partitions with red count plus green size bound",
    "#{parts <= N, O = n} = #{2-color partitions of n with #red + largest green <= N}",
    "count", ("N", "n", "degree"),
    lambda p: (_kernel_counts("phi", p["N"], "q,q,1,1", p["degree"], None),
               _counts_poly(list(_cached_two_color(p["degree"], "hook", p["N"], None)),
                            q_ring(p["degree"]))),
    _count_grid(False),
    table=lambda p: (_o_class(False, p["N"], p["n"], None),
                     list(enumerate_two_color(p["n"], "hook", p["N"]))),
    projections=("n",)))
_register(Family(
    "hook-refined", "Distinct parts with fixed alternating sum vs j-part partitions with bounded hook",
    "#{distinct parts <= N, O = n, gamma = j} = #{partitions of n into j parts with largest hook <= N}",
    "count", ("N", "j", "n", "degree"),
    lambda p: (_kernel_counts("psi", p["N"], "q,q,1,1", p["degree"], p["j"]),
               _counts_poly(list(_cached_hooks(p["degree"], p["N"], p["j"])), q_ring(p["degree"]))),
    _count_grid(True),
    table=lambda p: (_o_class(True, p["N"], p["n"], p["j"]), _hook_side(p["n"], p["N"], p["j"])),
    projections=("n",)))
_register(Family(
    "two-color-refined", "Partitions with fixed alternating sum vs 2-color partitions with j red parts",
    "#{parts <= N, O = n, gamma = j} = #{2-color partitions of n, exactly j red, green <= N - j}",
    "count", ("N", "j", "n", "degree"),
    lambda p: (_kernel_counts("phi", p["N"], "q,q,1,1", p["degree"], p["j"]),
               _counts_poly(list(_cached_two_color(p["degree"], "green-bound", p["N"], p["j"])),
                            q_ring(p["degree"]))),
    _count_grid(True),
    table=lambda p: (_o_class(False, p["N"], p["n"], p["j"]),
                     list(enumerate_two_color(p["n"], "green-bound", p["N"], p["j"]))),
    projections=("n",)))


# signed substitutions (c = -1) -------------------------------------------------------

def _rts_params(p: dict) -> tuple[int, int, int, int]:
    return p["r"], p["t"], p["s"], p["eps"]


def _rts_sides(p: dict, finite: bool) -> tuple[SparsePoly, SparsePoly]:
    r, t, s, eps = _rts_params(p)
    kind = _kind(p)
    N = p["N"] if finite else None
    ring = q_ring(p["degree"])
    sub = Substitution.rts(r, t, s, eps)
    Q = sub.Q()  # = -eps * q^(r+t+s)
    if kind == "psi":
        rhs = _poch(-SignedMonomial.of(q=r), Q, None if N is None else (N + 1) // 2, ring)
    else:
        rhs = _inv(_poch(Q, Q, None if N is None else N // 2, ring))
    return _enum(kind)(N, sub, ring), rhs


_SPECIAL_RTS = {
    "sign-E": ((1, 1, 0, -1), "(-1)^E q^O", "(-q;q^2)", "1/(q^2;q^2)"),
    "ceil-E": ((1, 1, 0, 1), "(-1)^ceilE q^O", "(-q;-q^2) = (-q,q^3;q^4)",
               "1/(-q^2;-q^2) = 1/(-q^2,q^4;q^4)"),
    "floor-E-mod3": ((1, 1, 1, -1), "(-1)^E q^(O + floorE)", "(-q;q^3)", "1/(q^3;q^3)"),
}


def _fixed_rts(rts: tuple[int, int, int, int], finite: bool) -> Sides:
    r, t, s, eps = rts
    return lambda p: _rts_sides({**p, "r": r, "t": t, "s": s, "eps": eps}, finite)


def _kind_grid(pr: BoundsProfile):
    return ({"kind": k} for k in pr.kinds())


for _id, (_rts, _w, _psi, _phi) in _SPECIAL_RTS.items():
    _register(Family(
        _id, f"Signed weight {_w}, unbounded parts",
        f"sum over distinct parts of {_w} = {_psi}_inf; over all partitions = {_phi}_inf",
        "series", ("kind", "degree"), _fixed_rts(_rts, False), _kind_grid))
    _register(Family(
        f"{_id}-finite", f"Signed weight {_w}, parts <= N",
        f"sum over distinct parts <= N of {_w} = {_psi}_ceil(N/2); "
        f"over all partitions with parts <= N = {_phi}_floor(N/2)",
        "series", ("kind", "N", "degree"), _fixed_rts(_rts, True), _kind_N_grid))


def _rts_grid(finite: bool):
    def grid(pr: BoundsProfile):
        for kind in pr.kinds():
            for r, t, s, eps in pr.rts_grid():
                if r + t == 0 or (kind == "phi" and r == 0):
                    continue
                base = {"kind": kind, "r": r, "t": t, "s": s, "eps": eps}
                if not finite:
                    yield base
                else:
                    for N in pr.Ns():
                        yield {**base, "N": N}
    return grid


_register(Family(
    "general-rts", "Weights under (q^r, q^t, -1, eps q^s), unbounded parts",
    "sum over distinct parts of (-1)^ceilE eps^floorE q^(r ceilO + t floorO + s floorE) = (-q^r;Q)_inf; "
    "over all partitions = 1/(Q;Q)_inf, with Q = -eps q^(r+t+s)",
    "series", ("kind", "r", "t", "s", "eps", "degree"),
    lambda p: _rts_sides(p, False), _rts_grid(False)))
_register(Family(
    "general-rts-finite", "Weights under (q^r, q^t, -1, eps q^s), parts <= N",
    "distinct parts <= N: (-q^r;Q)_ceil(N/2); all partitions with parts <= N: 1/(Q;Q)_floor(N/2); "
    "Q = -eps q^(r+t+s)",
    "series", ("kind", "N", "r", "t", "s", "eps", "degree"),
    lambda p: _rts_sides(p, True), _rts_grid(True)))


# odd-indexed parts uncounted -----------------------------------------------------------

def _odd_sign_sides(p):
    N, kind = p["N"], _kind(p)
    ring = q_ring(p["degree"])
    lhs = _enum(kind)(N, PRESETS["-1,-1,q,q"], ring)
    if N % 2:
        return lhs, ring.zero()
    q2 = SignedMonomial.of(q=2)
    if kind == "psi":
        return lhs, _poch(-q1, q2, N // 2, ring)
    return lhs, _inv(_poch(q2, q2, N // 2, ring))


_register(Family(
    "odd-sign", "Weight (-1)^O q^E, parts <= N",
    "distinct parts: (-q;q^2)_{N/2} for even N, 0 for odd N; all partitions: 1/(q^2;q^2)_{N/2} or 0",
    "series", ("kind", "N", "degree"), _odd_sign_sides, _kind_N_grid))


def _e_sum_sides(p):
    ring = q_ring(p["degree"])
    kind = _kind(p)
    return _enum(kind)(p["N"], PRESETS["1,1,q,q"], ring), binomial_sum(p["N"], kind, ring)


_register(Family(
    "E-sum", "Even-indexed sum, parts <= N",
    "distinct parts: sum_i [N i]_q; all partitions: sum_i 1/((q;q)_i (q;q)_{N-i})",
    "series", ("kind", "N", "degree"), _e_sum_sides, _kind_N_grid))


def _e_refined_sides(p):
    ring = q_ring(p["degree"])
    N, j, kind = p["N"], p["j"], _kind(p)
    lhs = _enum(kind)(N, PRESETS["1,1,q,q"], ring, gamma=j)
    if kind == "psi":
        return lhs, qbinomial(N, j, q1, ring)
    if j > N:
        return lhs, ring.zero()
    return lhs, _inv(mul(_poch(q1, q1, j, ring), _poch(q1, q1, N - j, ring)))


def _kind_N_j_grid(pr: BoundsProfile):
    for kind in pr.kinds():
        for N in pr.Ns():
            for j in pr.js(N):
                yield {"kind": kind, "N": N, "j": j}


_register(Family(
    "E-refined", "Even-indexed sum with fixed alternating sum, parts <= N",
    "gamma = j: distinct parts give [N j]_q, all partitions give 1/((q;q)_j (q;q)_{N-j})",
    "series", ("kind", "N", "j", "degree"), _e_refined_sides, _kind_N_j_grid))


def _e_limit_sides(p):
    D, j, kind = p["degree"], p["j"], _kind(p)
    ring = q_ring(D)
    # largest part <= gamma + E, so parts <= j + D see every contributing partition
    lhs = _enum(kind)(j + D, PRESETS["1,1,q,q"], ring, gamma=j)
    rhs = _inv(_poch(q1, q1, j, ring))
    if kind == "phi":
        rhs = mul(rhs, _inv(_poch(q1, q1, None, ring)))
    return lhs, rhs


def _kind_j_grid(pr: BoundsProfile):
    for kind in pr.kinds():
        for j in pr.js(None):
            yield {"kind": kind, "j": j}


_register(Family(
    "E-limit", "Even-indexed sum with fixed alternating sum, unbounded parts",
    "gamma = j: distinct parts give 1/(q;q)_j, all partitions give 1/((q;q)_j (q;q)_inf)",
    "series", ("kind", "j", "degree"), _e_limit_sides, _kind_j_grid))


def _j_grid(pr: BoundsProfile):
    return ({"j": j} for j in pr.js(None))


def _parts_leq(j: int, n_max: int) -> list[int]:
    counts = [0] * (n_max + 1)
    for pi in enumerate_partitions(ClassFilter(max_part=j, cap=("size", n_max))):
        counts[pi.size] += 1
    return counts


_register(Family(
    "E-two-color", "Partitions by even-indexed sum vs 2-color partitions with small red parts",
    "#{partitions, E = n, gamma = j} = #{2-color partitions of n with red parts <= j}",
    "count", ("j", "n", "degree"),
    lambda p: (_kernel_counts("phi", p["j"] + p["degree"], "1,1,q,q", p["degree"], p["j"]),
               _counts_poly(list(_cached_two_color(p["degree"], "red-parts", None, p["j"])),
                            q_ring(p["degree"]))),
    _j_grid,
    table=lambda p: (_e_class(False, p["j"], p["n"]),
                     list(enumerate_two_color(p["n"], "red-parts", j=p["j"]))),
    projections=("n",)))
_register(Family(
    "parts-leq-j", "Distinct parts by even-indexed sum vs partitions into parts <= j",
    "#{distinct parts, E = n, gamma = j} = #{partitions of n into parts <= j}",
    "count", ("j", "n", "degree"),
    lambda p: (_kernel_counts("psi", p["j"] + p["degree"], "1,1,q,q", p["degree"], p["j"]),
               _counts_poly(_parts_leq(p["j"], p["degree"]), q_ring(p["degree"]))),
    _j_grid,
    table=lambda p: (_e_class(True, p["j"], p["n"]), partitions_of(p["n"], max_part=p["j"])),
    projections=("n",)))


# weighted Rogers-Ramanujan partitions ---------------------------------------------------

def _rr_sum(max_part: int | None, degree: int, weight) -> SparsePoly:
    ring = q_ring(degree)
    terms: dict[int, int] = {}
    if max_part is not None and max_part < 0:
        pis = [Partition()]
    else:
        pis = enumerate_partitions(ClassFilter.rogers_ramanujan(max_part=max_part,
                                                               cap=("size", degree)))
    for pi in pis:
        terms[pi.size] = terms.get(pi.size, 0) + weight(pi)
    return ring.poly(terms.items())


_register(Family(
    "rr-weighted", "Odd-indexed sum as a weighted Rogers-Ramanujan count",
    "sum over distinct parts of q^O = sum over gap>=2 partitions of w(pi) q^|pi|, "
    "w = smallest part * prod (gap - 1)",
    "series", ("degree",),
    lambda p: (psi_enum(None, PRESETS["q,q,1,1"], q_ring(p["degree"])),
               _rr_sum(None, p["degree"], rr_weight)),
    lambda pr: [{}]))
_register(Family(
    "rr-weighted-finite", "Bounded odd-indexed sum as a weighted Rogers-Ramanujan count",
    "sum over distinct parts <= N of q^O = sum over gap>=2 partitions with parts <= N of w(pi) q^|pi|",
    "series", ("N", "degree"),
    lambda p: (psi_enum(p["N"], PRESETS["q,q,1,1"], q_ring(p["degree"])),
               _rr_sum(p["N"], p["degree"], rr_weight)),
    lambda pr: ({"N": N} for N in pr.Ns())))
_register(Family(
    "rr-hat", "Bounded even-indexed sum as a weighted Rogers-Ramanujan count",
    "sum over distinct parts <= N of q^E = sum over gap>=2 partitions with parts <= N-1 of "
    "(N - largest) w(pi) q^|pi|, empty partition weighted N+1",
    "series", ("N", "degree"),
    lambda p: (psi_enum(p["N"], PRESETS["1,1,q,q"], q_ring(p["degree"])),
               _rr_sum(p["N"] - 1, p["degree"], lambda pi: rr_weight_hat(pi, p["N"]))),
    lambda pr: ({"N": N} for N in pr.Ns())))


# -- instances and verification -----------------------------------------------------------


@dataclass(frozen=True)
class IdentityInstance:
    """One family with concrete parameters.

    ``perturb`` adds ``delta * monomial`` to the right side before comparison;
    it exists to test that verification actually detects differences.
    """

    family: str
    params: tuple[tuple[str, object], ...]
    perturb: tuple[tuple[tuple[str, int], ...], int] | None = None

    @property
    def p(self) -> dict:
        return dict(self.params)

    @property
    def mode(self) -> str:
        return _FAMILIES[self.family].mode

    def perturbed(self, delta: int = 1, **exps: int) -> "IdentityInstance":
        return replace(self, perturb=(tuple(sorted(exps.items())), delta))


def _ordered(params: dict) -> tuple[tuple[str, object], ...]:
    return tuple((k, params[k]) for k in PARAM_ORDER if k in params)


def _default_degree(fam: Family, params: dict, profile: BoundsProfile) -> int:
    if profile.degree_override is not None:
        return profile.degree_override
    if params.get("sub") == "formal":
        return profile.four_var_degree
    if fam.mode == "count":
        return profile.count_degree
    return profile.degree


def instantiate(family_id: str, params: dict | None = None,
                profile: BoundsProfile = DEFAULT_PROFILE) -> IdentityInstance:
    """Validate ``params`` for the family and fill in the truncation degree."""
    fam = _FAMILIES.get(family_id)
    if fam is None:
        raise ParameterError(f"unknown identity {family_id!r}")
    params = {k: v for k, v in (params or {}).items() if v is not None}
    unknown = set(params) - set(fam.params)
    if unknown:
        raise ParameterError(f"{family_id} does not take {sorted(unknown)}")
    if "kind" in fam.params:
        params.setdefault("kind", "psi")
    if "sub" in fam.params:
        params.setdefault("sub", "formal")
    if "degree" not in params:
        params["degree"] = _default_degree(fam, params, profile)
    for name in ("N", "j", "n", "r", "t", "s", "degree"):
        if name in params:
            v = params[name]
            if not isinstance(v, int) or v < 0:
                raise ParameterError(f"{name} must be a non-negative integer, got {v!r}")
    required = [k for k in fam.params
                if k not in params and k not in fam.projections and k not in ("kind", "sub")]
    if required:
        raise ParameterError(f"{family_id} needs {required}")
    if "kind" in fam.params:
        if params["kind"] not in ("psi", "phi"):
            raise ParameterError("kind must be 'psi' or 'phi'")
    if "sub" in fam.params:
        try:
            _sub(params)
        except ValueError as exc:
            raise ParameterError(str(exc)) from None
    if "eps" in params and params["eps"] not in (1, -1):
        raise ParameterError("eps must be +1 or -1")
    if "r" in params:
        if params["r"] + params["t"] == 0:
            raise ParameterError("need r + t > 0")
        if params.get("kind") == "phi" and params["r"] == 0:
            raise ParameterError("r = 0 makes the all-partition sum diverge (parts 1 weigh nothing)")
    if "n" in params and fam.mode == "count" and params["n"] > params["degree"]:
        params["degree"] = params["n"]
    return IdentityInstance(family_id, _ordered(params))


@dataclass
class VerificationReport:
    id: str
    params: dict
    status: str  # pass, fail, error
    checked_bound: int
    first_mismatch: dict | None = None
    elapsed_ms: float = 0.0
    message: str = ""
    lhs: str = ""

    def to_dict(self) -> dict:
        out = {"id": self.id, "params": self.params, "status": self.status,
               "checked_bound": self.checked_bound}
        if self.first_mismatch is not None:
            out["first_mismatch"] = self.first_mismatch
        out["elapsed_ms"] = self.elapsed_ms
        return out


def _project(poly: SparsePoly, p: dict, fam: Family) -> SparsePoly:
    if "j" in fam.projections and "j" in p and "z" in poly.vars:
        poly = coeff_of(poly, "z", p["j"])
    if "n" in fam.projections and "n" in p:
        poly = coeff_of(poly, "q", p["n"])
    return poly


def evaluate(inst: IdentityInstance) -> tuple[SparsePoly, SparsePoly]:
    """Both sides after perturbation and projection."""
    fam = _FAMILIES[inst.family]
    p = inst.p
    lhs, rhs = fam.sides(p)
    if inst.perturb is not None:
        exps, delta = inst.perturb
        rhs = add(rhs, rhs.ring.mono(delta, **dict(exps)))
    return _project(lhs, p, fam), _project(rhs, p, fam)


def verify(inst: IdentityInstance) -> VerificationReport:
    p = inst.p
    bound = p["n"] if "n" in p and inst.mode == "count" else p["degree"]
    start = time.perf_counter()
    try:
        lhs, rhs = evaluate(inst)
        diff = first_difference(lhs, rhs)
    except Exception as exc:  # reported, never raised: one bad instance must not stop a suite
        return VerificationReport(inst.family, p, "error", bound,
                                  elapsed_ms=_ms(start), message=f"{type(exc).__name__}: {exc}")
    if diff is None:
        return VerificationReport(inst.family, p, "pass", bound, elapsed_ms=_ms(start),
                                  lhs=render(lhs))
    e, a, b = diff
    mismatch = {"monomial": render_monomial(lhs.vars, e), "lhs": a, "rhs": b}
    return VerificationReport(inst.family, p, "fail", bound, mismatch, _ms(start), lhs=render(lhs))


def _ms(start: float) -> float:
    return round((time.perf_counter() - start) * 1000, 3)


def select(filter_: Iterable[str] | None) -> list[Family]:
    """Families whose id equals a filter entry, or contains it as a substring."""
    fams = registry()
    if filter_ is None:
        return fams
    wanted = list(filter_)
    exact = [f for f in fams if f.id in wanted]
    if len(exact) == len(wanted):
        return exact
    return [f for f in fams if any(w in f.id for w in wanted)]


def build_suite(families: Iterable[Family], profile: BoundsProfile = DEFAULT_PROFILE
                ) -> list[IdentityInstance]:
    """Every grid point of every family, in registry then grid order."""
    out = []
    for fam in families:
        if profile.four_variable and "sub" not in fam.params:
            continue
        for params in fam.grid(profile):
            params = dict(params)
            if profile.n is not None and "n" in fam.params:
                params["n"] = profile.n
            if profile.degree_override is not None:
                params["degree"] = profile.degree_override
            out.append(instantiate(fam.id, params, profile))
    return out


def iter_verify(suite: list[IdentityInstance], workers: int | None = None
                ) -> Iterator[VerificationReport]:
    """Yield reports in suite order as they become available."""
    workers = workers or os.cpu_count() or 1
    if workers == 1 or len(suite) <= 1:
        yield from (verify(inst) for inst in suite)
        return
    with ProcessPoolExecutor(max_workers=min(workers, len(suite))) as pool:
        yield from pool.map(verify, suite, chunksize=1)


def verify_suite(families: Iterable[Family] | None = None,
                 profile: BoundsProfile = DEFAULT_PROFILE,
                 workers: int | None = None) -> list[VerificationReport]:
    """Verify every instance; reports come back in suite order regardless of completion order."""
    suite = build_suite(registry() if families is None else families, profile)
    return list(iter_verify(suite, workers))
