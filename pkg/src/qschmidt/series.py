"""Exact truncated polynomial arithmetic over the formal variables q, z, a, b, c, d.

Every value is a :class:`SparsePoly`: a map from exponent vectors to non-zero
Python integers, living in a :class:`Ring` that fixes the variable order and a
:class:`TruncationSpec`.  Truncation is applied eagerly after every operation,
so two polynomials compare equal exactly when their term maps agree.

Only ``z`` may carry negative exponents.  Truncation by non-negative variables
is compatible with multiplication (the dropped monomials form an ideal); the
``z`` window is not, so callers pick it wide enough for every intermediate
result they build.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Mapping

ALLOWED_VARS = ("q", "z", "a", "b", "c", "d")
LAURENT_VARS = frozenset({"z"})


class StructuralError(ValueError):
    """Operands live in incompatible rings, or a substitution is incomplete."""


class NonInvertibleError(ArithmeticError):
    """Raised by :func:`series_inverse` when the constant term is not a unit."""


class DivergenceError(ValueError):
    """An infinite product or sum does not converge under the truncation."""


@dataclass(frozen=True)
class TruncationSpec:
    """Per-variable degree window plus an optional total-degree cap.

    ``max_degree`` maps a variable to its largest kept exponent (absent or
    ``None`` means unbounded).  ``min_degree`` defaults to 0 and may be
    negative only for ``z``.  ``total`` caps the sum of all exponents.
    """

    max_degree: tuple[tuple[str, int | None], ...] = ()
    min_degree: tuple[tuple[str, int], ...] = ()
    total: int | None = None

    def __post_init__(self):
        for name, lo in self.min_degree:
            if lo < 0 and name not in LAURENT_VARS:
                raise StructuralError(f"negative minimum degree for {name!r}")
            hi = self.max_of(name)
            if hi is not None and lo > hi:
                raise StructuralError(f"empty degree window for {name!r}")
        for name, hi in self.max_degree:
            if hi is not None and hi < 0 and name not in LAURENT_VARS:
                raise StructuralError(f"negative maximum degree for {name!r}")
        if self.total is not None and self.total < 0:
            raise StructuralError("total-degree cap must be non-negative")

    @classmethod
    def make(cls, max_degree: Mapping[str, int | None] | None = None,
             min_degree: Mapping[str, int] | None = None,
             total: int | None = None) -> "TruncationSpec":
        return cls(tuple(sorted((max_degree or {}).items())),
                   tuple(sorted((min_degree or {}).items())), total)

    @classmethod
    def q_only(cls, degree: int | None) -> "TruncationSpec":
        return cls.make({"q": degree})

    @classmethod
    def qz(cls, degree: int | None, z_bound: int, z_min: int | None = None) -> "TruncationSpec":
        """q up to ``degree``; z in ``[z_min, z_bound]`` (``z_min`` defaults to ``-z_bound``)."""
        lo = -z_bound if z_min is None else z_min
        return cls.make({"q": degree, "z": z_bound}, {"z": lo})

    def max_of(self, name: str) -> int | None:
        for n, hi in self.max_degree:
            if n == name:
                return hi
        return None

    def min_of(self, name: str) -> int:
        for n, lo in self.min_degree:
            if n == name:
                return lo
        return 0


@dataclass(frozen=True)
class Ring:
    """Ordered variable set plus truncation; the home of every :class:`SparsePoly`."""

    vars: tuple[str, ...]
    trunc: TruncationSpec = TruncationSpec()

    def __post_init__(self):
        if len(set(self.vars)) != len(self.vars):
            raise StructuralError(f"duplicate variables in {self.vars}")
        for v in self.vars:
            if v not in ALLOWED_VARS:
                raise StructuralError(f"unknown variable {v!r}")

    @property
    def lo(self) -> tuple[int, ...]:
        return _window(self)[0]

    @property
    def hi(self) -> tuple[int | None, ...]:
        return _window(self)[1]

    def index(self, name: str) -> int:
        try:
            return self.vars.index(name)
        except ValueError:
            raise StructuralError(f"variable {name!r} not in ring {self.vars}") from None

    def admits(self, exps: tuple[int, ...]) -> bool:
        lo, hi, total = _window(self)
        for e, l, h in zip(exps, lo, hi):
            if e < l or (h is not None and e > h):
                return False
        return total is None or sum(exps) <= total

    def without(self, name: str) -> "Ring":
        keep = tuple(v for v in self.vars if v != name)
        t = self.trunc
        return Ring(keep, TruncationSpec(
            tuple((n, h) for n, h in t.max_degree if n != name),
            tuple((n, l) for n, l in t.min_degree if n != name),
            t.total,
        ))

    def zero(self) -> "SparsePoly":
        return SparsePoly(self, {})

    def one(self) -> "SparsePoly":
        return self.const(1)

    def const(self, c: int) -> "SparsePoly":
        return SparsePoly.from_terms(self, {(0,) * len(self.vars): c})

    def var(self, name: str) -> "SparsePoly":
        return SignedMonomial.of(**{name: 1}).to_poly(self)

    def mono(self, coeff: int = 1, **exps: int) -> "SparsePoly":
        e = [0] * len(self.vars)
        for name, k in exps.items():
            e[self.index(name)] = k
        return SparsePoly.from_terms(self, {tuple(e): coeff})

    def poly(self, terms: Mapping[tuple[int, ...], int] | Iterable[tuple[int, int]]) -> "SparsePoly":
        """Build from ``{exponents: coeff}``; in a one-variable ring ``[(deg, coeff), ...]`` also works."""
        if isinstance(terms, Mapping):
            return SparsePoly.from_terms(self, terms)
        if len(self.vars) != 1:
            raise StructuralError("pair form requires a one-variable ring")
        acc: dict[tuple[int, ...], int] = {}
        for deg, c in terms:
            acc[(deg,)] = acc.get((deg,), 0) + c
        return SparsePoly.from_terms(self, acc)


@lru_cache(maxsize=None)
def _window(ring: Ring):
    t = ring.trunc
    lo = tuple(t.min_of(v) for v in ring.vars)
    hi = tuple(t.max_of(v) for v in ring.vars)
    return lo, hi, t.total


class SparsePoly:
    """Immutable exact-integer Laurent polynomial, truncated to its ring."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: Ring, terms: dict[tuple[int, ...], int]):
        # trusted constructor: terms already normalised and admitted
        self.ring = ring
        self.terms = terms
        self._hash = None

    @classmethod
    def from_terms(cls, ring: Ring, terms: Mapping[tuple[int, ...], int]) -> "SparsePoly":
        n = len(ring.vars)
        out = {}
        for e, c in terms.items():
            e = tuple(e)
            if len(e) != n:
                raise StructuralError(f"exponent {e} does not match ring {ring.vars}")
            if c and ring.admits(e):
                out[e] = out.get(e, 0) + c
        return cls(ring, {e: c for e, c in out.items() if c})

    @property
    def vars(self) -> tuple[str, ...]:
        return self.ring.vars

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator[tuple[tuple[int, ...], int]]:
        return iter(sorted(self.terms.items(), key=lambda kv: monomial_key(kv[0])))

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            return self.terms == ({(0,) * len(self.vars): other} if other else {})
        if not isinstance(other, SparsePoly):
            return NotImplemented
        return self.vars == other.vars and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.vars, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"SparsePoly({render(self)!r}, vars={self.vars})"

    def __str__(self) -> str:
        return render(self)

    def _coerce(self, other) -> "SparsePoly":
        if isinstance(other, int):
            return self.ring.const(other)
        if isinstance(other, SignedMonomial):
            return other.to_poly(self.ring)
        if not isinstance(other, SparsePoly):
            raise TypeError(f"cannot combine SparsePoly with {type(other).__name__}")
        _check_same(self, other)
        return other

    def __add__(self, other):
        return add(self, self._coerce(other))

    __radd__ = __add__

    def __neg__(self):
        return SparsePoly(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return add(self, -self._coerce(other))

    def __rsub__(self, other):
        return add(self._coerce(other), -self)

    def __mul__(self, other):
        if isinstance(other, int):
            if other == 0:
                return self.ring.zero()
            return SparsePoly(self.ring, {e: c * other for e, c in self.terms.items()})
        return mul(self, self._coerce(other))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power; use series_inverse")
        result, base = self.ring.one(), self
        while k:
            if k & 1:
                result = mul(result, base)
            base = mul(base, base)
            k >>= 1
        return result

    def coeff(self, **exps: int) -> int:
        e = [0] * len(self.vars)
        for name, k in exps.items():
            e[self.ring.index(name)] = k
        return self.terms.get(tuple(e), 0)

    def constant_term(self) -> int:
        return self.terms.get((0,) * len(self.vars), 0)

    def degree(self, name: str) -> int | None:
        """Largest exponent of ``name`` present, or ``None`` for the zero polynomial."""
        i = self.ring.index(name)
        return max((e[i] for e in self.terms), default=None)

    def coefficients(self, name: str = "q") -> list[int]:
        """Dense coefficient list of a one-variable polynomial (index = degree)."""
        if self.vars != (name,):
            raise StructuralError(f"coefficients() needs a ring of just ({name!r},)")
        top = self.degree(name)
        if top is None:
            return []
        out = [0] * (top + 1)
        for (k,), c in self.terms.items():
            out[k] = c
        return out

    def retruncate(self, ring: Ring) -> "SparsePoly":
        if ring.vars != self.vars:
            raise StructuralError("retruncate keeps the variable order")
        return SparsePoly.from_terms(ring, self.terms)


def _check_same(p: SparsePoly, r: SparsePoly) -> None:
    if p.vars != r.vars:
        raise StructuralError(f"variable sets differ: {p.vars} vs {r.vars}")
    if p.ring.trunc != r.ring.trunc:
        raise StructuralError("truncations differ")


def add(p: SparsePoly, r: SparsePoly) -> SparsePoly:
    _check_same(p, r)
    out = dict(p.terms)
    for e, c in r.terms.items():
        s = out.get(e, 0) + c
        if s:
            out[e] = s
        else:
            out.pop(e, None)
    return SparsePoly(p.ring, out)


def mul(p: SparsePoly, r: SparsePoly) -> SparsePoly:
    _check_same(p, r)
    ring = p.ring
    if not p.terms or not r.terms:
        return ring.zero()
    if len(p.terms) > len(r.terms):
        p, r = r, p
    lo, hi, total = _window(ring)
    n = len(ring.vars)
    out: dict[tuple[int, ...], int] = {}
    get = out.get
    if n == 1:
        l0, h0 = lo[0], hi[0]
        if total is not None:
            h0 = total if h0 is None else min(h0, total)
        right = sorted((e[0], c) for e, c in r.terms.items())
        for (a,), ca in p.terms.items():
            for b, cb in right:
                k = a + b
                if h0 is not None and k > h0:
                    break
                if k < l0:
                    continue
                key = (k,)
                out[key] = get(key, 0) + ca * cb
    else:
        right = sorted(r.terms.items(), key=lambda kv: sum(kv[0]))
        right_deg = [sum(e) for e, _ in right]
        for ea, ca in p.terms.items():
            da = sum(ea)
            for (eb, cb), db in zip(right, right_deg):
                if total is not None and da + db > total:
                    break
                e = tuple(x + y for x, y in zip(ea, eb))
                ok = True
                for x, l, h in zip(e, lo, hi):
                    if x < l or (h is not None and x > h):
                        ok = False
                        break
                if ok:
                    out[e] = get(e, 0) + ca * cb
    return SparsePoly(ring, {e: c for e, c in out.items() if c})


@dataclass(frozen=True)
class SignedMonomial:
    """``sign * prod(var**exp)``; the image type of every substitution."""

    sign: int
    exps: tuple[tuple[str, int], ...] = ()

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        cleaned = tuple(sorted((n, e) for n, e in self.exps if e))
        object.__setattr__(self, "exps", cleaned)

    @classmethod
    def of(cls, sign: int = 1, **exps: int) -> "SignedMonomial":
        return cls(sign, tuple(exps.items()))

    @classmethod
    def one(cls) -> "SignedMonomial":
        return cls(1)

    def exp(self, name: str) -> int:
        for n, e in self.exps:
            if n == name:
                return e
        return 0

    @property
    def variables(self) -> frozenset[str]:
        return frozenset(n for n, _ in self.exps)

    def __mul__(self, other: "SignedMonomial") -> "SignedMonomial":
        acc = dict(self.exps)
        for n, e in other.exps:
            acc[n] = acc.get(n, 0) + e
        return SignedMonomial(self.sign * other.sign, tuple(acc.items()))

    def __neg__(self) -> "SignedMonomial":
        return SignedMonomial(-self.sign, self.exps)

    def __pow__(self, k: int) -> "SignedMonomial":
        return SignedMonomial(self.sign ** (abs(k) % 2),
                              tuple((n, e * k) for n, e in self.exps))

    def exponent_vector(self, ring: Ring) -> tuple[int, ...]:
        e = [0] * len(ring.vars)
        for n, k in self.exps:
            e[ring.index(n)] = k
        return tuple(e)

    def to_poly(self, ring: Ring) -> SparsePoly:
        return SparsePoly.from_terms(ring, {self.exponent_vector(ring): self.sign})

    def __str__(self) -> str:
        body = _render_mono(self.exps)
        if not body:
            return "1" if self.sign > 0 else "-1"
        return body if self.sign > 0 else "-" + body


def series_inverse(p: SparsePoly) -> SparsePoly:
    """Multiplicative inverse up to truncation (constant term must be +1 or -1)."""
    ring = p.ring
    c0 = p.constant_term()
    if c0 not in (1, -1):
        raise NonInvertibleError(f"constant term {c0} is not a unit")
    lo, hi, total = _window(ring)
    for e in p.terms:
        if not any(e):
            continue
        if any(x < 0 for x in e):
            raise NonInvertibleError("inverse needs non-negative exponents in every variable")
        if not any(x > 0 and (h is not None or total is not None) for x, h in zip(e, hi)):
            raise NonInvertibleError("inverse needs finite bounds on every variable present")
    # Newton iteration: precision doubles each round, stop at the fixed point
    s = ring.const(c0)
    two = ring.const(2)
    while True:
        nxt = mul(s, add(two, -mul(p, s)))
        if nxt == s:
            return s
        s = nxt


def substitute(p: SparsePoly, mapping: Mapping[str, SignedMonomial], target: Ring) -> SparsePoly:
    """Map each source variable to a signed monomial of ``target`` and re-truncate."""
    images = []
    for i, v in enumerate(p.vars):
        img = mapping.get(v)
        if img is None:
            if any(e[i] for e in p.terms):
                raise StructuralError(f"no image for variable {v!r}")
            img = SignedMonomial.one()
        images.append((img.sign, img.exponent_vector(target)))
    width = len(target.vars)
    out: dict[tuple[int, ...], int] = {}
    for e, c in p.terms.items():
        sign = 1
        vec = [0] * width
        for k, (s, img) in zip(e, images):
            if not k:
                continue
            if s < 0 and k % 2:
                sign = -sign
            for j in range(width):
                vec[j] += k * img[j]
        key = tuple(vec)
        out[key] = out.get(key, 0) + sign * c
    return SparsePoly.from_terms(target, out)


def _contracting_var(ratio: SignedMonomial, ring: Ring) -> tuple[int, int, int] | None:
    """Index, step and cap of a variable whose exponent grows under ``ratio`` toward a finite bound."""
    lo, hi, total = _window(ring)
    vec = ratio.exponent_vector(ring)
    for i, (step, h) in enumerate(zip(vec, hi)):
        if step > 0 and h is not None and ring.vars[i] not in LAURENT_VARS:
            return i, step, h
    if total is not None and sum(vec) > 0 and all(
            x >= 0 for v, x in zip(ring.vars, vec) if v not in LAURENT_VARS):
        return -1, sum(vec), total
    return None


def pochhammer(first: SignedMonomial, ratio: SignedMonomial, length: int | None,
               ring: Ring) -> SparsePoly:
    """``prod_{i<length} (1 - first * ratio**i)``; ``length=None`` is the infinite product."""
    result = ring.one()
    if length is None:
        grow = _contracting_var(ratio, ring)
        if grow is None:
            raise DivergenceError(f"infinite product with ratio {ratio} does not converge")
        idx, step, cap = grow
        fvec = first.exponent_vector(ring)
        start = fvec[idx] if idx >= 0 else sum(fvec)
        length = max(0, (cap - start) // step + 1)
    term = first
    one = ring.one()
    for _ in range(length):
        result = mul(result, add(one, -term.to_poly(ring)))
        if not result:
            return result
        term = term * ratio
    return result


@lru_cache(maxsize=4096)
def qbinomial(n: int, k: int, base: SignedMonomial, ring: Ring) -> SparsePoly:
    """Gaussian binomial ``[n choose k]`` in ``base``, by the q-Pascal recurrence."""
    if n < 0 or k < 0 or k > n:
        return ring.zero()
    if k == 0 or k == n:
        return ring.one()
    k = min(k, n - k)
    # row-by-row: [m, i] = [m-1, i-1] + base^i [m-1, i]
    row = [ring.one()]
    for m in range(1, n + 1):
        new = [ring.one()]
        for i in range(1, min(m, k) + 1):
            left = row[i - 1]
            right = mul((base ** i).to_poly(ring), row[i]) if i < len(row) and i < m else ring.zero()
            new.append(add(left, right))
        row = new
    return row[k]


def rogers_szego(N: int, ring: Ring) -> SparsePoly:
    """``H_N(z, q) = sum_k [N choose k]_q z**k``."""
    q = SignedMonomial.of(q=1)
    total = ring.zero()
    for k in range(N + 1):
        total = add(total, mul(qbinomial(N, k, q, ring), ring.mono(z=k)))
    return total


def coeff_of(p: SparsePoly, name: str, degree: int) -> SparsePoly:
    """Coefficient of ``name**degree``, as a polynomial in the remaining variables."""
    i = p.ring.index(name)
    ring = p.ring.without(name)
    out = {e[:i] + e[i + 1:]: c for e, c in p.terms.items() if e[i] == degree}
    return SparsePoly(ring, out)


def monomial_key(e: tuple[int, ...]) -> tuple:
    """Canonical order: total degree, then lexicographic exponent vector."""
    return (sum(e), e)


def _render_mono(pairs) -> str:
    parts = []
    for name, k in pairs:
        if k == 1:
            parts.append(name)
        elif k:
            parts.append(f"{name}^{k}")
    return "*".join(parts)


def render_monomial(vars: tuple[str, ...], e: tuple[int, ...]) -> str:
    return _render_mono(zip(vars, e)) or "1"


def render(p: SparsePoly) -> str:
    """Canonical text form, e.g. ``1 + 2*q + 2*q^2`` or ``-q^4*z^-1``."""
    if not p.terms:
        return "0"
    out = []
    for e, c in p:
        body = _render_mono(zip(p.vars, e))
        mag = abs(c)
        if not body:
            text = str(mag)
        elif mag == 1:
            text = body
        else:
            text = f"{mag}*{body}"
        if not out:
            out.append(text if c > 0 else "-" + text)
        else:
            out.append(("+ " if c > 0 else "- ") + text)
    return " ".join(out)


def first_difference(p: SparsePoly, r: SparsePoly):
    """Smallest monomial (canonical order) where the two differ, with both coefficients."""
    _check_same(p, r)
    keys = set(p.terms) | set(r.terms)
    diff = [e for e in keys if p.terms.get(e, 0) != r.terms.get(e, 0)]
    if not diff:
        return None
    e = min(diff, key=monomial_key)
    return e, p.terms.get(e, 0), r.terms.get(e, 0)
