"""Partitions, their statistics, and exhaustive enumeration of the bounded classes.

A partition is a weakly decreasing tuple of positive integers.  Statistics are
computed on demand from the parts; nothing here depends on the polynomial code.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Literal


class DomainError(ValueError):
    """Input outside the domain of a partition operation."""


class Partition(tuple):
    """Weakly decreasing sequence of positive integers; ``Partition()`` is the empty partition."""

    def __new__(cls, parts: Iterable[int] = ()):
        parts = tuple(int(x) for x in parts)
        for x in parts:
            if x < 1:
                raise DomainError(f"parts must be positive, got {parts}")
        for x, y in zip(parts, parts[1:]):
            if x < y:
                raise DomainError(f"parts must be non-increasing, got {parts}")
        return super().__new__(cls, parts)

    @classmethod
    def parse(cls, text: str) -> "Partition":
        """Parse ``"5,5,3"``; ``""`` and ``"[]"`` give the empty partition."""
        text = text.strip().strip("[]()").strip()
        if not text:
            return cls()
        try:
            return cls(int(x) for x in text.split(","))
        except ValueError as exc:
            raise DomainError(f"cannot parse partition {text!r}") from exc

    @property
    def size(self) -> int:
        return sum(self)

    @property
    def length(self) -> int:
        return len(self)

    @property
    def largest(self) -> int:
        return self[0] if self else 0

    def is_distinct(self) -> bool:
        return all(x > y for x, y in zip(self, self[1:]))

    def min_gap(self) -> int | None:
        return min((x - y for x, y in zip(self, self[1:])), default=None)

    def __str__(self) -> str:
        return ",".join(map(str, self)) if self else "[]"

    def __repr__(self) -> str:
        return f"Partition({tuple(self)!r})"


@dataclass(frozen=True)
class StatRecord:
    size: int
    length: int
    O: int
    E: int
    ceilO: int
    floorO: int
    ceilE: int
    floorE: int
    gamma: int
    max_hook: int


def stats(p: Partition) -> StatRecord:
    odd = p[0::2]
    even = p[1::2]
    O, E = sum(odd), sum(even)
    ceilO = sum((x + 1) // 2 for x in odd)
    ceilE = sum((x + 1) // 2 for x in even)
    return StatRecord(
        size=O + E,
        length=len(p),
        O=O,
        E=E,
        ceilO=ceilO,
        floorO=O - ceilO,
        ceilE=ceilE,
        floorE=E - ceilE,
        gamma=O - E,
        max_hook=p[0] + len(p) - 1 if p else 0,
    )


def boulet_weight(p: Partition) -> tuple[int, int, int, int]:
    """Exponents of a, b, c, d in the alternately decorated Ferrers diagram."""
    s = stats(p)
    return s.ceilO, s.floorO, s.ceilE, s.floorE


CapKind = Literal["size", "O", "E"]


@dataclass(frozen=True)
class ClassFilter:
    """Describes a finite set of partitions to enumerate.

    ``min_gap`` is 0 for ordinary partitions, 1 for distinct parts and 2 for
    Rogers-Ramanujan partitions.  ``cap`` bounds one monotone statistic.
    """

    min_gap: int = 0
    max_part: int | None = None
    max_length: int | None = None
    cap: tuple[CapKind, int] = ("size", 0)

    @classmethod
    def ordinary(cls, **kw) -> "ClassFilter":
        return cls(min_gap=0, **kw)

    @classmethod
    def distinct(cls, **kw) -> "ClassFilter":
        return cls(min_gap=1, **kw)

    @classmethod
    def rogers_ramanujan(cls, **kw) -> "ClassFilter":
        return cls(min_gap=2, **kw)

    def check_finite(self) -> None:
        kind, bound = self.cap
        if kind not in ("size", "O", "E"):
            raise DomainError(f"unknown cap statistic {kind!r}")
        if bound < 0:
            raise DomainError("cap must be non-negative")
        # every partition with E <= D and no largest-part bound includes (k) for all k
        if kind == "E" and self.max_part is None:
            raise DomainError("an E-capped class needs a bound on the largest part")


def enumerate_partitions(flt: ClassFilter) -> Iterator[Partition]:
    """Every partition in the class once, ordered by size then reverse-lexicographically.

    Recursive descent over the next part.  Positions counted by the cap
    statistic spend budget; the others are bounded only by the previous part,
    which is why an E cap needs ``max_part``.
    """
    flt.check_finite()
    kind, bound = flt.cap
    gap = flt.min_gap
    top = bound if flt.max_part is None else flt.max_part
    max_len = flt.max_length
    spends = {"size": (True, True), "O": (True, False), "E": (False, True)}[kind]
    found: list[Partition] = []

    def rec(prefix: list[int], budget: int, largest: int):
        found.append(Partition(prefix))
        if max_len is not None and len(prefix) >= max_len:
            return
        capped = spends[len(prefix) % 2]
        hi = min(largest, budget) if capped else largest
        for part in range(hi, 0, -1):
            rec(prefix + [part], budget - part if capped else budget, part - gap)

    rec([], bound, top)
    found.sort(key=lambda p: (p.size, [-x for x in p]))
    return iter(found)


def partitions_of(n: int, max_part: int | None = None, min_gap: int = 0) -> list[Partition]:
    """All partitions of exactly ``n`` (with optional constraints), reverse-lexicographic."""
    flt = ClassFilter(min_gap=min_gap, max_part=max_part, cap=("size", n))
    return [p for p in enumerate_partitions(flt) if p.size == n]


@dataclass(frozen=True)
class TwoColorPartition:
    red: Partition
    green: Partition

    @property
    def size(self) -> int:
        return self.red.size + self.green.size

    def __str__(self) -> str:
        return f"red:[{','.join(map(str, self.red))}];green:[{','.join(map(str, self.green))}]"


TwoColorRule = Literal["hook", "green-bound", "red-parts"]


def _two_color_classes(rule: TwoColorRule, N: int | None, j: int | None):
    """Yield ``(red part count or None, red max part, green max part)`` triples covering the rule."""
    if rule == "hook":
        # #red + max(green) <= N
        if N is None:
            raise DomainError("rule 'hook' needs N")
        for k in range(0, N + 1):
            if j is None or k == j:
                yield k, None, N - k
    elif rule == "green-bound":
        # exactly j red parts, max(green) <= N - j
        if N is None or j is None:
            raise DomainError("rule 'green-bound' needs N and j")
        if j <= N:
            yield j, None, N - j
    elif rule == "red-parts":
        # red part sizes <= j, green free
        if j is None:
            raise DomainError("rule 'red-parts' needs j")
        yield None, j, None
    else:
        raise DomainError(f"unknown two-color rule {rule!r}")


def enumerate_two_color(n: int, rule: TwoColorRule, N: int | None = None,
                        j: int | None = None) -> Iterator[TwoColorPartition]:
    """Two-color partitions of ``n`` allowed by ``rule`` (see :data:`TwoColorRule`)."""
    for red_len, red_max, green_max in _two_color_classes(rule, N, j):
        for k in range(n, -1, -1):
            reds = [p for p in partitions_of(k, max_part=red_max)
                    if red_len is None or len(p) == red_len]
            if not reds:
                continue
            greens = partitions_of(n - k, max_part=green_max)
            for r in reds:
                for g in greens:
                    yield TwoColorPartition(r, g)


@lru_cache(maxsize=128)
def _size_length_histogram(n_max: int, max_part: int | None) -> dict[tuple[int, int], int]:
    """``{(size, length): count}`` over partitions of size ``<= n_max`` with parts ``<= max_part``."""
    return dict(Counter((p.size, len(p)) for p in enumerate_partitions(
        ClassFilter(max_part=max_part, cap=("size", n_max)))))


def count_two_color(n_max: int, rule: TwoColorRule, N: int | None = None,
                    j: int | None = None) -> list[int]:
    """Counts for sizes ``0..n_max``: red and green classes enumerated separately and paired by size."""
    counts = [0] * (n_max + 1)
    for red_len, red_max, green_max in _two_color_classes(rule, N, j):
        red = Counter()
        for (size, length), c in _size_length_histogram(n_max, red_max).items():
            if red_len is None or length == red_len:
                red[size] += c
        green = Counter()
        for (size, _), c in _size_length_histogram(n_max, green_max).items():
            green[size] += c
        for a, ca in red.items():
            for b, cb in green.items():
                if a + b <= n_max:
                    counts[a + b] += ca * cb
    return counts


def _check_rr(p: Partition) -> None:
    gap = p.min_gap()
    if gap is not None and gap < 2:
        raise DomainError(f"{p} has a gap smaller than 2")


def rr_weight(p: Partition) -> int:
    """Smallest part times the product of (gap - 1) over consecutive parts; 1 for the empty partition."""
    _check_rr(p)
    if not p:
        return 1
    w = p[-1]
    for x, y in zip(p, p[1:]):
        w *= x - y - 1
    return w


def rr_weight_hat(p: Partition, N: int) -> int:
    """``(N - largest) * rr_weight``; the empty partition gets ``N + 1``."""
    _check_rr(p)
    if not p:
        return N + 1
    if p[0] > N - 1:
        raise DomainError(f"largest part of {p} exceeds N - 1 = {N - 1}")
    return (N - p[0]) * rr_weight(p)


def hook_count(n: int, N: int, length: int | None = None) -> int:
    """Number of partitions of ``n`` with largest hook at most ``N`` (and exactly ``length`` parts)."""
    return sum(1 for p in partitions_of(n, max_part=N)
               if stats(p).max_hook <= N and (length is None or len(p) == length))


@lru_cache(maxsize=128)
def _hook_histogram(n_max: int, N: int) -> dict[tuple[int, int], int]:
    """``{(size, length): count}`` over partitions of size ``<= n_max`` with largest hook ``<= N``."""
    return dict(Counter((p.size, len(p)) for p in enumerate_partitions(
        ClassFilter(max_part=N, cap=("size", n_max))) if stats(p).max_hook <= N))


def hook_counts(n_max: int, N: int, length: int | None = None) -> list[int]:
    counts = [0] * (n_max + 1)
    for (size, k), c in _hook_histogram(n_max, N).items():
        if length is None or k == length:
            counts[size] += c
    return counts
