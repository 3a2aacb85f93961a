"""Column-plus-reflection embedding and Sylvester's odd-to-distinct bijection.

A partition ``pi`` with at most ``j`` parts becomes the odd partition
``mu_i = 2*pi_i + 1`` (pad with zeros to length ``j``): a column of ``j`` cells
with ``pi`` drawn on its right and mirrored on its left.  Sylvester's map then
peels alternating hooks off that centred diagram.

Writing ``h_r = (mu_r - 1)/2`` for the half-width of row ``r``:

* ``nu_{2i-1}`` counts column ``i-1`` from row ``i`` down, plus row ``i``
  strictly right of column ``i-1``;
* ``nu_{2i}`` counts row ``i`` strictly left of column ``-(i-1)``, plus
  column ``-i`` from row ``i+1`` down.

In terms of ``rho = (h_r + 1)`` these are ``A_i + B_i`` and ``B_i + A_{i+1}``
with ``B_i = rho_i - i`` and ``A_i = rho'_i - i + 1`` (Frobenius coordinates
shifted by one), which is what makes the inverse a short back-substitution.
"""

from __future__ import annotations

from dataclasses import dataclass

from .partitions import DomainError, Partition, stats


class BijectionError(RuntimeError):
    """Internal consistency check failed; indicates a bug, not bad input."""


def embed(p: Partition, j: int, N: int | None = None) -> Partition:
    """Odd partition ``(2*p_i + 1)`` padded to ``j`` rows; ``N`` optionally enforces ``p_1 <= N - j``."""
    if j < 1:
        raise DomainError("j must be positive")
    if len(p) > j:
        raise DomainError(f"{p} has more than j = {j} parts")
    if N is not None and p.largest > N - j:
        raise DomainError(f"largest part of {p} exceeds N - j = {N - j}")
    return Partition([2 * x + 1 for x in p] + [1] * (j - len(p)))


def _check_odd(mu: Partition) -> None:
    if any(x % 2 == 0 for x in mu):
        raise DomainError(f"{mu} has an even part")


def sylvester(mu: Partition) -> Partition:
    """Distinct-part image of an odd partition, by alternating hook peeling."""
    _check_odd(mu)
    half = [(x - 1) // 2 for x in mu]
    rows = len(half)

    def column_from(col: int, row: int) -> int:
        # cells of column |col| in rows >= row (rows are 1-based)
        return sum(1 for r in range(row - 1, rows) if half[r] >= abs(col))

    def row_beyond(row: int, col: int) -> int:
        # cells of the given row strictly outside offset +-col
        return max(0, half[row - 1] - col) if row <= rows else 0

    out: list[int] = []
    i = 1
    while True:
        odd = column_from(i - 1, i) + row_beyond(i, i - 1)
        if odd == 0:
            break
        out.append(odd)
        even = row_beyond(i, i - 1) + column_from(i, i + 1)
        if even == 0:
            break
        out.append(even)
        i += 1
    nu = Partition(out)
    if not nu.is_distinct():
        raise BijectionError(f"hook peeling of {mu} gave repeated parts {nu}")
    return nu


def sylvester_inverse(nu: Partition) -> Partition:
    """The odd partition mapped to ``nu`` by :func:`sylvester`."""
    if not nu.is_distinct():
        raise DomainError(f"{nu} has repeated parts")
    if not nu:
        return Partition()
    m = (len(nu) + 1) // 2
    parts = list(nu) + [0]
    A = [0] * (m + 2)
    B = [0] * (m + 1)
    B[m] = parts[2 * m - 1] if len(nu) % 2 == 0 else 0
    for i in range(m, 0, -1):
        A[i] = parts[2 * i - 2] - B[i]
        if i > 1:
            B[i - 1] = parts[2 * i - 3] - A[i]
    # Frobenius coordinates of rho: alpha_i = B_i, beta_i = A_i - 1
    if any(B[i] < 0 or A[i] < 1 for i in range(1, m + 1)):
        raise BijectionError(f"{nu} does not decode to a diagram")
    rho = [B[i] + i for i in range(1, m + 1)]
    height = A[1]  # rho'_1 = beta_1 + 1
    for r in range(m + 1, height + 1):
        rho.append(sum(1 for i in range(1, m + 1) if A[i] - 1 + i >= r))
    mu = Partition(2 * x - 1 for x in rho)
    if sylvester(mu) != nu:
        raise BijectionError(f"inverse of {nu} failed the round trip")
    return mu


@dataclass(frozen=True)
class Transport:
    """Statistics of ``nu = sylvester(mu)`` predicted from ``mu`` alone."""

    gamma: int
    E: int
    largest: int

    @classmethod
    def predicted(cls, mu: Partition) -> "Transport":
        if not mu:
            return cls(0, 0, 0)
        return cls(len(mu), (mu.size - len(mu)) // 2, len(mu) + (mu[0] - 1) // 2)

    @classmethod
    def observed(cls, nu: Partition) -> "Transport":
        s = stats(nu)
        return cls(s.gamma, s.E, nu.largest)


@dataclass(frozen=True)
class Pipeline:
    pi: Partition
    j: int
    N: int | None
    odd: Partition
    distinct: Partition
    transport: Transport

    @property
    def consistent(self) -> bool:
        ok = (self.transport == Transport.predicted(self.odd)
              and self.transport.gamma == self.j and self.transport.E == self.pi.size)
        if self.N is not None:
            ok = ok and self.transport.largest <= self.N
        return ok

    def render(self) -> str:
        t = self.transport
        bound = f" <= N = {self.N}" if self.N is not None else ""

        def show(p: Partition) -> str:
            return str(p) if p else "∅"

        return "\n".join([
            f"pi        = {show(self.pi)}",
            f"pi_o      = {show(self.odd)}",
            f"pi_d      = {show(self.distinct)}",
            f"gamma     = {t.gamma} (j = {self.j})",
            f"E         = {t.E} (|pi| = {self.pi.size})",
            f"max part  = {t.largest}{bound}",
            f"transport = {'ok' if self.consistent else 'MISMATCH'}",
        ])


def pipeline(pi: Partition, j: int, N: int | None = None) -> Pipeline:
    """Run ``pi -> embed -> sylvester`` and record the transported statistics."""
    odd = embed(pi, j, N)
    nu = sylvester(odd)
    return Pipeline(pi, j, N, odd, nu, Transport.observed(nu))
