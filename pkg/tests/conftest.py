import pytest

from qschmidt.partitions import Partition, boulet_weight
from qschmidt.series import Ring, SignedMonomial, TruncationSpec, add


def qring(degree):
    return Ring(("q",), TruncationSpec.q_only(degree))


def qpoly(coeffs, degree=None):
    """``[c0, c1, ...]`` as a polynomial in q."""
    ring = qring(len(coeffs) - 1 if degree is None else degree)
    return ring.poly(list(enumerate(coeffs)))


def brute_weight_sum(partitions, sub, ring, gamma=None):
    """Sum of substituted Boulet weights, one partition at a time."""
    total = ring.zero()
    for p in partitions:
        p = Partition(p)
        if gamma is not None and sum(p[0::2]) - sum(p[1::2]) != gamma:
            continue
        m = SignedMonomial.one()
        for img, k in zip(sub.images, boulet_weight(p)):
            m = m * img ** k
        total = add(total, m.to_poly(ring))
    return total


@pytest.fixture
def q20():
    return qring(20)
