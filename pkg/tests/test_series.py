import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import qpoly, qring
from qschmidt.series import (
    DivergenceError,
    NonInvertibleError,
    Ring,
    SignedMonomial,
    StructuralError,
    TruncationSpec,
    add,
    coeff_of,
    first_difference,
    mul,
    pochhammer,
    qbinomial,
    render,
    rogers_szego,
    series_inverse,
    substitute,
)

Q = SignedMonomial.of(q=1)


def pentagonal(degree):
    """Euler's pentagonal expansion of (q;q)_inf, written out independently."""
    c = [0] * (degree + 1)
    k = 0
    while True:
        hits = False
        for m in ({k} if k == 0 else {k, -k}):
            e = m * (3 * m - 1) // 2
            if e <= degree:
                c[e] += -1 if k % 2 else 1
                hits = True
        if not hits:
            return c
        k += 1


def test_gaussian_binomial_small_values():
    ring = qring(10)
    assert qbinomial(4, 2, Q, ring) == qpoly([1, 1, 2, 1, 1], 10)
    assert qbinomial(5, 0, Q, ring) == ring.one()
    assert qbinomial(3, 4, Q, ring) == ring.zero()
    assert qbinomial(6, 3, Q, ring).coefficients("q")[:10] == [1, 1, 2, 3, 3, 3, 3, 2, 1, 1]


@given(st.integers(1, 9), st.integers(1, 9))
def test_q_pascal_both_ways(n, k):
    ring = qring(40)
    lhs = qbinomial(n, k, Q, ring)
    first = add(qbinomial(n - 1, k - 1, Q, ring), mul(ring.mono(q=k), qbinomial(n - 1, k, Q, ring)))
    second = add(mul(ring.mono(q=n - k), qbinomial(n - 1, k - 1, Q, ring)), qbinomial(n - 1, k, Q, ring))
    assert lhs == first == second


@given(st.integers(0, 8), st.integers(0, 8))
def test_gaussian_binomial_at_one_is_binomial(n, k):
    from math import comb
    p = qbinomial(n, k, Q, qring(80))
    assert sum(c for _, c in p) == (comb(n, k) if k <= n else 0)


def test_infinite_product_matches_pentagonal_series():
    ring = qring(60)
    assert pochhammer(Q, Q, None, ring) == ring.poly(list(enumerate(pentagonal(60))))


def test_finite_product_and_truncation():
    ring = qring(4)
    # (1-q)(1-q^2)(1-q^3) = 1 - q - q^2 + q^4 + q^5 - q^6, cut at q^4
    assert pochhammer(Q, Q, 3, ring) == qpoly([1, -1, -1, 0, 1])
    assert pochhammer(Q, Q, 0, ring) == ring.one()


def test_geometric_inverse():
    ring = qring(12)
    inv = series_inverse(add(ring.one(), ring.mono(-1, q=1)))
    assert inv.coefficients("q") == [1] * 13


@settings(max_examples=60)
@given(st.sampled_from([1, -1]), st.lists(st.integers(-4, 4), min_size=1, max_size=8))
def test_inverse_is_two_sided(c0, tail):
    ring = qring(15)
    p = ring.poly([(0, c0)] + [(i + 1, c) for i, c in enumerate(tail)])
    assert mul(p, series_inverse(p)) == ring.one()


coeff_lists = st.lists(st.integers(-5, 5), min_size=0, max_size=7)


@given(coeff_lists, coeff_lists, coeff_lists)
def test_multiplication_ring_laws(a, b, c):
    ring = qring(9)
    pa, pb, pc = (ring.poly(list(enumerate(x))) for x in (a, b, c))
    assert mul(pa, pb) == mul(pb, pa)
    assert mul(mul(pa, pb), pc) == mul(pa, mul(pb, pc))
    assert mul(pa, add(pb, pc)) == add(mul(pa, pb), mul(pa, pc))


def test_total_degree_truncation_in_four_variables():
    ring = Ring(("a", "b", "c", "d"), TruncationSpec(total=3))
    p = add(ring.one(), ring.mono(a=1, b=1))
    sq = mul(p, p)
    assert sq.coeff(a=1, b=1) == 2
    assert sq.coeff(a=2, b=2) == 0


def test_laurent_z_window():
    ring = Ring(("q", "z"), TruncationSpec.qz(6, 2))
    p = mul(ring.mono(z=2), ring.mono(z=1))
    assert not p
    assert not ring.mono(q=1, z=3)
    assert mul(ring.mono(z=-1), ring.mono(q=1, z=2)).coeff(q=1, z=1) == 1


def test_negative_exponent_outside_z_is_rejected():
    with pytest.raises(StructuralError):
        TruncationSpec.make({"q": 5}, {"q": -1})
    with pytest.raises(StructuralError):
        Ring(("x",))


def test_mixed_rings_are_rejected():
    with pytest.raises(StructuralError):
        add(qring(3).one(), qring(4).one())


def test_non_unit_constant_term():
    ring = qring(5)
    with pytest.raises(NonInvertibleError):
        series_inverse(ring.const(2))


def test_infinite_product_needs_contraction():
    ring = Ring(("q", "z"), TruncationSpec.qz(6, 3))
    with pytest.raises(DivergenceError):
        pochhammer(SignedMonomial.of(z=1), SignedMonomial.of(z=1), None, ring)


def test_substitution_with_signs():
    src = Ring(("a", "b"), TruncationSpec(total=6))
    ring = qring(6)
    p = add(src.mono(a=3), src.mono(2, a=1, b=2))
    out = substitute(p, {"a": SignedMonomial.of(-1, q=1), "b": SignedMonomial(-1)}, ring)
    # (-q)^3 + 2 (-q) (-1)^2
    assert out == qpoly([0, -2, 0, -1], 6)


def test_rogers_szego_small_case():
    ring = Ring(("q", "z"), TruncationSpec.qz(6, 3, 0))
    h2 = rogers_szego(2, ring)
    assert render(h2) == "1 + z + z^2 + q*z"


def test_coefficient_extraction():
    ring = Ring(("q", "z"), TruncationSpec.qz(6, 3))
    p = add(ring.mono(3, q=2, z=1), ring.mono(q=4, z=-1))
    assert coeff_of(p, "z", 1) == coeff_of(p, "z", 1).ring.mono(3, q=2)
    assert coeff_of(p, "q", 4).coeff(z=-1) == 1


def test_render_and_first_difference():
    ring = qring(5)
    a, b = qpoly([1, 2, 0, -1], 5), qpoly([1, 2, 1, -1], 5)
    assert render(a) == "1 + 2*q - q^3"
    assert render(ring.zero()) == "0"
    assert first_difference(a, a) is None
    assert first_difference(a, b) == ((2,), 0, 1)
