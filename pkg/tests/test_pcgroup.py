"""Arithmetic tests against independent closed-form oracles.

The Heisenberg and Klein-bottle multiplication laws have closed forms that
follow from the declared relations; collection must reproduce them exactly.
"""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nilcay import pcgroup
from nilcay.pcgroup import CollectionError, PresentationError, builtin, from_id


def heisenberg_mul(x, y):
    """Oracle: (i1+i2, j1+j2, k1+k2 - j1*i2) for a^i b^j c^k with ab = ba*c."""
    return (x[0] + y[0], x[1] + y[1], x[2] + y[2] - x[1] * y[0])


def klein_mul(x, y):
    """Oracle: a^i b^j * a^x b^y = a^(i + (-1)^j x) b^(j+y)."""
    sign = 1 if x[1] % 2 == 0 else -1
    return (x[0] + sign * y[0], x[1] + y[1])


@pytest.fixture(scope="module")
def heis():
    return builtin("heisenberg")


@pytest.fixture(scope="module")
def klein():
    return builtin("klein_bottle")


def test_spec_pinned_products(heis, klein):
    a, b, c = heis.generator(0), heis.generator(1), heis.generator(2)
    assert heis.multiply(a, b) == (1, 1, 0)
    assert heis.multiply(b, a) == (1, 1, -1)
    assert heis.commutator(a, b) == (0, 0, 1)
    ka, kb = klein.generator(0), klein.generator(1)
    assert klein.multiply(kb, ka) == (-1, 1)
    assert klein.commutator(ka, kb) == (-2, 0)


def test_identity_laws(heis):
    e = heis.identity
    x = (3, -2, 5)
    assert heis.multiply(x, e) == x
    assert heis.multiply(e, x) == x
    assert heis.multiply(x, heis.inverse(x)) == e
    assert heis.multiply(heis.inverse(x), x) == e


def test_heisenberg_matches_closed_form(heis):
    rng = random.Random(11)
    for _ in range(5000):
        x = tuple(rng.randint(-20, 20) for _ in range(3))
        y = tuple(rng.randint(-20, 20) for _ in range(3))
        assert heis.multiply(x, y) == heisenberg_mul(x, y)


def test_klein_matches_closed_form(klein):
    rng = random.Random(12)
    for _ in range(5000):
        x = (rng.randint(-20, 20), rng.randint(-20, 20))
        y = (rng.randint(-20, 20), rng.randint(-20, 20))
        assert klein.multiply(x, y) == klein_mul(x, y)


def test_zn_is_vector_addition():
    z3 = builtin("zn", n=3)
    rng = random.Random(13)
    for _ in range(1000):
        x = tuple(rng.randint(-50, 50) for _ in range(3))
        y = tuple(rng.randint(-50, 50) for _ in range(3))
        assert z3.multiply(x, y) == tuple(a + b for a, b in zip(x, y))


def test_product_families_componentwise():
    h3 = from_id("heisenberg_z3")
    rng = random.Random(14)
    for _ in range(2000):
        x = tuple(rng.randint(-10, 10) for _ in range(3)) + (rng.randrange(3),)
        y = tuple(rng.randint(-10, 10) for _ in range(3)) + (rng.randrange(3),)
        hx, hy = x[:3], y[:3]
        want = heisenberg_mul(hx, hy) + ((x[3] + y[3]) % 3,)
        assert h3.multiply(x, y) == want


@settings(max_examples=200)
@given(st.tuples(*[st.integers(-8, 8)] * 3), st.tuples(*[st.integers(-8, 8)] * 3),
       st.tuples(*[st.integers(-8, 8)] * 3))
def test_heisenberg_associativity_property(x, y, z):
    p = builtin("heisenberg")
    assert p.multiply(p.multiply(x, y), z) == p.multiply(x, p.multiply(y, z))


@settings(max_examples=200)
@given(st.tuples(st.integers(-8, 8), st.integers(-8, 8)),
       st.integers(-10, 10), st.integers(-10, 10))
def test_klein_power_law_property(x, j, k):
    p = builtin("klein_bottle")
    assert p.multiply(p.power(x, j), p.power(x, k)) == p.power(x, j + k)


def test_power_square_and_multiply(heis):
    x = (2, -1, 3)
    acc = heis.identity
    for k in range(1, 30):
        acc = heis.multiply(acc, x)
        assert heis.power(x, k) == acc
    assert heis.power(x, -7) == heis.inverse(heis.power(x, 7))
    assert heis.power(x, 0) == heis.identity


def test_power_addition_law_sampled(heis):
    rng = random.Random(18)
    for _ in range(300):
        x = tuple(rng.randint(-6, 6) for _ in range(3))
        j, k = rng.randint(-10, 10), rng.randint(-10, 10)
        assert heis.multiply(heis.power(x, j), heis.power(x, k)) == \
            heis.power(x, j + k)


def test_big_exponents_stay_exact(heis):
    big = 10**40
    assert heis.power((1, 0, 0), big) == (big, 0, 0)
    assert heis.multiply((big, big, 0), (big, 0, 0))[2] == -big * big


def test_normal_form_idempotence(heis):
    rng = random.Random(15)
    for _ in range(300):
        x = tuple(rng.randint(-30, 30) for _ in range(3))
        word = tuple((i, e) for i, e in enumerate(x) if e)
        assert heis.collect_word(word) == x


def test_letterwise_reference_agrees_with_fast_path():
    for fid in ("z2", "heisenberg", "zxz2", "heisenberg_z3"):
        p = from_id(fid)
        rng = random.Random(f"ref:{fid}")
        for _ in range(120):
            letters = []
            for _ in range(rng.randint(1, 8)):
                letters.append((rng.randrange(p.n), rng.choice((1, -1))))
            v = [0] * p.n
            p._letter_collect(v, letters, [10**5])
            fast = p.identity
            for i, s in letters:
                fast = p.multiply(fast, p.collect_word(((i, s),)))
            assert tuple(v) == fast


def test_conjugate_and_centrality(heis, klein):
    a, b, c = heis.generator(0), heis.generator(1), heis.generator(2)
    assert heis.conjugate(a, b) == (1, 0, 1)
    assert heis.is_central(c)
    assert not heis.is_central(a)
    assert klein.is_central((0, 2))
    assert not klein.is_central((1, 0))
    z2 = builtin("zn", n=2)
    assert z2.is_central((5, -3))


def test_centrality_implies_conjugation_fixed(heis):
    rng = random.Random(16)
    for x in [(0, 0, 4), (0, 0, -1), heis.identity]:
        assert heis.is_central(x)
        for _ in range(100):
            g = tuple(rng.randint(-10, 10) for _ in range(3))
            assert heis.conjugate(x, g) == x


def test_hirsch_rank():
    assert builtin("zn", n=2).hirsch_rank() == 2
    assert builtin("heisenberg").hirsch_rank() == 3
    assert from_id("zxz2").hirsch_rank() == 1
    assert from_id("heisenberg_z3").hirsch_rank() == 3
    # refusal without nilpotent flag or certification
    src = ("group W\nnilpotent false\ntorsion_prefix 0\n"
           "gen a order inf\ngen b order inf\n"
           "conj b by a = a^-2*b\nconjinv b by a = a^2*b\n")
    p = pcgroup.parse_presentation(src)
    with pytest.raises(PresentationError):
        p.hirsch_rank()
    assert builtin("klein_bottle").hirsch_rank() == 2  # certified built-in


def test_parse_roundtrip_of_builtin_sources():
    z2 = builtin("zn", n=2)
    again = pcgroup.parse_presentation(z2.source)
    assert again.gens == z2.gens and again.orders == z2.orders
    assert again.genset == z2.genset


def test_parse_errors_report_lines():
    with pytest.raises(PresentationError, match="line 2"):
        pcgroup.parse_presentation("group X\ngen a frobnicate inf\n")
    with pytest.raises(PresentationError, match="unknown generator"):
        pcgroup.parse_presentation("group X\ngen a order inf\npow b = 1\n")
    with pytest.raises(PresentationError, match="torsion block"):
        pcgroup.parse_presentation(
            "group X\nnilpotent true\ntorsion_prefix 1\ngen a order inf\n")
    with pytest.raises(PresentationError, match="both"):
        pcgroup.parse_presentation(
            "group X\ngen a order inf\ngen b order inf\n"
            "conj b by a = a^-2*b\n")


def test_element_serialization(heis):
    x = heis.element_from_str("1,0,-3")
    assert x == (1, 0, -3)
    assert heis.element_to_str(x) == "1,0,-3"
    with pytest.raises(ValueError):
        heis.element_from_str("1,2")


def test_collection_fuel_exhaustion():
    # exponent-doubling conjugation: c b = b^2 c^2, letterwise collection of
    # c * b^20 explodes and must hit the fuel bound instead of hanging
    src = ("group Doubler\nnilpotent false\ntorsion_prefix 0\n"
           "gen b order inf\ngen c order inf\n"
           "conj c by b = b*c^2\nconjinv c by b = b^-1*c^2\n")
    with pytest.raises((PresentationError, CollectionError)):
        p = pcgroup.parse_presentation(src)
        p.collect_word(((1, 1), (0, 20)), fuel=2000)


def test_unknown_family_and_bad_params():
    with pytest.raises(PresentationError):
        builtin("frobenius")
    with pytest.raises(PresentationError):
        builtin("zn_cross_cyclic", n=1, m=0)
    with pytest.raises(PresentationError):
        builtin("zn", n=0)


def test_direct_product_torsion_block_rule():
    zx = from_id("zxz2")
    z = builtin("zn", n=1)
    with pytest.raises(PresentationError):
        pcgroup.direct_product(zx, z)  # torsion would end up mid-basis
    ok = pcgroup.direct_product(z, zx)
    assert ok.torsion_len == 1 and ok.orders == (None, None, 2)
