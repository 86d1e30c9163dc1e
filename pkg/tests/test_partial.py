import itertools
from math import comb, factorial

import pytest
from hypothesis import given, strategies as st

from ellislab.errors import CapExceeded
from ellislab.partial import (
    PartialBijection, carrier_n, compose, enumerate_monoid, invert, is_order_preserving,
    parse_partial, rank,
)

C3 = carrier_n(3)
C5 = carrier_n(5)


def pb(mapping, carrier=C3):
    return PartialBijection(mapping.items(), carrier)


@st.composite
def partials(draw, n=5):
    dom = draw(st.lists(st.integers(1, n), unique=True, max_size=n))
    img = draw(st.permutations(range(1, n + 1)))[:len(dom)]
    return PartialBijection(zip(dom, img), carrier_n(n))


def brute_compose(f, g):
    """f after g, straight from the definition on the carrier."""
    out = {}
    for x in g.carrier:
        y = g(x)
        if y is not None and f(y) is not None:
            out[x] = f(y)
    return PartialBijection(out.items(), g.carrier)


def test_compose_examples():
    assert compose(pb({2: 3}), pb({1: 2})) == pb({1: 3})
    assert compose(pb({1: 2}), pb({1: 3})) == pb({})
    g = pb({1: 3, 2: 1})
    assert compose(PartialBijection.identity(C3), g) == g


def test_invert_and_rank_examples():
    assert invert(pb({1: 3, 2: 1})) == pb({3: 1, 1: 2})
    assert invert(pb({})) == pb({})
    assert rank(pb({1: 3, 2: 1})) == 2 and rank(pb({})) == 0
    assert rank(PartialBijection.identity(C3)) == 3


def test_order_preserving_examples():
    assert is_order_preserving(pb({1: 2, 3: 5}, C5))
    assert not is_order_preserving(pb({1: 5, 3: 2}, C5))
    assert is_order_preserving(pb({}))


def test_not_injective_rejected():
    with pytest.raises(ValueError):
        pb({1: 2, 3: 2})


def test_text_round_trip():
    f = pb({1: 3, 2: 1})
    assert str(f) == "{1->3, 2->1}"
    assert parse_partial(str(f), C3) == f


@given(partials(), partials(), partials())
def test_composition_laws(f, g, h):
    assert compose(f, g) == brute_compose(f, g)
    assert compose(f, compose(g, h)) == compose(compose(f, g), h)
    assert compose(compose(f, invert(f)), f) == f
    assert invert(compose(f, g)) == compose(invert(g), invert(f))
    assert rank(compose(f, g)) <= min(rank(f), rank(g))


@given(partials(), partials())
def test_order_preserving_closed(f, g):
    if is_order_preserving(f) and is_order_preserving(g):
        assert is_order_preserving(compose(f, g))
        assert is_order_preserving(invert(f))


@pytest.mark.parametrize("n", range(1, 6))
def test_enumeration_sizes(n):
    assert len(enumerate_monoid(n, "I")) == sum(comb(n, k) ** 2 * factorial(k) for k in range(n + 1))
    assert len(enumerate_monoid(n, "J")) == comb(2 * n, n)


@pytest.mark.parametrize("n", range(1, 4))
def test_enumeration_against_brute_force(n):
    # every relation on the carrier, kept when it is a partial bijection
    pts = range(1, n + 1)
    pairs = list(itertools.product(pts, pts))
    found = set()
    for mask in range(1 << len(pairs)):
        rel = [pairs[i] for i in range(len(pairs)) if mask >> i & 1]
        if len({a for a, _ in rel}) == len(rel) == len({b for _, b in rel}):
            found.add(PartialBijection(rel, carrier_n(n)))
    assert set(enumerate_monoid(n, "I")) == found
    assert set(enumerate_monoid(n, "J")) == {f for f in found if is_order_preserving(f)}


def test_enumeration_examples_and_cap():
    assert set(map(str, enumerate_monoid(1, "I"))) == {"{}", "{1->1}"}
    with pytest.raises(ValueError):
        enumerate_monoid(0)
    with pytest.raises(CapExceeded):
        enumerate_monoid(7)


def test_env_cap(monkeypatch):
    monkeypatch.setenv("ELLIS_LAB_CAP", "2")
    with pytest.raises(CapExceeded):
        enumerate_monoid(3)
