from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from cmzv.algebra import (
    NcPoly,
    ShapeError,
    compositions,
    in_h0,
    in_h1,
    in_hC,
    in_hC0,
    in_hC1,
    index_to_word,
    parse_poly,
    serialize,
    word_to_index,
    word_z,
    words_of_length,
    z_word,
)

words = st.text(alphabet="xy", max_size=5)
coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=6)
polys = st.dictionaries(words, coeffs, max_size=4).map(NcPoly)
indices = st.lists(st.integers(1, 4), min_size=1, max_size=4).map(tuple)


def test_z_words():
    assert word_z(1) == "y"
    assert word_z(3) == "yxx"
    assert z_word(2, 1, 3) == "yxyyxx"
    with pytest.raises(ValueError):
        word_z(0)


@given(indices)
def test_index_word_round_trip(k):
    assert word_to_index(index_to_word(k)) == k
    assert len(index_to_word(k)) == sum(k)


def test_word_to_index_rejects_words_not_starting_with_y():
    with pytest.raises(ShapeError):
        word_to_index("xy")
    assert word_to_index("") == ()


def test_zero_coefficients_are_dropped():
    p = NcPoly({"xy": 0, "y": Fraction(1, 2)})
    assert p.words() == ["y"]
    assert NcPoly({"x": 1}) - NcPoly({"x": 1}) == 0


def test_invalid_letters_rejected():
    with pytest.raises(ValueError):
        NcPoly({"xz": 1})


def test_canonical_order_is_deglex():
    p = NcPoly({"yy": 1, "x": 2, "xy": 3, "": 1})
    assert p.words() == ["", "x", "xy", "yy"]


def test_serialize_examples():
    assert serialize(NcPoly({"yx": 1, "yxx": Fraction(-1, 2)})) == "1 yx + -1/2 yxx"
    assert serialize(NcPoly.one()) == "1 1"
    assert serialize(NcPoly.zero()) == "0"


@given(polys)
def test_serialize_round_trip(p):
    assert parse_poly(serialize(p)) == p


@pytest.mark.parametrize("bad", ["1 yz", "yx", "1 yx + 2 yx"])
def test_parse_rejects_malformed(bad):
    with pytest.raises(ValueError):
        parse_poly(bad)


@given(polys, polys, polys)
def test_ring_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert (a + b) * c == a * c + b * c
    assert a + b == b + a
    assert a * NcPoly.one() == a == NcPoly.one() * a
    assert a - a == 0


def test_concatenation_is_not_commutative():
    x, y = NcPoly.word("x"), NcPoly.word("y")
    assert x * y != y * x
    assert (x + y) ** 2 == NcPoly({"xx": 1, "xy": 1, "yx": 1, "yy": 1})


def test_subspace_predicates():
    assert in_hC(NcPoly.word("yx")) and not in_hC(NcPoly.one())
    assert in_h0(NcPoly.one()) and in_h0(NcPoly.word("yxx")) and not in_h0(NcPoly.word("yy"))
    assert in_h1(NcPoly.word("yy")) and not in_h1(NcPoly.word("xy"))
    assert in_hC0(NcPoly.word("yx")) and not in_hC0(NcPoly.one()) and not in_hC0(NcPoly.word("y"))
    assert in_hC1(NcPoly.word("y")) and not in_hC1(NcPoly.one())
    # a combination is in a subspace iff every word is
    assert not in_h0(NcPoly({"yx": 1, "yy": 1}))


@pytest.mark.parametrize("n", range(1, 9))
def test_composition_counts(n):
    comps = list(compositions(n))
    assert len(comps) == 2 ** (n - 1)
    assert len(set(comps)) == len(comps)
    assert all(sum(c) == n for c in comps)
    for r in range(1, n + 1):
        assert all(len(c) == r for c in compositions(n, r))


def test_words_of_length():
    assert list(words_of_length(2)) == ["xx", "xy", "yx", "yy"]
