from collections import Counter
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from cmzv.algebra import NcPoly, ShapeError, index_to_word, z_word
from cmzv.products import (
    f_pq_harmonic,
    harmonic,
    inner_harmonic,
    inner_shuffle,
    iter_merges,
    merge_pairs,
    shuffle,
    strict_chain_sum,
)
from oracles import brute_shuffle, index_of, truncated_mzv

W = NcPoly.word
words = st.text(alphabet="xy", max_size=4)
yword = st.text(alphabet="xy", max_size=3).map(lambda w: "y" + w)
polys = st.dictionaries(words, st.integers(-3, 3), max_size=3).map(NcPoly)
h1polys = st.dictionaries(st.one_of(st.just(""), yword), st.integers(-3, 3), max_size=3).map(NcPoly)
indices = st.lists(st.integers(1, 3), min_size=1, max_size=3).map(tuple)


def as_poly(counter: Counter) -> NcPoly:
    return NcPoly(dict(counter))


# -- shuffle --------------------------------------------------------------------------------


def test_shuffle_example():
    assert shuffle(W("yx"), W("yx")) == NcPoly({"yxyx": 2, "yyxx": 4})


@given(words, words)
def test_shuffle_matches_position_enumeration(u, v):
    assert shuffle(W(u), W(v)) == as_poly(brute_shuffle(u, v))


@given(polys, polys, polys)
def test_shuffle_commutative_associative_unital(a, b, c):
    assert shuffle(a, b) == shuffle(b, a)
    assert shuffle(shuffle(a, b), c) == shuffle(a, shuffle(b, c))
    assert shuffle(NcPoly.one(), a) == a


# -- harmonic -------------------------------------------------------------------------------


def test_harmonic_example():
    # z_1 * z_1 = 2 z_1 z_1 + z_2
    assert harmonic(W("y"), W("y")) == NcPoly({"yy": 2, "yx": 1})


@given(indices, indices)
def test_harmonic_multiplies_truncated_series(k, l):
    # the stuffle product holds for strictly increasing sums at every cutoff
    N = 6
    prod = harmonic(W(index_to_word(k)), W(index_to_word(l)))
    rhs = sum((c * truncated_mzv(index_of(w), N) for w, c in prod.items()), Fraction(0))
    assert truncated_mzv(k, N) * truncated_mzv(l, N) == rhs


@given(h1polys, h1polys, h1polys)
def test_harmonic_commutative_associative(a, b, c):
    assert harmonic(a, b) == harmonic(b, a)
    assert harmonic(harmonic(a, b), c) == harmonic(a, harmonic(b, c))
    assert harmonic(NcPoly.one(), a) == a


def test_harmonic_rejects_words_outside_h1():
    with pytest.raises(ShapeError):
        harmonic(W("xy"), W("y"))


def brute_merge_count(r: int, s: int) -> int:
    # pairs of increasing maps [r] -> [d], [s] -> [d] whose images cover [d]
    count = 0
    for d in range(max(r, s), r + s + 1):
        for fi in combinations(range(d), r):
            for gi in combinations(range(d), s):
                if set(fi) | set(gi) == set(range(d)):
                    count += 1
    return count


@pytest.mark.parametrize("r,s", [(1, 1), (1, 2), (2, 2), (2, 3), (3, 3)])
def test_merge_pairs_are_all_covering_pairs(r, s):
    pairs = merge_pairs(r, s)
    assert len(pairs) == brute_merge_count(r, s)
    assert len(set(pairs)) == len(pairs)


def test_confined_merges_keep_left_inside_right():
    merged = Counter(iter_merges((1,), (1, 1), confined=True))
    assert merged == Counter({(2, 1): 1, (1, 1, 1): 1, (1, 2): 1})


# -- inner products -------------------------------------------------------------------------


def test_inner_shuffle_examples():
    assert inner_shuffle(W("y"), W("yxx")) == NcPoly({"yxyx": 1, "yyxx": 1})
    assert inner_shuffle(W("xx"), W("yx")) == W("yxxx")
    assert inner_shuffle(W("x"), W("y")) == 0


@given(words, st.text(alphabet="xy", min_size=2, max_size=4))
def test_inner_shuffle_keeps_endpoints(u, v):
    expected = as_poly(Counter({v[0] + w + v[-1]: c for w, c in brute_shuffle(u, v[1:-1]).items()}))
    assert inner_shuffle(W(u), W(v)) == expected


def test_inner_shuffle_needs_right_argument_in_hC():
    with pytest.raises(ShapeError):
        inner_shuffle(W("x"), NcPoly.one())


def test_inner_harmonic_examples():
    assert inner_harmonic(W("y"), W("y")) == W("yx")
    k, l1, l2 = 2, 1, 3
    expected = NcPoly({z_word(l1 + k, l2): 1, z_word(l1, k, l2): 1, z_word(l1, l2 + k): 1})
    assert inner_harmonic(W(z_word(k)), W(z_word(l1, l2))) == expected
    assert inner_harmonic(NcPoly.one(), W("yxy")) == W("yxy")


def test_inner_harmonic_shapes():
    with pytest.raises(ShapeError):
        inner_harmonic(W("x"), W("y"))
    with pytest.raises(ShapeError):
        inner_harmonic(W("y"), W("xy"))


# -- f_{p,q} ---------------------------------------------------------------------------------


def brute_fpq(k, p, q) -> Fraction:
    if len(k) == 1:
        return Fraction(1, p ** k[0]) if p == q else Fraction(0)
    total = Fraction(0)
    for inner in combinations(range(p + 1, q), len(k) - 2):
        ns = (p,) + inner + (q,)
        if p == q:
            continue
        term = Fraction(1)
        for n, e in zip(ns, k):
            term /= n**e
        total += term
    return total


@pytest.mark.parametrize("k", [(2, 1), (1, 1, 3), (2, 2, 1, 1), (1, 2, 1, 2)])
def test_f_pq_matches_enumeration(k):
    for q in range(1, 8):
        for p in range(1, q + 1):
            assert f_pq_harmonic(W(index_to_word(k)), p, q) == brute_fpq(k, p, q)


def test_f_pq_depth_one_and_empty_region():
    assert f_pq_harmonic(W("yx"), 3, 3) == Fraction(1, 9)
    assert f_pq_harmonic(W("yx"), 2, 3) == 0
    assert f_pq_harmonic(W("yyy"), 2, 3) == 0  # three strictly increasing values in [2,3]


def test_f_pq_errors():
    with pytest.raises(ValueError):
        f_pq_harmonic(W("y"), 3, 2)
    with pytest.raises(ShapeError):
        f_pq_harmonic(W("xy"), 1, 2)


def test_strict_chain_sum():
    assert strict_chain_sum((), 2, 5) == 1
    assert strict_chain_sum((1, 1), 1, 3) == Fraction(1, 2) + Fraction(1, 3) + Fraction(1, 6)


def test_inner_harmonic_factorises_f_pq():
    a = W(z_word(1, 2))
    w = W(z_word(2, 1, 1))
    prod = inner_harmonic(a, w)
    for q in range(1, 7):
        for p in range(1, q + 1):
            assert f_pq_harmonic(prod, p, q) == f_pq_harmonic(w, p, q) * strict_chain_sum((1, 2), p, q)
