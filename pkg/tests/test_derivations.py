from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from cmzv.algebra import NcPoly, ShapeError, compositions, index_to_word, word_z, z_word
from cmzv.derivations import (
    Commutator,
    Delta,
    F,
    G,
    LinearCombination,
    Partial,
    S,
    apply,
    commutator,
    delta,
    ones_star,
    ones_word,
    partial,
    s_op,
)

W = NcPoly.word
words = st.text(alphabet="xy", max_size=4)
ops = st.sampled_from([Delta(1), Delta(2), Delta(3), Partial(1), Partial(2), Partial(3), S])


def test_generator_images():
    assert delta(1, W("y")) == NcPoly({"yx": 1, "yy": 1})
    assert delta(2, W("x")) == 0
    assert partial(1, W("x")) == W("yx")
    assert partial(2, W("y")) == NcPoly({"yxx": -1, "yyx": -1})
    assert s_op(W("x")) == W("xx")
    assert s_op(W("y")) == NcPoly({"xy": 1, "yx": 1, "yy": 1})


@given(ops, words, words)
def test_leibniz_rule(op, u, v):
    a, b = W(u), W(v)
    assert apply(op, a * b) == apply(op, a) * b + a * apply(op, b)


@given(ops)
def test_derivations_kill_constants(op):
    assert apply(op, NcPoly.one()) == 0


def test_partial_kills_x_plus_y():
    for m in range(1, 5):
        assert partial(m, W("x") + W("y")) == 0


def test_commutator_is_antisymmetric():
    a = W("yxy")
    assert commutator(Delta(1), Partial(2), a) == -commutator(Partial(2), Delta(1), a)


def test_s_delta_commutator_example():
    assert apply(Commutator(S, Delta(1)), W("y")) == delta(2, W("y"))


def test_linear_combination():
    op = LinearCombination((2, Delta(1)), (Fraction(-1, 2), Partial(1)))
    a = W("yx")
    assert apply(op, a) == delta(1, a).scale(2) - partial(1, a).scale(Fraction(1, 2))


def test_invalid_m():
    with pytest.raises(ValueError):
        Delta(0)


@pytest.mark.parametrize("m", range(0, 6))
def test_ones_star_is_sum_of_all_indices_of_weight_m(m):
    expected = NcPoly.sum_of(index_to_word(k) for k in compositions(m)) if m else NcPoly.one()
    assert ones_star(m) == expected
    assert ones_word(m) == "y" * m


def test_F_examples():
    assert F(W(word_z(2)), 0) == NcPoly({"yyx": 1, "yxx": -1})
    assert F(W(word_z(3)), 0) == NcPoly({"yxxx": -1, "yxyx": 1, "yyxx": 1})


def test_F_needs_hC0():
    with pytest.raises(ShapeError):
        F(W("yy"), 1)


@pytest.mark.parametrize("w", ["yx", "yxx", "yyx", "yxyx", "yyxx"])
@pytest.mark.parametrize("m", [1, 2, 3])
def test_G_equals_partial(w, m):
    assert G(m, W(w)) == partial(m, W(w))


def test_delta_via_harmonic_product():
    from cmzv.products import harmonic

    a = W(z_word(1, 2))
    for m in range(1, 4):
        zm = W(word_z(m))
        assert delta(m, a) == harmonic(zm, a) - a * zm
