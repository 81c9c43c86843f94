"""Exact noncommutative polynomials over the two-letter alphabet {x, y}.

Words are plain Python strings over ``"xy"``; the empty string is the unit.
:class:`NcPoly` is an immutable map from words to :class:`fractions.Fraction`
with zero coefficients never stored, so structural equality is mathematical
equality.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Union

X = "x"
Y = "y"
LETTERS = (X, Y)

Scalar = Union[int, Fraction]


class ShapeError(ValueError):
    """A word or polynomial is not of the shape an operation requires."""


def check_word(w: str) -> str:
    if any(c not in LETTERS for c in w):
        raise ShapeError(f"not a word over {{x, y}}: {w!r}")
    return w


def word_key(w: str) -> tuple[int, str]:
    """Degree-lexicographic key with x < y."""
    return (len(w), w)


def word_z(k: int) -> str:
    """The word z_k = y x^(k-1)."""
    if k < 1:
        raise ValueError(f"z_k needs k >= 1, got {k}")
    return Y + X * (k - 1)


def z_word(*index: int) -> str:
    return "".join(word_z(k) for k in index)


def index_to_word(index: Iterable[int]) -> str:
    return z_word(*index)


def word_to_index(w: str) -> tuple[int, ...]:
    """Split a word of y{x,y}* (or the empty word) into its z-index."""
    check_word(w)
    if not w:
        return ()
    if w[0] != Y:
        raise ShapeError(f"{w!r} is not a z-word (must start with y)")
    return tuple(len(part) + 1 for part in w[1:].split(Y))


class NcPoly:
    """A Q-linear combination of words, stored in canonical form."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[str, Scalar] | None = None):
        clean: dict[str, Fraction] = {}
        if terms:
            for w, c in terms.items():
                c = Fraction(c)
                if c:
                    clean[check_word(w)] = clean.get(w, Fraction(0)) + c
        self._terms = clean
        self._hash: int | None = None

    @classmethod
    def _raw(cls, terms: dict[str, Fraction]) -> NcPoly:
        # trusted constructor: words valid, coefficients nonzero Fractions
        p = cls.__new__(cls)
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def word(cls, w: str, coeff: Scalar = 1) -> NcPoly:
        return cls({w: coeff})

    @classmethod
    def zero(cls) -> NcPoly:
        return cls._raw({})

    @classmethod
    def one(cls) -> NcPoly:
        return cls._raw({"": Fraction(1)})

    @classmethod
    def sum_of(cls, words: Iterable[str]) -> NcPoly:
        acc: dict[str, Fraction] = {}
        for w in words:
            acc[w] = acc.get(w, Fraction(0)) + 1
        return cls(acc)

    # -- inspection ---------------------------------------------------------

    @property
    def terms(self) -> Mapping[str, Fraction]:
        return dict(self._terms)

    def items(self) -> Iterator[tuple[str, Fraction]]:
        """Terms in canonical (deglex, x < y) order."""
        for w in sorted(self._terms, key=word_key):
            yield w, self._terms[w]

    def words(self) -> list[str]:
        return sorted(self._terms, key=word_key)

    def coeff(self, w: str) -> Fraction:
        return self._terms.get(w, Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def degree(self) -> int:
        return max((len(w) for w in self._terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({len(w) for w in self._terms}) <= 1

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, NcPoly):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self._terms == NcPoly({"": other})._terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: NcPoly | Scalar) -> NcPoly:
        other = as_poly(other)
        acc = dict(self._terms)
        for w, c in other._terms.items():
            v = acc.get(w, 0) + c
            if v:
                acc[w] = v
            else:
                acc.pop(w, None)
        return NcPoly._raw(acc)

    __radd__ = __add__

    def __neg__(self) -> NcPoly:
        return NcPoly._raw({w: -c for w, c in self._terms.items()})

    def __sub__(self, other: NcPoly | Scalar) -> NcPoly:
        return self + (-as_poly(other))

    def __rsub__(self, other: Scalar) -> NcPoly:
        return as_poly(other) - self

    def scale(self, c: Scalar) -> NcPoly:
        c = Fraction(c)
        if not c:
            return NcPoly.zero()
        return NcPoly._raw({w: c * v for w, v in self._terms.items()})

    def __mul__(self, other: NcPoly | Scalar) -> NcPoly:
        if isinstance(other, NcPoly):
            return concat(self, other)
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other: Scalar) -> NcPoly:
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, n: int) -> NcPoly:
        out = NcPoly.one()
        for _ in range(n):
            out = out * self
        return out

    # -- text form ----------------------------------------------------------

    def __str__(self) -> str:
        return serialize(self)

    def __repr__(self) -> str:
        return f"NcPoly({serialize(self)!r})"


def as_poly(a: NcPoly | str | Scalar) -> NcPoly:
    if isinstance(a, NcPoly):
        return a
    if isinstance(a, str):
        return NcPoly.word(a)
    return NcPoly({"": a})


def poly_add(a: NcPoly, b: NcPoly) -> NcPoly:
    return a + b


def poly_scale(c: Scalar, a: NcPoly) -> NcPoly:
    return a.scale(c)


def concat(a: NcPoly, b: NcPoly) -> NcPoly:
    acc: dict[str, Fraction] = {}
    for u, c in a._terms.items():
        for v, d in b._terms.items():
            w = u + v
            acc[w] = acc.get(w, 0) + c * d
    return NcPoly._raw({w: c for w, c in acc.items() if c})


poly_concat = concat


def linear_map(f, a: NcPoly) -> NcPoly:
    """Extend a word -> NcPoly function linearly to ``a``."""
    acc: dict[str, Fraction] = {}
    for w, c in a._terms.items():
        for v, d in f(w)._terms.items():
            acc[v] = acc.get(v, 0) + c * d
    return NcPoly._raw({w: c for w, c in acc.items() if c})


def bilinear_map(f, a: NcPoly, b: NcPoly) -> NcPoly:
    acc: dict[str, Fraction] = {}
    for u, c in a._terms.items():
        for v, d in b._terms.items():
            for w, e in f(u, v)._terms.items():
                acc[w] = acc.get(w, 0) + c * d * e
    return NcPoly._raw({w: c for w, c in acc.items() if c})


# -- subspace predicates -----------------------------------------------------
#
# h_C = hx + hy (no constants), h^0 = Q + y h x, h^1 = Q + y h,
# h_C^0 = h^0 ∩ h_C, h_C^1 = h^1 ∩ h_C.


def _all_words(a: NcPoly, pred) -> bool:
    return all(pred(w) for w in a._terms)


def in_hC(a: NcPoly) -> bool:
    return _all_words(a, lambda w: len(w) >= 1)


def in_h0(a: NcPoly) -> bool:
    return _all_words(a, lambda w: w == "" or (len(w) >= 2 and w[0] == Y and w[-1] == X))


def in_h1(a: NcPoly) -> bool:
    return _all_words(a, lambda w: w == "" or w[0] == Y)


def in_hC0(a: NcPoly) -> bool:
    return _all_words(a, lambda w: len(w) >= 2 and w[0] == Y and w[-1] == X)


def in_hC1(a: NcPoly) -> bool:
    return _all_words(a, lambda w: len(w) >= 1 and w[0] == Y)


# -- serialization -----------------------------------------------------------


def format_fraction(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def serialize(a: NcPoly) -> str:
    """Canonical text form, e.g. ``"1 yx + -1/2 yxx"``; the unit word is ``1``."""
    if a.is_zero():
        return "0"
    return " + ".join(f"{format_fraction(c)} {w or '1'}" for w, c in a.items())


def parse_poly(text: str) -> NcPoly:
    text = text.strip()
    if text == "0":
        return NcPoly.zero()
    terms: dict[str, Fraction] = {}
    for chunk in text.split(" + "):
        parts = chunk.split()
        if len(parts) != 2:
            raise ShapeError(f"bad term {chunk!r}")
        coeff, w = Fraction(parts[0]), parts[1]
        w = "" if w == "1" else check_word(w)
        if w in terms:
            raise ShapeError(f"repeated word {w or '1'!r}")
        terms[w] = coeff
    return NcPoly(terms)


def words_of_length(n: int) -> Iterator[str]:
    from itertools import product

    for letters in product(LETTERS, repeat=n):
        yield "".join(letters)


def words_up_to(n: int, min_len: int = 0) -> Iterator[str]:
    for k in range(min_len, n + 1):
        yield from words_of_length(k)


def compositions(n: int, parts: int | None = None) -> Iterator[tuple[int, ...]]:
    """Compositions of n into positive parts (optionally a fixed number)."""
    if n == 0:
        if parts in (None, 0):
            yield ()
        return
    if parts == 0:
        return
    for first in range(1, n + 1):
        rest = None if parts is None else parts - 1
        for tail in compositions(n - first, rest):
            yield (first,) + tail
