"""Shuffle, harmonic, inner shuffle and inner harmonic products.

The harmonic products are computed by enumerating merge maps
``f: {1..r} -> {1..d}``, ``g: {1..s} -> {1..d}`` (strictly increasing,
jointly surjective) rather than by the quasi-shuffle recursion, so the inner
harmonic product is the same enumeration with one extra filter.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Iterator

from .algebra import (
    NcPoly,
    ShapeError,
    bilinear_map,
    in_h1,
    in_hC,
    in_hC1,
    index_to_word,
    word_to_index,
)


@lru_cache(maxsize=None)
def _shuffle_words(u: str, v: str) -> NcPoly:
    if not u:
        return NcPoly.word(v)
    if not v:
        return NcPoly.word(u)
    left = _shuffle_words(u[1:], v)
    right = _shuffle_words(u, v[1:])
    acc: dict[str, Fraction] = {}
    for w, c in left.items():
        acc[u[0] + w] = c
    for w, c in right.items():
        key = v[0] + w
        acc[key] = acc.get(key, 0) + c
    return NcPoly._raw(acc)


def shuffle(a: NcPoly, b: NcPoly) -> NcPoly:
    return bilinear_map(_shuffle_words, a, b)


@dataclass(frozen=True)
class HarmonicMergePair:
    """Images of the strictly increasing maps f and g (0-based positions)."""

    f: tuple[int, ...]
    g: tuple[int, ...]
    d: int

    def confined(self) -> bool:
        """Every f(i) lies between g(1) and g(s)."""
        if not self.g:
            return not self.f
        return all(self.g[0] <= i <= self.g[-1] for i in self.f)


@lru_cache(maxsize=None)
def merge_pairs(r: int, s: int) -> tuple[HarmonicMergePair, ...]:
    out = []
    for d in range(max(r, s), r + s + 1):
        overlap = r + s - d
        for im_f in combinations(range(d), r):
            rest = tuple(i for i in range(d) if i not in im_f)
            # Im g must cover the complement of Im f and meet Im f in `overlap` points
            for shared in combinations(im_f, overlap):
                im_g = tuple(sorted(rest + shared))
                out.append(HarmonicMergePair(im_f, im_g, d))
    return tuple(out)


def iter_merges(k: tuple[int, ...], l: tuple[int, ...], confined: bool = False) -> Iterator[tuple[int, ...]]:
    """Merged indices m for every merge pair of k (via f) and l (via g)."""
    for pair in merge_pairs(len(k), len(l)):
        if confined and not pair.confined():
            continue
        m = [0] * pair.d
        for a, pos in enumerate(pair.f):
            m[pos] += k[a]
        for b, pos in enumerate(pair.g):
            m[pos] += l[b]
        yield tuple(m)


@lru_cache(maxsize=None)
def _harmonic_words(u: str, v: str) -> NcPoly:
    k, l = word_to_index(u), word_to_index(v)
    return NcPoly.sum_of(index_to_word(m) for m in iter_merges(k, l))


def harmonic(a: NcPoly, b: NcPoly) -> NcPoly:
    if not (in_h1(a) and in_h1(b)):
        raise ShapeError("harmonic product needs both arguments in h^1")
    return bilinear_map(_harmonic_words, a, b)


@lru_cache(maxsize=None)
def _inner_shuffle_words(w: str, v: str) -> NcPoly:
    if len(v) < 2:
        return NcPoly.zero()
    inner = _shuffle_words(w, v[1:-1])
    return NcPoly._raw({v[0] + u + v[-1]: c for u, c in inner.items()})


def inner_shuffle(a: NcPoly, b: NcPoly) -> NcPoly:
    """Shuffle ``a`` into the interior of each word of ``b`` (length-1 words give 0)."""
    if not in_hC(b):
        raise ShapeError("inner shuffle needs its right argument in h_C")
    return bilinear_map(_inner_shuffle_words, a, b)


@lru_cache(maxsize=None)
def _inner_harmonic_words(u: str, v: str) -> NcPoly:
    k, l = word_to_index(u), word_to_index(v)
    return NcPoly.sum_of(index_to_word(m) for m in iter_merges(k, l, confined=True))


def inner_harmonic(a: NcPoly, b: NcPoly) -> NcPoly:
    """Harmonic product with every part of ``a`` confined between the end parts of ``b``.

    ``1`` acts as the identity on the left.
    """
    if not in_h1(a):
        raise ShapeError("inner harmonic product needs its left argument in h^1")
    if not in_hC1(b):
        raise ShapeError("inner harmonic product needs its right argument in h_C^1")
    return bilinear_map(_inner_harmonic_words, a, b)


def _bounded_chain_sum(k: tuple[int, ...], lo: int, hi: int, first: int | None, last: int | None) -> Fraction:
    """Sum of prod n_i^-k_i over lo <= n_1 < ... < n_r <= hi, optionally pinning n_1 / n_r."""
    r = len(k)
    # totals[n] = sum over chains of the parts seen so far ending at value n
    totals = {n: Fraction(1, n ** k[0]) for n in range(lo, hi + 1) if first is None or n == first}
    for j in range(1, r):
        nxt: dict[int, Fraction] = {}
        running = Fraction(0)
        for n in range(lo, hi + 1):
            if running:
                nxt[n] = running / n ** k[j]
            running += totals.get(n, 0)
        totals = nxt
    if last is not None:
        return totals.get(last, Fraction(0))
    return sum(totals.values(), Fraction(0))


def strict_chain_sum(k: tuple[int, ...], lo: int, hi: int) -> Fraction:
    """Sum over lo <= n_1 < ... < n_r <= hi of prod n_i^-k_i (1 for the empty index)."""
    if not k:
        return Fraction(1)
    return _bounded_chain_sum(k, lo, hi, None, None)


def f_pq_harmonic(w: NcPoly, p: int, q: int) -> Fraction:
    """The finite sum over n_1 < ... < n_r with n_1 = p and n_r = q, extended linearly."""
    if p > q:
        raise ValueError(f"need p <= q, got p={p}, q={q}")
    if p < 1:
        raise ValueError("p must be positive")
    if not in_hC1(w):
        raise ShapeError("f_pq is defined on h_C^1")
    total = Fraction(0)
    for word, c in w.items():
        k = word_to_index(word)
        if len(k) == 1:
            val = Fraction(1, p ** k[0]) if p == q else Fraction(0)
        else:
            val = _bounded_chain_sum(k, p, q, p, q)
        total += c * val
    return total
